"""Generalized Gell-Mann bases, coherence vectors and correlation tensors.

Every generator satisfies ``Tr(l_a l_b) = 2 delta_ab``. For ``r = 2`` the
generators are the Pauli matrices and for ``r = 3`` the Gell-Mann matrices,
both in their conventional order. For ``r >= 4`` the order is: all symmetric
off-diagonal matrices, then all antisymmetric ones (pairs ``j < k`` in
lexicographic order), then the ``r - 1`` diagonal ones.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BadDimensionError, DimMismatchError
from .state import DensityMatrix, PureState, partial_trace

REAL_TOL = 1e-10


class Normalization(enum.Enum):
    """Choice of the identity element ``l^0`` of a local operator basis.

    TRACE_UNIFORM uses ``sqrt(2/r) I`` so that ``Tr(l^0 l^0) = 2`` like every
    generator; TWO_OVER_R uses ``(2/r) I``. The two agree for qubits.
    """

    TRACE_UNIFORM = "trace-uniform"
    TWO_OVER_R = "two-over-r"

    def identity_scale(self, r: int) -> float:
        if self is Normalization.TRACE_UNIFORM:
            return float(np.sqrt(2.0 / r))
        return 2.0 / r


def _symmetric(r, j, k):
    m = np.zeros((r, r), dtype=np.complex128)
    m[j, k] = m[k, j] = 1.0
    return m


def _antisymmetric(r, j, k):
    m = np.zeros((r, r), dtype=np.complex128)
    m[j, k] = -1j
    m[k, j] = 1j
    return m


def _diagonal(r, l):
    # l = 1 .. r-1: sqrt(2 / (l (l+1))) diag(1, ..., 1, -l, 0, ..., 0)
    d = np.zeros(r)
    d[:l] = 1.0
    d[l] = -l
    return np.diag(d * np.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128)


def generalized_gell_mann(r: int) -> np.ndarray:
    """Stack of the ``r**2 - 1`` generators, shape ``(r**2 - 1, r, r)``."""
    if r < 2:
        raise BadDimensionError(f"generator dimension must be >= 2, got {r}")
    pairs = [(j, k) for j in range(r) for k in range(j + 1, r)]
    if r == 3:
        (p01, p02, p12) = pairs
        mats = [
            _symmetric(3, *p01), _antisymmetric(3, *p01), _diagonal(3, 1),
            _symmetric(3, *p02), _antisymmetric(3, *p02),
            _symmetric(3, *p12), _antisymmetric(3, *p12),
            _diagonal(3, 2),
        ]
    else:
        mats = (
            [_symmetric(r, j, k) for j, k in pairs]
            + [_antisymmetric(r, j, k) for j, k in pairs]
            + [_diagonal(r, l) for l in range(1, r)]
        )
    return np.stack(mats)


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    dim: int
    generators: np.ndarray
    identity_normalization: Normalization = Normalization.TRACE_UNIFORM

    def __len__(self):
        return self.generators.shape[0]

    def identity(self) -> np.ndarray:
        """The ``l^0`` element for this basis' normalization."""
        return self.identity_normalization.identity_scale(self.dim) * np.eye(self.dim)

    def full(self) -> np.ndarray:
        """``l^0`` followed by the generators, shape ``(r**2, r, r)``."""
        return np.concatenate([self.identity()[None], self.generators])


@lru_cache(maxsize=None)
def make_basis(r: int, normalization: Normalization = Normalization.TRACE_UNIFORM) -> GeneratorBasis:
    """Cached SU(r) generator basis; the returned arrays are read-only."""
    gens = generalized_gell_mann(int(r))
    gens.setflags(write=False)
    return GeneratorBasis(int(r), gens, normalization)


@dataclass(frozen=True, eq=False)
class CoherenceVector:
    """Real expansion coefficients ``xi_m = Tr(rho l_m)`` of a one-partite state.

    ``partite`` is None when the vector was computed from a bare density
    matrix rather than from a state's reduction.
    """

    values: np.ndarray
    partite: int | None = None

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.values.size + 1)))

    @property
    def target(self) -> float:
        """Norm-squared of a pure state's vector, ``2 (1 - 1/r)``."""
        return 2.0 * (1.0 - 1.0 / self.dim)


def coherence_vector(rho: DensityMatrix, basis: GeneratorBasis | None = None) -> CoherenceVector:
    """Coherence vector of ``rho`` in ``basis``.

    ``rho = I/r + (1/2) sum_m xi_m l_m`` holds for the returned values.
    """
    if basis is None:
        basis = make_basis(rho.dim)
    if basis.dim != rho.dim:
        raise DimMismatchError(f"basis is {basis.dim}-dimensional, rho is {rho.dim}-dimensional")
    # Tr(rho l_m) = sum_ab rho_ab (l_m)_ba
    xi = np.einsum("ab,mba->m", rho.entries, basis.generators)
    if np.max(np.abs(xi.imag), initial=0.0) > REAL_TOL:
        raise ValueError("coherence vector has a non-negligible imaginary part; rho is not Hermitian")
    return CoherenceVector(np.ascontiguousarray(xi.real))


def local_coherence_vector(state: PureState, i: int) -> CoherenceVector:
    """Coherence vector of the single-partite reduction of ``state`` on partite ``i``."""
    rho = partial_trace(state, [i])
    xi = coherence_vector(rho, make_basis(rho.dim))
    return CoherenceVector(xi.values, partite=i)


def reconstruct(xi: CoherenceVector, basis: GeneratorBasis | None = None) -> np.ndarray:
    """Density matrix ``I/r + (1/2) sum_m xi_m l_m``."""
    if basis is None:
        basis = make_basis(xi.dim)
    return np.eye(basis.dim) / basis.dim + 0.5 * np.tensordot(xi.values, basis.generators, axes=1)


def norm_squared(xi) -> float:
    """Sum of squared components. Accepts a CoherenceVector or an array."""
    values = xi.values if isinstance(xi, CoherenceVector) else np.asarray(xi)
    return float(np.dot(values, values))


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """Real coefficients ``a[mu_1, ..., mu_n]`` of the operator expansion

    ``rho = 2**-n sum_mu a[mu] l^{mu_1} (x) ... (x) l^{mu_n}``

    where index 0 on each axis is the identity element.
    """

    dims: tuple[int, ...]
    entries: np.ndarray
    normalization: Normalization

    def bases(self) -> list[GeneratorBasis]:
        return [make_basis(r, self.normalization) for r in self.dims]

    def to_density(self) -> np.ndarray:
        """Rebuild the full density matrix from the expansion."""
        n = len(self.dims)
        fulls = [b.full() for b in self.bases()]
        letters = string.ascii_letters
        mus, rows, cols = letters[:n], letters[n:2 * n], letters[2 * n:3 * n]
        spec = ",".join(f"{m}{r}{c}" for m, r, c in zip(mus, rows, cols))
        out = np.einsum(f"{mus},{spec}->{rows}{cols}", self.entries, *fulls, optimize=True)
        d = int(np.prod(self.dims))
        return out.reshape(d, d) / 2 ** n

    def axis_slice(self, i: int) -> np.ndarray:
        """Entries ``a[0, ..., m, ..., 0]`` for ``m >= 1`` on axis ``i``."""
        idx = [0] * len(self.dims)
        idx[i] = slice(1, None)
        return self.entries[tuple(idx)]

    def slice_to_coherence_factor(self, i: int) -> float:
        """Factor ``c`` with ``xi_i = c * axis_slice(i)``.

        With ``l^0 = s_k I`` on every other axis, ``Tr(rho L) = prod s_k xi_m``
        and ``prod Tr(L_k^2) = 2 prod s_k^2 r_k``, hence
        ``c = prod_{k != i} (s_k r_k / 2)``. For all-qutrit dims under
        TRACE_UNIFORM this is ``(sqrt(6)/2)**(n-1)``.
        """
        c = 1.0
        for k, r in enumerate(self.dims):
            if k == i:
                continue
            s = self.normalization.identity_scale(r)
            c *= s * r / 2.0
        return c


def correlation_tensor(
    state: PureState,
    bases: Sequence[GeneratorBasis] | None = None,
    normalization: Normalization = Normalization.TRACE_UNIFORM,
) -> CorrelationTensor:
    """Expansion coefficients of ``|psi><psi|`` in local operator bases.

    ``a[mu] = 2**n Tr(rho L_mu) / prod_k Tr((l_k^{mu_k})^2)`` with
    ``L_mu = l^{mu_1} (x) ... (x) l^{mu_n}``.
    """
    n = state.n
    if bases is None:
        bases = [make_basis(r, normalization) for r in state.dims]
    else:
        bases = [make_basis(b.dim, normalization) for b in bases]
    if tuple(b.dim for b in bases) != state.dims:
        raise DimMismatchError(
            f"basis dims {[b.dim for b in bases]} do not match state dims {list(state.dims)}"
        )
    fulls = [b.full() for b in bases]
    norms = [np.einsum("mab,mba->m", f, f).real for f in fulls]

    letters = string.ascii_letters
    mus, rows, cols = letters[:n], letters[n:2 * n], letters[2 * n:3 * n]
    psi = state.tensor()
    # Tr(rho L) = <psi| L |psi> = sum conj(psi[rows]) L[rows, cols] psi[cols]
    spec = ",".join(f"{m}{r}{c}" for m, r, c in zip(mus, rows, cols))
    expect = np.einsum(
        f"{rows},{spec},{cols}->{mus}", psi.conj(), *fulls, psi, optimize=True
    )
    if np.max(np.abs(expect.imag), initial=0.0) > REAL_TOL:
        raise ValueError("correlation tensor has a non-negligible imaginary part")
    denom = norms[0]
    for nk in norms[1:]:
        denom = np.multiply.outer(denom, nk)
    entries = 2 ** n * expect.real / denom
    return CorrelationTensor(state.dims, entries, normalization)


def purity_from_coherence(xi: CoherenceVector) -> float:
    """Tr(rho^2) implied by a coherence vector: ``1/r + |xi|^2 / 2``."""
    return 1.0 / xi.dim + 0.5 * norm_squared(xi)


__all__ = [
    "Normalization",
    "GeneratorBasis",
    "CoherenceVector",
    "CorrelationTensor",
    "generalized_gell_mann",
    "make_basis",
    "coherence_vector",
    "local_coherence_vector",
    "reconstruct",
    "norm_squared",
    "correlation_tensor",
    "purity_from_coherence",
]
