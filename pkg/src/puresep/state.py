"""Pure states and density matrices over multipartite dimension vectors.

Amplitudes are stored flat in row-major order with the last partite's index
varying fastest, so a two-qubit state ``a|00> + b|01> + c|10> + d|11>`` is the
list ``[a, b, c, d]``. Partite indices are zero-based throughout the library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadDimensionError,
    BadIndexError,
    BadPermutationError,
    DimMismatchError,
    ZeroStateError,
)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIGENVALUE_SLACK = 1e-10


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(r) for r in dims)
    if len(dims) < 1:
        raise BadDimensionError("at least one partite is required")
    for i, r in enumerate(dims):
        if r < 2:
            raise BadDimensionError(f"local dimension of partite {i} is {r}; must be >= 2")
    return dims


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Complex amplitude vector over a dimension vector ``dims``.

    Construction validates shape only; use :func:`normalize` to get a unit
    vector. The amplitude array is read-only.
    """

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != math.prod(dims):
            raise BadDimensionError(
                f"dims {list(dims)} need {math.prod(dims)} amplitudes, got {amps.size}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return self.amps.size

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared - 1.0) <= tol

    def tensor(self) -> np.ndarray:
        """Amplitudes as an n-index array of shape ``dims``."""
        return self.amps.reshape(self.dims)

    def __repr__(self):
        return f"PureState(dims={self.dims}, amps={np.array2string(self.amps, precision=4)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density matrix on one or more partites with local dims ``dims``."""

    dims: tuple[int, ...]
    entries: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        entries = np.array(self.entries, dtype=np.complex128)
        d = math.prod(dims)
        if entries.shape != (d, d):
            raise BadDimensionError(f"expected a {d}x{d} matrix, got shape {entries.shape}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", _frozen(entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    @property
    def purity(self) -> float:
        """Tr(rho^2), computed as the squared Frobenius norm (rho is Hermitian)."""
        return float(np.vdot(self.entries, self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def is_valid(self, tol: float = HERMITIAN_TOL, slack: float = EIGENVALUE_SLACK) -> bool:
        """Hermitian, unit trace and positive semidefinite within tolerances."""
        rho = self.entries
        if np.max(np.abs(rho - rho.conj().T)) > tol:
            return False
        if abs(np.trace(rho) - 1.0) > tol:
            return False
        return bool(self.eigenvalues().min() >= -slack)


def normalize(state: PureState) -> PureState:
    """Rescale ``state`` to unit norm.

    Raises
    ------
    ZeroStateError
        If every amplitude is zero.
    """
    nrm = np.linalg.norm(state.amps)
    if nrm == 0.0:
        raise ZeroStateError("cannot normalize the zero vector")
    return PureState(state.dims, state.amps / nrm)


def density_of(state: PureState) -> DensityMatrix:
    """The projector |psi><psi|."""
    return DensityMatrix(state.dims, np.outer(state.amps, state.amps.conj()))


def _check_partites(indices: Iterable[int], n: int) -> list[int]:
    out = []
    for i in indices:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < n:
            raise BadIndexError(f"partite index {i!r} out of range for {n} partites")
        out.append(int(i))
    return out


def partial_trace(state: PureState, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the partites in ``keep``.

    Kept partites appear in ascending index order in the result.
    """
    keep = sorted(set(_check_partites(keep, state.n)))
    if not keep:
        raise BadIndexError("keep must name at least one partite")
    if len(keep) == state.n:
        return density_of(state)
    rest = [i for i in range(state.n) if i not in keep]
    kept_dims = tuple(state.dims[i] for i in keep)
    m = np.transpose(state.tensor(), keep + rest).reshape(math.prod(kept_dims), -1)
    return DensityMatrix(kept_dims, m @ m.conj().T)


def reduced_matrix(state: PureState, i: int) -> np.ndarray:
    """Amplitudes reshaped to ``dims[i] x (N / dims[i])`` with partite i as row index."""
    (i,) = _check_partites([i], state.n)
    return np.moveaxis(state.tensor(), i, 0).reshape(state.dims[i], -1)


def check_permutation(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise BadPermutationError(f"{list(perm)} is not a permutation of range({n})")
    return perm


def permute_subsystems(state: PureState, perm: Sequence[int]) -> PureState:
    """Reorder partites so that new partite k is old partite ``perm[k]``.

    For two qubits, ``perm=(1, 0)`` is the swap operator: amplitudes
    ``(a, b, c, d)`` become ``(a, c, b, d)``.
    """
    perm = check_permutation(perm, state.n)
    dims = tuple(state.dims[p] for p in perm)
    amps = np.transpose(state.tensor(), perm).reshape(-1)
    return PureState(dims, amps)


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    perm = check_permutation(perm, len(perm))
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return tuple(inv)


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 for normalized pure states, clipped to [0, 1]."""
    if a.dims != b.dims:
        raise DimMismatchError(f"dims differ: {list(a.dims)} vs {list(b.dims)}")
    f = abs(np.vdot(a.amps, b.amps)) ** 2
    return float(min(max(f, 0.0), 1.0))


def product_state(*factors: PureState) -> PureState:
    """Tensor product of single- or multi-partite states, in order."""
    if not factors:
        raise BadDimensionError("product_state needs at least one factor")
    dims = sum((f.dims for f in factors), ())
    amps = reduce(np.kron, (f.amps for f in factors))
    return PureState(dims, amps)


def basis_state(dims: Sequence[int], digits: Sequence[int]) -> PureState:
    """Computational basis state |digits[0] digits[1] ...>."""
    dims = _check_dims(dims)
    if len(digits) != len(dims) or any(not 0 <= d < r for d, r in zip(digits, dims)):
        raise BadIndexError(f"basis digits {list(digits)} invalid for dims {list(dims)}")
    amps = np.zeros(math.prod(dims), dtype=np.complex128)
    amps[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return PureState(dims, amps)
