"""Ground truth for the separability criteria, plus seeded state generation.

Nothing here uses coherence vectors or minors: Schmidt data comes from an
SVD of the cut-reshaped amplitudes and purity from the reduced matrix.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadIndexError, BadSpecError, BadSubsetError
from .state import PureState, normalize, product_state

DEFAULT_SVD_TOL = 1e-8
DEFAULT_EPS = 1e-6


@dataclass(frozen=True)
class SchmidtData:
    cut: tuple[int, ...]
    singular_values: np.ndarray
    rank_at_tol: int

    @property
    def deficit(self) -> float:
        """``2 (1 - sum s^4)``; equals the norm deficit when the cut is one partite."""
        s2 = self.singular_values ** 2
        return float(2.0 * (1.0 - np.dot(s2, s2)))


def _split(state: PureState, cut: Iterable[int]) -> np.ndarray:
    cut = list(cut)
    if any(not isinstance(i, (int, np.integer)) or not 0 <= i < state.n for i in cut):
        raise BadSubsetError(f"cut {cut} has indices outside 0..{state.n - 1}")
    cut = sorted(set(int(i) for i in cut))
    if not cut or len(cut) == state.n:
        raise BadSubsetError(f"cut {cut} must be nonempty and proper")
    rest = [i for i in range(state.n) if i not in cut]
    rows = 1
    for i in cut:
        rows *= state.dims[i]
    return np.transpose(state.amps.reshape(state.dims), cut + rest).reshape(rows, -1)


def schmidt(state: PureState, cut: Iterable[int], tol: float = DEFAULT_SVD_TOL) -> SchmidtData:
    """Schmidt coefficients across ``cut | rest``, largest first."""
    cut = list(cut)
    s = np.linalg.svd(_split(state, cut), compute_uv=False)
    return SchmidtData(tuple(sorted(set(int(i) for i in cut))), s, int(np.count_nonzero(s > tol)))


def purity_oracle(state: PureState, partite: int) -> float:
    """Tr(rho_i^2) of the one-partite reduction."""
    if not isinstance(partite, (int, np.integer)) or not 0 <= partite < state.n:
        raise BadIndexError(f"partite index {partite!r} out of range for {state.n} partites")
    m = np.moveaxis(state.amps.reshape(state.dims), partite, 0).reshape(state.dims[partite], -1)
    rho = m @ m.conj().T
    return float(np.sum(np.abs(rho) ** 2))


class Kind(enum.Enum):
    HAAR = "haar"
    PRODUCT = "product"
    GHZ = "ghz"
    W = "w"
    BELL = "bell"
    NEAR_PRODUCT = "near-product"


@dataclass(frozen=True)
class RandomSpec:
    """Recipe for :func:`generate`. ``eps`` only affects NEAR_PRODUCT."""

    dims: tuple[int, ...]
    kind: Kind
    seed: int = 0
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(r) for r in self.dims))
        object.__setattr__(self, "kind", Kind(self.kind))


def _gaussian(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def haar_amplitudes(rng: np.random.Generator, dims: Sequence[int]) -> PureState:
    """Normalized i.i.d. complex Gaussian amplitudes (Haar-distributed ket)."""
    return normalize(PureState(dims, _gaussian(rng, math.prod(dims))))


def random_product(rng: np.random.Generator, dims: Sequence[int]) -> PureState:
    return product_state(*(haar_amplitudes(rng, (r,)) for r in dims))


def ghz(dims: Sequence[int]) -> PureState:
    """``sum_k |k k ... k> / sqrt(r)`` for equal local dims ``r``."""
    dims = tuple(dims)
    if len(dims) < 2 or len(set(dims)) != 1:
        raise BadSpecError(f"GHZ needs >= 2 partites of equal dimension, got {list(dims)}")
    r = dims[0]
    amps = np.zeros(math.prod(dims), dtype=np.complex128)
    for k in range(r):
        amps[np.ravel_multi_index((k,) * len(dims), dims)] = 1.0
    return normalize(PureState(dims, amps))


def w_state(dims: Sequence[int]) -> PureState:
    """Equal superposition of single-excitation basis states of n qubits."""
    dims = tuple(dims)
    if len(dims) < 2 or any(r != 2 for r in dims):
        raise BadSpecError(f"W needs >= 2 qubits, got {list(dims)}")
    n = len(dims)
    amps = np.zeros(2 ** n, dtype=np.complex128)
    for i in range(n):
        amps[1 << (n - 1 - i)] = 1.0
    return normalize(PureState(dims, amps))


def bell(dims: Sequence[int] = (2, 2)) -> PureState:
    if tuple(dims) != (2, 2):
        raise BadSpecError(f"Bell state needs dims (2, 2), got {list(dims)}")
    return normalize(PureState((2, 2), [1, 0, 0, 1]))


def generate(spec: RandomSpec) -> PureState:
    """Deterministic state for ``spec``; identical seeds give identical bits."""
    dims = spec.dims
    if not dims or any(r < 2 for r in dims):
        raise BadSpecError(f"invalid dims {list(dims)}")
    if spec.seed < 0 or spec.seed >= 2 ** 64:
        raise BadSpecError("seed must fit in an unsigned 64-bit integer")
    rng = np.random.default_rng(spec.seed)
    kind = spec.kind
    if kind is Kind.HAAR:
        return haar_amplitudes(rng, dims)
    if kind is Kind.PRODUCT:
        return random_product(rng, dims)
    if kind is Kind.NEAR_PRODUCT:
        if not spec.eps >= 0:
            raise BadSpecError("eps must be nonnegative")
        base = random_product(rng, dims)
        noisy = base.amps + spec.eps * _gaussian(rng, base.total_dim)
        return normalize(PureState(dims, noisy))
    if kind is Kind.GHZ:
        return ghz(dims)
    if kind is Kind.W:
        return w_state(dims)
    if kind is Kind.BELL:
        return bell(dims)
    raise BadSpecError(f"unknown kind {kind!r}")


def random_unitary(rng: np.random.Generator, r: int) -> np.ndarray:
    """Haar-random r x r unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))) / np.sqrt(2.0)
    q, rr = np.linalg.qr(z)
    d = np.diagonal(rr)
    return q * (d / np.abs(d))


def apply_local_unitaries(state: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Apply ``U_0 (x) U_1 (x) ...`` one axis at a time."""
    psi = state.tensor()
    for i, u in enumerate(unitaries):
        psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [i])), 0, i)
    return PureState(state.dims, psi.reshape(-1))
