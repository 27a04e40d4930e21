"""Separability tests and product-state factorization for pure states.

Two tolerance scales are in play. The norm criterion compares the deficit
``D_i = 2 (1 - 1/r_i) - |xi_i|^2`` against ``tol``; ``D_i`` is quadratic in
the amplitudes (``D_i = 4 * sum |minor|^2`` over the 2x2 minors of partite
i's cut matrix). The minor test and Schmidt ranks are linear in the
amplitudes, so when they are compared against the norm criterion they use
the matched amplitude tolerance ``sqrt(tol) / 2`` from
:func:`amplitude_tolerance`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .basis import local_coherence_vector, norm_squared
from .errors import BadSubsetError, CriterionDisagreementError, NotSeparableError
from .state import PureState, _check_partites, fidelity, product_state, reduced_matrix

DEFAULT_TOL = 1e-8


def amplitude_tolerance(tol: float) -> float:
    """Minor/singular-value threshold matched to a norm-deficit threshold ``tol``."""
    return math.sqrt(tol) / 2.0


def target_norm(r: int) -> float:
    """|xi|^2 of any pure r-level state."""
    return 2.0 * (1.0 - 1.0 / r)


@lru_cache(maxsize=256)
def _upper_pairs(cols: int):
    return np.triu_indices(cols, k=1)


def minor_count(rows: int, cols: int) -> int:
    return math.comb(rows, 2) * math.comb(cols, 2)


def minor_moduli(matrix: np.ndarray) -> np.ndarray:
    """Moduli of all 2x2 minors of ``matrix``, flattened.

    Row pairs vary slowest, then column pairs, both in lexicographic order.
    """
    m = np.asarray(matrix)
    rows, cols = m.shape
    iu = _upper_pairs(cols)
    out = []
    for j in range(rows):
        for k in range(j + 1, rows):
            outer = np.outer(m[j], m[k])
            out.append(np.abs(outer - outer.T)[iu])
    if not out:
        return np.zeros(0)
    return np.concatenate(out)


def minor_stats(matrix: np.ndarray) -> tuple[float, float]:
    """(largest minor modulus, sum of squared minor moduli) without storing all minors."""
    m = np.asarray(matrix)
    if m.shape[0] > m.shape[1]:
        m = m.T
    rows, cols = m.shape
    iu = _upper_pairs(cols)
    biggest, total = 0.0, 0.0
    for j in range(rows):
        for k in range(j + 1, rows):
            outer = np.outer(m[j], m[k])
            mod = np.abs(outer - outer.T)[iu]
            if mod.size:
                biggest = max(biggest, float(mod.max()))
                total += float(np.dot(mod, mod))
    return biggest, total


@dataclass(frozen=True)
class PartiteResult:
    index: int
    norm_squared: float
    target: float
    deficit: float
    separable: bool
    borderline: bool
    max_minor: float | None = None


@dataclass(frozen=True)
class SeparabilityReport:
    per_partite: tuple[PartiteResult, ...]
    fully_separable: bool
    separable_partites: frozenset[int]
    tol: float
    criterion: str

    @property
    def entangled_partites(self) -> tuple[int, ...]:
        return tuple(p.index for p in self.per_partite if not p.separable)

    @property
    def borderline_partites(self) -> tuple[int, ...]:
        return tuple(p.index for p in self.per_partite if p.borderline)


def borderline_band(tol: float, n_minors: int) -> tuple[float, float]:
    """Deficit interval ``(lo, hi]`` inside which verdicts are flagged.

    It spans a decade either side of ``tol``, widened upward to cover the
    factor ``n_minors`` between the largest minor and the minor sum.
    """
    return tol / 10.0, max(10.0, float(n_minors)) * tol


def _partite_norm(state: PureState, i: int, tol: float) -> PartiteResult:
    r = state.dims[i]
    xi2 = norm_squared(local_coherence_vector(state, i))
    target = target_norm(r)
    deficit = target - xi2
    lo, hi = borderline_band(tol, minor_count(r, state.total_dim // r))
    return PartiteResult(
        index=i,
        norm_squared=xi2,
        target=target,
        deficit=deficit,
        separable=deficit <= tol,
        borderline=lo < deficit <= hi,
    )


def _report(results, tol, criterion) -> SeparabilityReport:
    results = tuple(results)
    sep = frozenset(p.index for p in results if p.separable)
    return SeparabilityReport(
        per_partite=results,
        fully_separable=len(sep) == len(results),
        separable_partites=sep,
        tol=tol,
        criterion=criterion,
    )


def check_norm_criterion(state: PureState, tol: float = DEFAULT_TOL) -> SeparabilityReport:
    """Per-partite coherence-norm test.

    Partite i is separable iff ``2 (1 - 1/r_i) - |xi_i|^2 <= tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _report((_partite_norm(state, i, tol) for i in range(state.n)), tol, "norm")


def max_minor(state: PureState, i: int) -> float:
    """Largest 2x2 minor modulus of the cut matrix with partite i as row index."""
    return minor_stats(reduced_matrix(state, i))[0]


def check_minor_criterion(state: PureState, partite: int, tol: float = DEFAULT_TOL) -> bool:
    """True iff every 2x2 minor of partite ``partite``'s cut matrix has modulus <= tol.

    ``tol`` is on the amplitude scale; pass ``amplitude_tolerance(t)`` to
    compare with a norm-deficit threshold ``t``.
    """
    return max_minor(state, partite) <= tol


def check(state: PureState, tol: float = DEFAULT_TOL) -> SeparabilityReport:
    """Norm criterion cross-checked against the minor criterion on every partite.

    Partites whose verdicts differ inside the borderline band are flagged and
    keep the norm verdict. Outside the band a disagreement means the
    tolerance is unsuitable for the input and raises.

    Raises
    ------
    CriterionDisagreementError
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    atol = amplitude_tolerance(tol)
    results = []
    for i in range(state.n):
        res = _partite_norm(state, i, tol)
        biggest = max_minor(state, i)
        minor_sep = biggest <= atol
        if minor_sep != res.separable and not res.borderline:
            raise CriterionDisagreementError(i, res.deficit, biggest)
        results.append(
            PartiteResult(
                index=i,
                norm_squared=res.norm_squared,
                target=res.target,
                deficit=res.deficit,
                separable=res.separable,
                borderline=res.borderline,
                max_minor=biggest,
            )
        )
    return _report(results, tol, "norm+minor")


def _check_subset(subset: Iterable[int], n: int) -> list[int]:
    try:
        subset = sorted(set(_check_partites(subset, n)))
    except IndexError as exc:
        raise BadSubsetError(str(exc)) from None
    if not subset or len(subset) == n:
        raise BadSubsetError(f"subset {subset} must be nonempty and proper for {n} partites")
    return subset


def cut_matrix(state: PureState, subset: Iterable[int]) -> np.ndarray:
    """Amplitudes reshaped to ``prod(dims[subset]) x prod(dims[rest])``."""
    subset = _check_subset(subset, state.n)
    rest = [i for i in range(state.n) if i not in subset]
    rows = math.prod([state.dims[i] for i in subset])
    return np.transpose(state.tensor(), subset + rest).reshape(rows, -1)


def bipartition_separable(state: PureState, subset: Iterable[int], tol: float = DEFAULT_TOL) -> bool:
    """True iff the subset/rest cut matrix has every 2x2 minor <= tol (rank one)."""
    return minor_stats(cut_matrix(state, subset))[0] <= tol


@dataclass(frozen=True)
class Factorization:
    factors: tuple[PureState, ...]
    residual_fidelity: float

    def product(self) -> PureState:
        return product_state(*self.factors)


def factorize(state: PureState, tol: float = DEFAULT_TOL) -> Factorization:
    """Split a fully separable state into single-partite factors.

    The pivot is the largest-modulus amplitude (lowest multi-index on ties).
    Factor i is the slice through the pivot along axis i, normalized and
    rotated to be real and nonnegative at the pivot; the remaining global
    phase goes into the first factor so the product reproduces ``state``.

    Raises
    ------
    NotSeparableError
        If any partite fails the criterion at ``tol``.
    """
    report = check(state, tol)
    if not report.fully_separable:
        raise NotSeparableError(report.entangled_partites)

    psi = state.tensor()
    pivot = np.unravel_index(int(np.argmax(np.abs(state.amps))), state.dims)
    factors = []
    for i in range(state.n):
        idx = list(pivot)
        idx[i] = slice(None)
        f = np.array(psi[tuple(idx)])
        f = f / np.linalg.norm(f)
        p = f[pivot[i]]
        f = f * (abs(p) / p)
        f[pivot[i]] = abs(p)
        factors.append(f)
    # the product is real positive at the pivot; restore the input's phase there
    phase = psi[pivot] / abs(psi[pivot])
    factors[0] = factors[0] * phase
    factors = tuple(PureState((r,), f) for r, f in zip(state.dims, factors))
    return Factorization(factors, fidelity(product_state(*factors), state))
