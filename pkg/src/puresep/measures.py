"""Entanglement measures built on single-partite coherence-vector norms.

For each partite three numbers are reported: the norm deficit
``D_i = 2 (1 - 1/r_i) - |xi_i|^2``, the linear entropy ``1 - Tr(rho_i^2)``
(which equals ``D_i / 2``) and the von Neumann entropy in bits. All three
vanish exactly on product states; the aggregates are plain mean and max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import coherence_vector, make_basis, norm_squared
from .separability import target_norm
from .state import PureState, partial_trace


@dataclass(frozen=True)
class PartiteMeasure:
    index: int
    deficit: float
    linear_entropy: float
    entropy: float


@dataclass(frozen=True)
class MeasureReport:
    per_partite: tuple[PartiteMeasure, ...]
    mean_deficit: float
    max_deficit: float
    mean_entropy: float


def von_neumann_entropy(eigenvalues: np.ndarray) -> float:
    """Shannon entropy of a spectrum in bits, with 0 log 0 = 0."""
    p = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, None)
    p = p[p > 0.0]
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def measure_partite(state: PureState, i: int) -> PartiteMeasure:
    rho = partial_trace(state, [i])
    xi2 = norm_squared(coherence_vector(rho, make_basis(rho.dim)))
    return PartiteMeasure(
        index=i,
        deficit=target_norm(rho.dim) - xi2,
        linear_entropy=1.0 - rho.purity,
        entropy=von_neumann_entropy(rho.eigenvalues()),
    )


def measure(state: PureState) -> MeasureReport:
    parts = tuple(measure_partite(state, i) for i in range(state.n))
    deficits = np.array([p.deficit for p in parts])
    return MeasureReport(
        per_partite=parts,
        mean_deficit=float(deficits.mean()),
        max_deficit=float(deficits.max()),
        mean_entropy=float(np.mean([p.entropy for p in parts])),
    )
