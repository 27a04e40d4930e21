"""Randomized agreement runs between the criteria and the SVD oracle.

Samples rotate through Haar states, full products, partial products (a
random subset of partites split off, the rest Haar) and near-products. For
every partite the norm verdict, the minor verdict, the bipartition rank test
and the Schmidt rank must agree, and full separability from the norm
criterion must agree with a product-peeling SVD oracle.

States are processed in chunks with batched numpy kernels. The first state
of every chunk is re-checked through the per-state public functions and any
difference in verdicts counts as a disagreement, so the batched path cannot
drift from the library it stands in for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .basis import make_basis
from .oracle import DEFAULT_EPS, purity_oracle, schmidt
from .separability import (
    DEFAULT_TOL,
    amplitude_tolerance,
    bipartition_separable,
    borderline_band,
    check_minor_criterion,
    check_norm_criterion,
    minor_count,
    target_norm,
)
from .state import PureState

MIX = ("haar", "product", "partial", "near-product")
CHUNK = 1024
PURITY_IDENTITY_TOL = 1e-10
SPOT_TOL = 1e-12


def _gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _normalized(a):
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


def _batch_product(factors):
    """Row-wise Kronecker product of a list of (B, r_k) arrays."""
    out = factors[0]
    for f in factors[1:]:
        out = (out[:, :, None] * f[:, None, :]).reshape(out.shape[0], -1)
    return out


def sample_batch(rng: np.random.Generator, dims: Sequence[int], kind: str, size: int,
                 eps: float = DEFAULT_EPS) -> np.ndarray:
    """``size`` normalized amplitude rows of one sample kind, shape (size, N)."""
    dims = tuple(dims)
    n, total = len(dims), math.prod(dims)
    if kind == "haar" or (kind == "partial" and n == 1):
        return _normalized(_gaussian(rng, (size, total)))
    if kind in ("product", "near-product"):
        out = _batch_product([_normalized(_gaussian(rng, (size, r))) for r in dims])
        if kind == "near-product":
            out = _normalized(out + eps * _gaussian(rng, (size, total)))
        return out
    if kind == "partial":
        subsets = [list(c) for k in range(1, n) for c in combinations(range(n), k)]
        choice = rng.integers(len(subsets), size=size)
        out = np.empty((size, total), dtype=np.complex128)
        for c, split in enumerate(subsets):
            rows = np.flatnonzero(choice == c)
            if rows.size == 0:
                continue
            rest = [i for i in range(n) if i not in split]
            pieces = [_normalized(_gaussian(rng, (rows.size, dims[i]))) for i in split]
            pieces.append(_normalized(_gaussian(rng, (rows.size, math.prod(dims[i] for i in rest)))))
            block = _batch_product(pieces).reshape((rows.size,) + tuple(dims[i] for i in split + rest))
            order = split + rest
            axes = [0] + [1 + order.index(k) for k in range(n)]
            out[rows] = np.transpose(block, axes).reshape(rows.size, total)
        return out
    raise ValueError(f"unknown sample kind {kind!r}")


def _batch_minor_stats(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Largest minor modulus and minor sum of squares per row of a (B, p, q) stack."""
    b, p, q = m.shape
    iu = np.triu_indices(q, k=1)
    biggest = np.zeros(b)
    total = np.zeros(b)
    for j in range(p):
        for k in range(j + 1, p):
            outer = m[:, j, :, None] * m[:, k, None, :]
            mod = np.abs(outer - np.swapaxes(outer, 1, 2))[:, iu[0], iu[1]]
            if mod.shape[1]:
                biggest = np.maximum(biggest, mod.max(axis=1))
                total += np.einsum("bi,bi->b", mod, mod)
    return biggest, total


def batch_product_oracle(amps: np.ndarray, dims: Sequence[int], tol: float) -> np.ndarray:
    """Product iff every step of peeling partites off by SVD has rank one."""
    rest = amps
    ok = np.ones(amps.shape[0], dtype=bool)
    for r in dims[:-1]:
        m = rest.reshape(rest.shape[0], r, -1)
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        ok &= np.count_nonzero(s > tol, axis=1) == 1
        rest = vh[:, 0, :] * s[:, :1]
    return ok


def product_oracle(state: PureState, tol: float) -> bool:
    return bool(batch_product_oracle(state.amps[None, :], state.dims, tol)[0])


def batch_verdicts(amps: np.ndarray, dims: Sequence[int], tol: float) -> dict:
    """Per-partite quantities for a batch; every array has shape (B, n)."""
    dims = tuple(dims)
    b, n = amps.shape[0], len(dims)
    atol = amplitude_tolerance(tol)
    keys = ("deficit", "norm", "minor", "bipartition", "schmidt", "borderline",
            "deficit_gap", "minor_gap", "purity_gap")
    out = {k: np.zeros((b, n), dtype=bool if k in ("norm", "minor", "bipartition", "schmidt", "borderline") else float)
           for k in keys}
    psi = amps.reshape((b,) + dims)
    for i, r in enumerate(dims):
        m = np.moveaxis(psi, i + 1, 1).reshape(b, r, -1)
        rho = m @ np.conj(np.swapaxes(m, 1, 2))
        xi = np.einsum("bxy,myx->bm", rho, make_basis(r).generators).real
        xi2 = np.einsum("bm,bm->b", xi, xi)
        deficit = target_norm(r) - xi2
        biggest, minor_sq = _batch_minor_stats(m)
        # same cut, transposed orientation: rest x partite
        col_biggest, _ = _batch_minor_stats(np.swapaxes(m, 1, 2))
        s = np.linalg.svd(m, compute_uv=False)
        s2 = s ** 2
        purity = np.einsum("bxy,bxy->b", rho, rho.conj()).real
        lo, hi = borderline_band(tol, minor_count(r, m.shape[2]))
        out["deficit"][:, i] = deficit
        out["norm"][:, i] = deficit <= tol
        out["minor"][:, i] = biggest <= atol
        out["bipartition"][:, i] = col_biggest <= atol
        out["schmidt"][:, i] = np.count_nonzero(s > atol, axis=1) == 1
        out["borderline"][:, i] = (deficit > lo) & (deficit <= hi)
        out["deficit_gap"][:, i] = np.abs(deficit - 2.0 * (1.0 - np.einsum("bk,bk->b", s2, s2)))
        out["minor_gap"][:, i] = np.abs(deficit - 4.0 * minor_sq)
        out["purity_gap"][:, i] = np.abs(xi2 - 2.0 * (purity - 1.0 / r))
    return out


def state_verdicts(state: PureState, tol: float) -> dict:
    """Per-partite verdicts through the public per-state functions."""
    atol = amplitude_tolerance(tol)
    report = check_norm_criterion(state, tol)
    rows = []
    for p in report.per_partite:
        i = p.index
        purity = purity_oracle(state, i)
        rows.append({
            "deficit": p.deficit,
            "norm": p.separable,
            "minor": check_minor_criterion(state, i, atol),
            "bipartition": bipartition_separable(state, [i], atol),
            "schmidt": schmidt(state, [i], atol).rank_at_tol == 1,
            "borderline": p.borderline,
            "purity_gap": abs(p.norm_squared - 2.0 * (purity - 1.0 / state.dims[i])),
        })
    return {"partites": rows, "fully_separable": report.fully_separable}


@dataclass
class StressReport:
    dims: tuple[int, ...]
    samples: int
    seed: int
    tol: float
    agreements: int = 0
    disagreements: int = 0
    borderline: int = 0
    spot_checks: int = 0
    worst_deficit_discrepancy: float = 0.0
    worst_minor_discrepancy: float = 0.0
    worst_purity_identity_error: float = 0.0
    counterexample: dict | None = None
    kind_counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.disagreements == 0


def _spot_mismatch(state: PureState, row: dict, tol: float) -> list[str]:
    ref = state_verdicts(state, tol)
    problems = []
    for i, p in enumerate(ref["partites"]):
        for key in ("norm", "minor", "bipartition", "schmidt", "borderline"):
            if bool(row[key][i]) != p[key]:
                problems.append(f"partite {i} {key}: batch={bool(row[key][i])} per-state={p[key]}")
        if abs(row["deficit"][i] - p["deficit"]) > SPOT_TOL:
            problems.append(f"partite {i} deficit: batch={row['deficit'][i]!r} per-state={p['deficit']!r}")
    return problems


def run_stress(dims: Sequence[int], samples: int, seed: int = 0, tol: float = DEFAULT_TOL,
               eps: float = DEFAULT_EPS) -> StressReport:
    """Run ``samples`` random states on ``dims`` through every check.

    The outcome is a deterministic function of ``(dims, samples, seed, tol, eps)``.
    """
    dims = tuple(int(r) for r in dims)
    if len(dims) < 2 or any(r < 2 for r in dims):
        raise ValueError(f"stress needs >= 2 partites of dimension >= 2, got {list(dims)}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    rng = np.random.default_rng(seed)
    atol = amplitude_tolerance(tol)
    mix = MIX
    rep = StressReport(dims=dims, samples=samples, seed=seed, tol=tol)

    done = 0
    while done < samples:
        size = min(CHUNK, samples - done)
        idx = np.arange(done, done + size)
        kinds = np.array([mix[s % len(mix)] for s in idx])
        amps = np.empty((size, math.prod(dims)), dtype=np.complex128)
        for kind in mix:
            rows = np.flatnonzero(kinds == kind)
            if rows.size:
                amps[rows] = sample_batch(rng, dims, kind, rows.size, eps)
        v = batch_verdicts(amps, dims, tol)
        flagged = v["borderline"].any(axis=1)
        stacked = np.stack([v["norm"], v["minor"], v["bipartition"], v["schmidt"]])
        partite_bad = (stacked.any(axis=0) != stacked.all(axis=0)) & ~v["borderline"]
        full_norm = v["norm"].all(axis=1)
        full_bad = (batch_product_oracle(amps, dims, atol) != full_norm) & ~flagged
        bad = partite_bad.any(axis=1) | full_bad

        spot = {k: a[0] for k, a in v.items()}
        problems = _spot_mismatch(PureState(dims, amps[0]), spot, tol)
        rep.spot_checks += 1
        if problems:
            bad[0] = True

        rep.worst_deficit_discrepancy = max(rep.worst_deficit_discrepancy, float(v["deficit_gap"].max()))
        rep.worst_minor_discrepancy = max(rep.worst_minor_discrepancy, float(v["minor_gap"].max()))
        rep.worst_purity_identity_error = max(rep.worst_purity_identity_error, float(v["purity_gap"].max()))
        rep.borderline += int(flagged.sum())
        rep.disagreements += int(bad.sum())
        rep.agreements += int(size - bad.sum())
        for kind in mix:
            rep.kind_counts[kind] = rep.kind_counts.get(kind, 0) + int((kinds == kind).sum())

        if rep.counterexample is None and bad.any():
            j = int(np.flatnonzero(bad)[0])
            rep.counterexample = {
                "sample": int(idx[j]),
                "kind": str(kinds[j]),
                "dims": list(dims),
                "amplitudes": [[float(a.real), float(a.imag)] for a in amps[j]],
                "partite_verdicts": [
                    {key: _plain(v[key][j, i]) for key in ("deficit", "norm", "minor", "bipartition", "schmidt", "borderline")}
                    for i in range(len(dims))
                ],
                "fully_separable_norm": bool(full_norm[j]),
                "fully_separable_oracle": bool(full_norm[j] != full_bad[j]),
                "kernel_mismatch": problems if j == 0 else [],
            }
        done += size
    return rep


def _plain(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    return float(x)
