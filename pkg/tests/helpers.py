"""Shared test helpers and closed-form oracles for the norm criterion."""

import numpy as np

from puresep.state import PureState, normalize, product_state

SQ2 = 1 / np.sqrt(2)


def ket(*amps, dims=None):
    amps = np.asarray(amps, dtype=complex)
    return PureState(dims if dims is not None else (amps.size,), amps)


def random_ket(rng, dims):
    n = int(np.prod(dims))
    return normalize(PureState(dims, rng.standard_normal(n) + 1j * rng.standard_normal(n)))


def random_product_ket(rng, dims):
    return product_state(*(random_ket(rng, (r,)) for r in dims))


def brute_partial_trace(state, keep):
    """Reduced density matrix by explicit summation over every index pair."""
    dims = state.dims
    psi = state.amps.reshape(dims)
    keep = sorted(keep)
    kd = [dims[i] for i in keep]
    out = np.zeros((int(np.prod(kd)),) * 2, dtype=complex)
    for idx in np.ndindex(*dims):
        for jdx in np.ndindex(*dims):
            if any(idx[k] != jdx[k] for k in range(len(dims)) if k not in keep):
                continue
            a = np.ravel_multi_index([idx[k] for k in keep], kd)
            b = np.ravel_multi_index([jdx[k] for k in keep], kd)
            out[a, b] += psi[idx] * np.conj(psi[jdx])
    return out


def two_qubit_norm(a, b, c, d):
    return 1 - 4 * abs(a * d - b * c) ** 2


def three_qubit_norms(a, b, c, d, e, f, g, h):
    """Squared coherence norms of the three single-qubit reductions."""
    m = lambda x: 4 * abs(x) ** 2  # noqa: E731
    n1 = 1 - m(a*f - b*e) - m(a*g - c*e) - m(a*h - d*e) - m(b*g - c*f) - m(b*h - d*f) - m(c*h - d*g)
    n2 = 1 - m(a*d - b*c) - m(a*g - c*e) - m(a*h - c*f) - m(b*g - d*e) - m(b*h - d*f) - m(e*h - f*g)
    n3 = 1 - m(a*d - b*c) - m(a*f - b*e) - m(a*h - b*g) - m(c*f - d*e) - m(c*h - d*g) - m(e*h - f*g)
    return n1, n2, n3


def two_qutrit_minors(x1, x2, x3, x4, x5, x6, x7, x8, x9):
    return [
        x1*x5 - x2*x4, x1*x6 - x3*x4, x1*x8 - x2*x7,
        x1*x9 - x3*x7, x2*x6 - x3*x5, x2*x9 - x3*x8,
        x4*x8 - x5*x7, x4*x9 - x6*x7, x5*x9 - x6*x8,
    ]


def two_qutrit_norm(*x):
    return 4 / 3 - 4 * sum(abs(m) ** 2 for m in two_qutrit_minors(*x))


def qubit_qutrit_gap(x1, x2, x3, x4, x5, x6):
    """Common value of ``1 - |xi_1|^2`` and ``4/3 - |xi_2|^2``."""
    return 4 * (abs(x1*x5 - x2*x4) ** 2 + abs(x1*x6 - x3*x4) ** 2 + abs(x2*x6 - x3*x5) ** 2)
