import numpy as np
import pytest

from puresep.errors import BadIndexError, BadSpecError, BadSubsetError
from puresep.oracle import (
    Kind,
    RandomSpec,
    apply_local_unitaries,
    generate,
    ghz,
    purity_oracle,
    random_unitary,
    schmidt,
    w_state,
)
from puresep.state import fidelity, partial_trace

from helpers import SQ2, random_ket


class TestSchmidt:
    def test_bell(self, bell_state):
        data = schmidt(bell_state, [0])
        np.testing.assert_allclose(data.singular_values, [SQ2, SQ2], atol=1e-15)
        assert data.rank_at_tol == 2
        assert data.deficit == pytest.approx(1.0, abs=1e-15)

    def test_w_single_cut(self, w3):
        data = schmidt(w3, [0])
        np.testing.assert_allclose(data.singular_values, [np.sqrt(2 / 3), np.sqrt(1 / 3)], atol=1e-15)

    def test_product_rank_one(self, zero_one_plus):
        for cut in ([0], [1], [2], [0, 2]):
            data = schmidt(zero_one_plus, cut)
            assert data.rank_at_tol == 1
            assert data.singular_values[0] == pytest.approx(1, abs=1e-15)

    def test_cut_is_sorted(self, ghz3):
        assert schmidt(ghz3, [2, 0]).cut == (0, 2)

    @pytest.mark.parametrize("cut", [[], [0, 1, 2], [3]])
    def test_bad_cut(self, ghz3, cut):
        with pytest.raises(BadSubsetError):
            schmidt(ghz3, cut)

    def test_complementary_cuts_share_spectrum(self, rng):
        s = random_ket(rng, (2, 3, 2))
        np.testing.assert_allclose(
            schmidt(s, [1]).singular_values, schmidt(s, [0, 2]).singular_values[:3], atol=1e-13
        )


class TestPurityOracle:
    @pytest.mark.parametrize(
        "fixture, expected",
        [("zero_one_plus", 1.0), ("bell_state", 0.5), ("w3", 5 / 9), ("ghz3", 0.5), ("qutrit_max", 1 / 3)],
    )
    def test_fixtures(self, request, fixture, expected):
        s = request.getfixturevalue(fixture)
        for i in range(s.n):
            assert purity_oracle(s, i) == pytest.approx(expected, abs=1e-15)

    def test_matches_partial_trace(self, rng):
        for dims in [(2, 3), (3, 2, 2), (2, 2, 2, 2)]:
            s = random_ket(rng, dims)
            for i in range(len(dims)):
                assert purity_oracle(s, i) == pytest.approx(partial_trace(s, [i]).purity, abs=1e-13)

    def test_bad_index(self, bell_state):
        with pytest.raises(BadIndexError):
            purity_oracle(bell_state, 2)


class TestGenerate:
    @pytest.mark.parametrize("kind", [Kind.HAAR, Kind.PRODUCT, Kind.NEAR_PRODUCT])
    def test_deterministic(self, kind):
        a = generate(RandomSpec((2, 3), kind, 7))
        b = generate(RandomSpec((2, 3), kind, 7))
        assert a.amps.tobytes() == b.amps.tobytes()
        assert generate(RandomSpec((2, 3), kind, 8)).amps.tobytes() != a.amps.tobytes()

    def test_normalized(self):
        for kind in (Kind.HAAR, Kind.PRODUCT, Kind.NEAR_PRODUCT):
            for seed in range(20):
                assert generate(RandomSpec((3, 2, 2), kind, seed)).is_normalized()

    def test_ghz_amplitudes(self):
        s = generate(RandomSpec((2, 2, 2), "ghz"))
        np.testing.assert_allclose(s.amps, [SQ2, 0, 0, 0, 0, 0, 0, SQ2], atol=1e-15)

    def test_qutrit_ghz(self):
        s = ghz((3, 3))
        np.testing.assert_allclose(s.amps[[0, 4, 8]], [1 / np.sqrt(3)] * 3, atol=1e-15)

    def test_w_amplitudes(self):
        amps = w_state((2, 2, 2)).amps
        np.testing.assert_allclose(amps[[1, 2, 4]], [1 / np.sqrt(3)] * 3, atol=1e-15)
        assert np.count_nonzero(amps) == 3

    def test_product_two_qubit_minor(self):
        for seed in range(100):
            a, b, c, d = generate(RandomSpec((2, 2), Kind.PRODUCT, seed)).amps
            assert abs(a * d - b * c) <= 1e-12

    def test_near_product_is_close(self):
        base = generate(RandomSpec((2, 2, 2), Kind.NEAR_PRODUCT, 3, eps=0.0))
        near = generate(RandomSpec((2, 2, 2), Kind.NEAR_PRODUCT, 3, eps=1e-6))
        assert 1 - fidelity(base, near) < 1e-10

    @pytest.mark.parametrize(
        "spec",
        [
            RandomSpec((2, 3), Kind.BELL),
            RandomSpec((2, 3), Kind.GHZ),
            RandomSpec((2,), Kind.GHZ),
            RandomSpec((3, 3), Kind.W),
            RandomSpec((2, 1), Kind.HAAR),
            RandomSpec((2, 2), Kind.HAAR, seed=-1),
            RandomSpec((2, 2), Kind.HAAR, seed=2**64),
            RandomSpec((2, 2), Kind.NEAR_PRODUCT, eps=-1.0),
        ],
    )
    def test_bad_spec(self, spec):
        with pytest.raises(BadSpecError):
            generate(spec)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            RandomSpec((2, 2), "cluster")


class TestUnitaries:
    @pytest.mark.parametrize("r", [2, 3, 5])
    def test_unitary(self, rng, r):
        u = random_unitary(rng, r)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(r), atol=1e-13)

    def test_local_action_matches_kron(self, rng):
        s = random_ket(rng, (2, 3))
        u, v = random_unitary(rng, 2), random_unitary(rng, 3)
        np.testing.assert_allclose(
            apply_local_unitaries(s, [u, v]).amps, np.kron(u, v) @ s.amps, atol=1e-13
        )
