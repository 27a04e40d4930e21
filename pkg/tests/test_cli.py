"""CLI contract: golden output for every command and the exit-code table.

Set UPDATE_GOLDEN=1 to rewrite the files under tests/golden.
"""

import json
import logging
import os
import re
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from puresep import separability
from puresep.cli import main
from puresep.oracle import Kind, RandomSpec, generate
from puresep.statefile import load, loads

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"
NUMBER = re.compile(r"-?\d+\.\d+(?:e[-+]\d+)?")
NUM_TOL = 1e-9


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def close_json(a, b):
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(close_json(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(close_json(x, y) for x, y in zip(a, b))
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return abs(a - b) <= NUM_TOL
    return a == b


def close_text(a, b):
    """Identical apart from decimal numbers differing by at most NUM_TOL."""
    if NUMBER.sub("#", a) != NUMBER.sub("#", b):
        return False
    xs, ys = NUMBER.findall(a), NUMBER.findall(b)
    return all(abs(float(x) - float(y)) <= NUM_TOL for x, y in zip(xs, ys))


def compare_golden(name, out, as_json):
    path = GOLDEN / name
    if UPDATE:
        path.write_text(out)
    expected = path.read_text()
    if as_json:
        assert close_json(json.loads(out), json.loads(expected)), f"{name} differs"
    else:
        assert close_text(out, expected), f"{name} differs:\n{out}"


F = {name: DATA / f"{name}.json" for name in
     ("bell", "ghz3", "w3", "qutrit_max", "product3", "zero_zero", "bell_zero")}

CASES = [
    ("check_bell", ["check", F["bell"]], 0),
    ("check_ghz3", ["check", F["ghz3"]], 0),
    ("check_w3", ["check", F["w3"]], 0),
    ("check_qutrit_max", ["check", F["qutrit_max"]], 0),
    ("check_product3", ["check", F["product3"]], 0),
    ("check_bell_zero", ["check", F["bell_zero"]], 0),
    ("check_bell_loose", ["check", F["bell"], "--tol", "1e-3"], 0),
    ("factor_product3", ["factor", F["product3"]], 0),
    ("factor_zero_zero", ["factor", F["zero_zero"]], 0),
    ("factor_ghz3", ["factor", F["ghz3"]], 1),
    ("factor_bell_zero", ["factor", F["bell_zero"]], 1),
    ("coherence_bell_1", ["coherence", F["bell"], "--partite", "1"], 0),
    ("coherence_zero_zero_1", ["coherence", F["zero_zero"], "--partite", "1"], 0),
    ("coherence_product3_3", ["coherence", F["product3"], "--partite", "3"], 0),
    ("coherence_qutrit_max_2", ["coherence", F["qutrit_max"], "--partite", "2"], 0),
    ("measure_bell", ["measure", F["bell"]], 0),
    ("measure_w3", ["measure", F["w3"]], 0),
    ("measure_qutrit_max", ["measure", F["qutrit_max"]], 0),
    ("measure_product3", ["measure", F["product3"]], 0),
    ("stress_222", ["stress", "--dims", "2,2,2", "--samples", "300", "--seed", "4"], 0),
    ("stress_33", ["stress", "--dims", "3,3", "--samples", "1000"], 0),
]


class TestGolden:
    @pytest.mark.parametrize("name, argv, code", CASES, ids=[c[0] for c in CASES])
    def test_human(self, capsys, name, argv, code):
        got, out, _ = run(capsys, *argv)
        assert got == code
        compare_golden(f"{name}.txt", out, as_json=False)

    @pytest.mark.parametrize("name, argv, code", CASES, ids=[c[0] for c in CASES])
    def test_json(self, capsys, name, argv, code):
        got, out, _ = run(capsys, *argv, "--json")
        assert got == code
        doc = json.loads(out)
        assert set(doc) == {"command", "label", "dims", "tol", "status", "result"}
        assert doc["command"] == argv[0]
        compare_golden(f"{name}.json", out, as_json=True)

    @pytest.mark.parametrize(
        "name, argv",
        [
            ("gen_ghz_222", ["gen", "--kind", "ghz", "--dims", "2,2,2"]),
            ("gen_w_222", ["gen", "--kind", "w", "--dims", "2,2,2"]),
            ("gen_bell", ["gen", "--kind", "bell", "--dims", "2,2"]),
            ("gen_product_23_seed7", ["gen", "--kind", "product", "--dims", "2,3", "--seed", "7"]),
            ("gen_near_product_22", ["gen", "--kind", "near-product", "--dims", "2,2", "--seed", "3", "--eps", "1e-3"]),
        ],
    )
    def test_gen(self, capsys, name, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        compare_golden(f"{name}.json", out, as_json=True)


class TestReportContents:
    def test_bell_check(self, capsys):
        _, out, _ = run(capsys, "check", F["bell"], "--json")
        res = json.loads(out)["result"]
        assert res["verdict"] == "entangled"
        assert [p["deficit"] for p in res["partites"]] == pytest.approx([1.0, 1.0], abs=1e-12)
        assert res["separable_partites"] == []

    def test_partial(self, capsys):
        _, out, _ = run(capsys, "check", F["bell_zero"])
        assert "separable partites: 3" in out
        assert "verdict: partially separable" in out

    def test_product_check(self, capsys):
        _, out, _ = run(capsys, "check", F["product3"])
        assert out.rstrip().endswith("verdict: fully separable")

    def test_factor_blocks_parse(self, capsys):
        _, out, _ = run(capsys, "factor", F["product3"], "--json")
        res = json.loads(out)["result"]
        assert len(res["factors"]) == 3
        assert res["fidelity"] >= 1 - 1e-10
        plus = loads(json.dumps(res["factors"][2])).state
        np.testing.assert_allclose(plus.amps, [2 ** -0.5, 2 ** -0.5], atol=1e-15)

    def test_factor_lists_partites(self, capsys):
        code, out, _ = run(capsys, "factor", F["ghz3"])
        assert code == 1
        assert "entangled partites: 1, 2, 3" in out

    def test_coherence_values(self, capsys):
        _, out, _ = run(capsys, "coherence", F["zero_zero"], "--partite", "1", "--json")
        assert json.loads(out)["result"]["coherence_vector"] == [0.0, 0.0, 1.0]
        _, out, _ = run(capsys, "coherence", F["bell"], "--partite", "1", "--json")
        assert json.loads(out)["result"]["coherence_vector"] == pytest.approx([0, 0, 0], abs=1e-15)

    def test_measure_values(self, capsys):
        _, out, _ = run(capsys, "measure", F["w3"], "--json")
        for p in json.loads(out)["result"]["partites"]:
            assert p["entropy_bits"] == pytest.approx(0.9183, abs=1e-3)
        _, out, _ = run(capsys, "measure", F["qutrit_max"], "--json")
        for p in json.loads(out)["result"]["partites"]:
            assert p["entropy_bits"] == pytest.approx(1.585, abs=1e-3)

    def test_stress_counts(self, capsys):
        _, out, _ = run(capsys, "stress", "--dims", "3,3", "--samples", "1000", "--json")
        res = json.loads(out)["result"]
        assert res["agreements"] == 1000 and res["counterexample"] is None


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["check", DATA / "bad_dims.json"],
            ["check", DATA / "bad_length.json"],
            ["check", DATA / "missing.json"],
            ["factor", DATA / "empty.json"],
            ["measure", DATA / "empty.json"],
            ["coherence", F["bell"], "--partite", "3"],
            ["coherence", F["bell"], "--partite", "0"],
            ["gen", "--kind", "bell", "--dims", "2,3"],
            ["gen", "--kind", "ghz", "--dims", "2,3"],
            ["gen", "--kind", "w", "--dims", "3,3"],
            ["gen", "--kind", "haar", "--dims", "2,2", "--eps", "0.1"],
            ["gen", "--kind", "near-product", "--dims", "2,2", "--eps", "-1"],
            ["stress", "--dims", "2,2,2", "--samples", "0"],
            ["stress", "--dims", "3", "--samples", "10"],
        ],
    )
    def test_input_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2
        assert out == ""
        assert err.startswith("puresep: error:")

    @pytest.mark.parametrize(
        "argv",
        [
            ["check", F["bell"], "--tol", "-1"],
            ["check", F["bell"], "--tol", "abc"],
            ["gen", "--kind", "cluster", "--dims", "2,2"],
            ["gen", "--kind", "haar", "--dims", "2,x"],
            ["gen", "--kind", "haar", "--dims", "2,1"],
            ["gen", "--kind", "haar", "--dims", "2,2", "--seed", "-3"],
            ["coherence", F["bell"]],
            [],
        ],
    )
    def test_argument_errors(self, capsys, argv):
        with pytest.raises(SystemExit) as info:
            main([str(a) for a in argv])
        assert info.value.code == 2

    def test_malformed_dims_names_field(self, capsys):
        _, _, err = run(capsys, "check", DATA / "bad_dims.json")
        assert "field 'dims'" in err

    def test_empty_file_message(self, capsys):
        _, _, err = run(capsys, "factor", DATA / "empty.json")
        assert "empty" in err

    def test_internal_disagreement(self, capsys, monkeypatch):
        monkeypatch.setattr(separability, "max_minor", lambda state, i: 0.5)
        assert run(capsys, "check", F["product3"])[0] == 3
        assert run(capsys, "factor", F["product3"])[0] == 3

    def test_stress_counterexample_exit(self, capsys, monkeypatch):
        from puresep import stress
        monkeypatch.setattr(stress, "batch_product_oracle", lambda amps, dims, tol: np.zeros(len(amps), bool))
        code, out, _ = run(capsys, "stress", "--dims", "2,2", "--samples", "20", "--json")
        assert code == 1
        doc = json.loads(out)
        assert doc["status"] == "counterexample"
        assert len(doc["result"]["counterexample"]["amplitudes"]) == 4


class TestStateFiles:
    @pytest.mark.parametrize(
        "kind, dims, seed",
        [("haar", "2,3,2", 1), ("product", "2,3", 7), ("near-product", "3,3", 9), ("ghz", "3,3,3", 0), ("w", "2,2,2,2", 0)],
    )
    def test_round_trip_bit_identical(self, capsys, tmp_path, kind, dims, seed):
        out = tmp_path / "s.json"
        assert run(capsys, "gen", "--kind", kind, "--dims", dims, "--seed", seed, "--out", out)[0] == 0
        expected = generate(RandomSpec(tuple(int(d) for d in dims.split(",")), Kind(kind), seed))
        sf = load(out)
        assert not sf.renormalized
        assert sf.state.amps.tobytes() == expected.amps.tobytes()

    def test_gen_deterministic(self, capsys):
        first = run(capsys, "gen", "--kind", "product", "--dims", "2,3", "--seed", "7")[1]
        assert run(capsys, "gen", "--kind", "product", "--dims", "2,3", "--seed", "7")[1] == first

    def test_renormalization_warning(self, capsys, caplog):
        with caplog.at_level(logging.WARNING):
            code, out, _ = run(capsys, "check", DATA / "unnormalized.json")
        assert code == 0
        assert "normalizing" in caplog.text
        assert "verdict: entangled" in out

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "puresep", "check", str(DATA / "unnormalized.json")],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0
        assert "warning" in proc.stderr.lower() and "normalizing" in proc.stderr
