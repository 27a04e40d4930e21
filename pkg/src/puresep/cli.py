"""Command-line interface.

Exit codes: 0 success, 1 semantic negative (not separable, counterexample
found), 2 input error, 3 internal consistency failure. Partites are
numbered from 1 on the command line and in all output.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .basis import local_coherence_vector, norm_squared
from .errors import BadSpecError, CriterionDisagreementError, NotSeparableError
from .measures import measure
from .oracle import DEFAULT_EPS, Kind, RandomSpec, generate
from .separability import DEFAULT_TOL, check, factorize
from .state import PureState
from .statefile import StateFileError, dumps, load, state_document
from .stress import run_stress

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("puresep")


class InputError(Exception):
    pass


def _num(x: float, places: int = 9) -> str:
    s = f"{x:.{places}f}"
    return s[1:] if s.startswith("-") and float(s) == 0.0 else s


def _one_based(indices) -> list[int]:
    return sorted(i + 1 for i in indices)


def _envelope(command, sf=None, tol=None, status="ok", result=None) -> dict:
    return {
        "command": command,
        "label": sf.label if sf is not None else None,
        "dims": list(sf.state.dims) if sf is not None else None,
        "tol": tol,
        "status": status,
        "result": result if result is not None else {},
    }


def _emit(args, doc, human_lines):
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(human_lines))


def _header(sf, tol=None) -> str:
    parts = [f"state: {sf.label or '(unlabeled)'}", f"dims: {list(sf.state.dims)}"]
    if tol is not None:
        parts.append(f"tol: {tol:g}")
    return "  ".join(parts)


def _load(path):
    try:
        return load(path)
    except StateFileError as exc:
        raise InputError(str(exc)) from None


def _overall(report) -> str:
    if report.fully_separable:
        return "fully separable"
    if report.separable_partites:
        return "partially separable"
    return "entangled"


def cmd_check(args) -> int:
    sf = _load(args.file)
    try:
        report = check(sf.state, args.tol)
    except CriterionDisagreementError as exc:
        log.error("internal consistency failure: %s", exc)
        return EXIT_INTERNAL
    rows = [
        {
            "partite": p.index + 1,
            "norm_squared": p.norm_squared,
            "target": p.target,
            "deficit": p.deficit,
            "max_minor": p.max_minor,
            "separable": p.separable,
            "borderline": p.borderline,
        }
        for p in report.per_partite
    ]
    verdict = _overall(report)
    result = {
        "verdict": verdict,
        "fully_separable": report.fully_separable,
        "separable_partites": _one_based(report.separable_partites),
        "criterion": report.criterion,
        "partites": rows,
    }
    lines = [_header(sf, args.tol),
             f"{'partite':<8} {'|xi|^2':>12} {'target':>12} {'deficit':>12} {'max minor':>12}  verdict"]
    for row in rows:
        mark = "separable" if row["separable"] else "entangled"
        if row["borderline"]:
            mark += " (borderline)"
        lines.append(
            f"{row['partite']:<8} {_num(row['norm_squared']):>12} {_num(row['target']):>12} "
            f"{_num(row['deficit']):>12} {_num(row['max_minor']):>12}  {mark}"
        )
    sep = ", ".join(str(i) for i in result["separable_partites"]) or "none"
    lines.append(f"separable partites: {sep}")
    lines.append(f"verdict: {verdict}")
    _emit(args, _envelope("check", sf, args.tol, result=result), lines)
    return EXIT_OK


def cmd_factor(args) -> int:
    sf = _load(args.file)
    try:
        fact = factorize(sf.state, args.tol)
    except CriterionDisagreementError as exc:
        log.error("internal consistency failure: %s", exc)
        return EXIT_INTERNAL
    except NotSeparableError as exc:
        failing = _one_based(exc.partites)
        doc = _envelope("factor", sf, args.tol, status="not_separable",
                        result={"entangled_partites": failing})
        lines = [_header(sf, args.tol),
                 "not separable; entangled partites: " + ", ".join(map(str, failing))]
        _emit(args, doc, lines)
        return EXIT_NEGATIVE
    factors = [state_document(f, f"factor {k}") for k, f in enumerate(fact.factors, start=1)]
    result = {"factors": factors, "fidelity": fact.residual_fidelity}
    lines = [_header(sf, args.tol)]
    for k, f in enumerate(fact.factors, start=1):
        lines.append(f"factor {k}:")
        lines.append(dumps(f, f"factor {k}").rstrip("\n"))
    lines.append(f"fidelity: {_num(fact.residual_fidelity, 12)}")
    _emit(args, _envelope("factor", sf, args.tol, result=result), lines)
    return EXIT_OK


def cmd_coherence(args) -> int:
    sf = _load(args.file)
    n = sf.state.n
    if not 1 <= args.partite <= n:
        raise InputError(f"--partite must be between 1 and {n}, got {args.partite}")
    xi = local_coherence_vector(sf.state, args.partite - 1)
    values = [float(v) for v in xi.values]
    result = {
        "partite": args.partite,
        "coherence_vector": values,
        "norm_squared": norm_squared(xi),
        "target": xi.target,
    }
    lines = [_header(sf), f"partite {args.partite} (r={xi.dim}) coherence vector:"]
    lines.append("(" + ", ".join(_num(v) for v in values) + ")")
    lines.append(f"|xi|^2: {_num(result['norm_squared'])}  target: {_num(xi.target)}")
    _emit(args, _envelope("coherence", sf, result=result), lines)
    return EXIT_OK


def cmd_measure(args) -> int:
    sf = _load(args.file)
    rep = measure(sf.state)
    rows = [
        {"partite": p.index + 1, "deficit": p.deficit,
         "linear_entropy": p.linear_entropy, "entropy_bits": p.entropy}
        for p in rep.per_partite
    ]
    result = {
        "partites": rows,
        "mean_deficit": rep.mean_deficit,
        "max_deficit": rep.max_deficit,
        "mean_entropy_bits": rep.mean_entropy,
    }
    lines = [_header(sf), f"{'partite':<8} {'deficit':>12} {'linear S':>12} {'S (bits)':>12}"]
    for row in rows:
        lines.append(f"{row['partite']:<8} {_num(row['deficit']):>12} "
                     f"{_num(row['linear_entropy']):>12} {_num(row['entropy_bits']):>12}")
    lines.append(f"mean deficit: {_num(rep.mean_deficit)}  max deficit: {_num(rep.max_deficit)}  "
                 f"mean entropy: {_num(rep.mean_entropy)} bits")
    _emit(args, _envelope("measure", sf, result=result), lines)
    return EXIT_OK


_KINDS = {
    "bell": Kind.BELL,
    "ghz": Kind.GHZ,
    "w": Kind.W,
    "product": Kind.PRODUCT,
    "haar": Kind.HAAR,
    "near-product": Kind.NEAR_PRODUCT,
}


def cmd_gen(args) -> int:
    if args.eps is not None and args.kind != "near-product":
        raise InputError("--eps only applies to --kind near-product")
    eps = DEFAULT_EPS if args.eps is None else args.eps
    spec = RandomSpec(args.dims, _KINDS[args.kind], args.seed, eps)
    try:
        state = generate(spec)
    except BadSpecError as exc:
        raise InputError(str(exc)) from None
    label = args.kind if args.kind in ("bell", "ghz", "w") else f"{args.kind} seed={args.seed}"
    text = dumps(state, label)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_stress(args) -> int:
    if args.samples < 1:
        raise InputError(f"--samples must be >= 1, got {args.samples}")
    if len(args.dims) < 2:
        raise InputError("--dims needs at least two partites for a stress run")
    rep = run_stress(args.dims, args.samples, args.seed, args.tol)
    result = {
        "samples": rep.samples,
        "seed": rep.seed,
        "agreements": rep.agreements,
        "disagreements": rep.disagreements,
        "borderline": rep.borderline,
        "spot_checks": rep.spot_checks,
        "worst_deficit_discrepancy": rep.worst_deficit_discrepancy,
        "worst_minor_discrepancy": rep.worst_minor_discrepancy,
        "worst_purity_identity_error": rep.worst_purity_identity_error,
        "kind_counts": rep.kind_counts,
        "counterexample": rep.counterexample,
    }
    doc = {
        "command": "stress",
        "label": None,
        "dims": list(rep.dims),
        "tol": args.tol,
        "status": "ok" if rep.ok else "counterexample",
        "result": result,
    }
    lines = [
        f"dims: {list(rep.dims)}  samples: {rep.samples}  seed: {rep.seed}  tol: {args.tol:g}",
        f"agree: {rep.agreements}/{rep.samples}",
        f"borderline (flagged): {rep.borderline}",
        f"worst deficit discrepancy (norm vs Schmidt): {rep.worst_deficit_discrepancy:.3e}",
        f"worst minor discrepancy (norm vs 4 sum |minor|^2): {rep.worst_minor_discrepancy:.3e}",
        f"worst purity-identity error: {rep.worst_purity_identity_error:.3e}",
    ]
    if rep.counterexample is not None:
        lines.append("counterexample:")
        lines.append(json.dumps(rep.counterexample))
    else:
        lines.append("no counterexample")
    _emit(args, doc, lines)
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def _dims_arg(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")
    if not dims or any(r < 2 for r in dims):
        raise argparse.ArgumentTypeError(f"every dimension must be >= 2, got {text!r}")
    return dims


def _tol_arg(text: str) -> float:
    try:
        tol = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not tol > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return tol


def _seed_arg(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="puresep",
        description="Separability, factorization and entanglement measures for pure multipartite states.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="norm + minor separability check")
    p.add_argument("file")
    p.add_argument("--tol", type=_tol_arg, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("factor", help="factor a fully separable state into single-partite states")
    p.add_argument("file")
    p.add_argument("--tol", type=_tol_arg, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("coherence", help="coherence vector of one partite's reduced state")
    p.add_argument("file")
    p.add_argument("--partite", type=int, required=True, help="1-based partite index")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("measure", help="coherence-norm entanglement measures")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("gen", help="write a fixture or seeded random state file")
    p.add_argument("--kind", required=True, choices=list(_KINDS))
    p.add_argument("--dims", type=_dims_arg, required=True)
    p.add_argument("--seed", type=_seed_arg, default=0)
    p.add_argument("--eps", type=float, default=None, help="noise scale for near-product")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stress", help="criterion-vs-oracle agreement over random states")
    p.add_argument("--dims", type=_dims_arg, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=_seed_arg, default=0)
    p.add_argument("--tol", type=_tol_arg, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stress)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(format="puresep: %(levelname)s: %(message)s", level=logging.WARNING)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"puresep: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
