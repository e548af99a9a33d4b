"""Command-line front end: analyze, construct, verify and demo."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

from .analysis import DEFAULT_DEGREE, classify
from .construct import (
    DEFAULT_RESIDUAL_TOL,
    MatchProblem,
    Objective,
    RankDeficientError,
    construct_signed_measure,
    verify_match,
)
from .demo import FIXTURES, run_fixture
from .moments import measure_from_json, measure_to_json, moments_from_json, polynomial_to_json
from .numeric import EXACT, MODES, format_scalar
from .support import DEFAULT_SEED, SamplingError, support_from_json

SEED_ENV = "SIGNEDMOMENTS_SEED"

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_USAGE = 2

_EPILOG = """\
input formats (JSON, full schemas under {schemas}):
  support   {{"class": "FullSpace", "dimension": 2}}
            {{"class": "Orthant", "dimension": 2}}
            {{"class": "Strip", "bounds": [[0, 1], null]}}
            {{"class": "BoundedBox", "intervals": [[0, 1]]}}
            {{"class": "Grid", "axes": [{{"values": [1, 2, 3]}}, {{"rule": {{"kind": "linear", "start": 1, "step": 1}}}}]}}
            {{"class": "PointSequence1D", "rule": {{"kind": "power", "exponent": 2, "start": 1}}}}
            {{"class": "UnionOfRays", "rays": [{{"offset": [0, 0], "direction": [1, 0]}}]}}
            {{"class": "AffineCone", "vertex": [0, 0], "generators": [[1, 1], [1, 2]]}}
            {{"class": "SampledSet", "dimension": 2, "points": [[0, 1]], "escapes": [], "certified": false}}
  moments   {{"dimension": 1, "max_degree": 2, "entries": [{{"alpha": [0], "value": "1/1"}}, ...]}}
  measure   {{"dimension": 1, "atoms": [{{"point": ["1/1"], "weight": "-3/2"}}]}}
scalars are JSON numbers (float mode) or exact rationals written "num/den".
The default seed is {seed}; set {env} to override it.
exit codes: 0 success, 1 contract violation, 2 usage or malformed input.
"""


class InputError(Exception):
    """Unreadable or malformed input file."""


def schema_dir() -> Path:
    return Path(str(resources.files("signedmoments") / "schemas"))


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _load(path: str, parser, what: str):
    obj = _load_json(path)
    try:
        return parser(obj)
    except (ValueError, TypeError, KeyError, AttributeError) as exc:
        raise InputError(f"{path}: invalid {what}: {exc}") from None


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_finite(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(args, payload: dict, summary: str) -> None:
    text = dumps(payload)
    if args.out:
        Path(args.out).write_text(text)
        if not args.quiet:
            print(summary)
    else:
        sys.stdout.write(text)
    if args.verbose:
        print(summary, file=sys.stderr)


def _cmd_analyze(args) -> int:
    K = _load(args.support, support_from_json, "support spec")
    report = classify(K, args.degree, args.mode or EXACT, args.seed)
    payload = report.to_json()
    if args.trace_csv:
        with open(args.trace_csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["round", "radius", "ratio"])
            if report.growth is not None:
                w.writerows((k, repr(s), repr(r)) for k, s, r in report.growth.csv_rows())
    witness = f", witness {report.witness.polynomial}" if report.witness else ""
    cond = f" via {report.condition}" if report.condition else ""
    _emit(args, payload, f"{report.verdict.value}{cond}{witness} (degree {report.degree_checked})")
    return EXIT_OK


def _match_payload(result, verification) -> dict:
    return {
        "measure": measure_to_json(result.measure),
        "total_variation": format_scalar(result.total_variation),
        "residuals": [{"alpha": list(a), "value": format_scalar(v)} for a, v in result.residuals.items()],
        "diagnostics": result.diagnostics,
        "verification": verification.to_json(),
    }


def _cmd_construct(args) -> int:
    target = _load(args.moments, moments_from_json, "moment sequence")
    K = _load(args.support, support_from_json, "support spec")
    try:
        prob = MatchProblem(target, K, args.node_budget, Objective(args.objective))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        result = construct_signed_measure(prob, args.mode, args.seed)
    except RankDeficientError as exc:
        cert = None if exc.certificate is None else polynomial_to_json(exc.certificate)
        _emit(args, {"error": str(exc), "null_certificate": cert}, f"failed: {exc}")
        return EXIT_CONTRACT
    except SamplingError as exc:
        _emit(args, {"error": str(exc), "null_certificate": None}, f"failed: {exc}")
        return EXIT_CONTRACT
    v = verify_match(result, prob, args.tol)
    summary = (
        f"{len(result.measure)} atoms, total variation {format_scalar(result.total_variation)}, "
        f"max rel residual {v.max_rel_residual:.3g}, {'ok' if v.ok else 'CONTRACT VIOLATED'}"
    )
    _emit(args, _match_payload(result, v), summary)
    return EXIT_OK if v.ok else EXIT_CONTRACT


def _cmd_verify(args) -> int:
    mu = _load(args.measure, _measure_or_result, "measure")
    target = _load(args.moments, moments_from_json, "moment sequence")
    K = _load(args.support, support_from_json, "support spec")
    if mu.dimension != target.dimension:
        raise InputError("measure and moments have different dimensions")
    v = verify_match(mu, MatchProblem(target, K), args.tol)
    summary = (
        f"max abs residual {v.max_abs_residual:.3g}, max rel residual {v.max_rel_residual:.3g}, "
        f"{len(v.outside_support)} atoms outside K: {'ok' if v.ok else 'CONTRACT VIOLATED'}"
    )
    _emit(args, v.to_json(), summary)
    return EXIT_OK if v.ok else EXIT_CONTRACT


def _measure_or_result(obj):
    # accept both a bare measure and the full output of `construct`
    if isinstance(obj, dict) and "measure" in obj:
        obj = obj["measure"]
    return measure_from_json(obj)


def _cmd_demo(args) -> int:
    names = [args.fixture] if args.fixture else list(FIXTURES)
    rows = [run_fixture(n, args.seed) for n in names]
    if not args.quiet:
        print(f"{'criterion':<10} {'fixture':<11} {'result':<6} detail")
        for r in rows:
            print(f"{r.criterion:<10} {r.name:<11} {'PASS' if r.passed else 'FAIL':<6} {r.detail}")
    if args.out:
        payload = [{"criterion": r.criterion, "fixture": r.name, "passed": r.passed, "detail": r.detail} for r in rows]
        Path(args.out).write_text(dumps(payload))
    if args.verbose:
        for r in rows:
            print(f"{r.name}: {r.seconds:.2f}s", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_CONTRACT


def _common(p: argparse.ArgumentParser, seed: int, mode: bool = True) -> None:
    p.add_argument("--seed", type=int, default=seed, help=f"sampling seed (default {seed})")
    if mode:
        p.add_argument("--mode", choices=MODES, default=None, help="arithmetic: exact rationals or floats")
    p.add_argument("--out", default="", help="write the JSON report here instead of stdout")
    loud = p.add_mutually_exclusive_group()
    loud.add_argument("-v", "--verbose", action="store_true", help="print a summary to stderr")
    loud.add_argument("-q", "--quiet", action="store_true", help="print nothing besides the JSON")


def build_parser(seed: int = DEFAULT_SEED) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signedmoments",
        description="Signed-measure moment problems on closed sets: decide and construct.",
        epilog=_EPILOG.format(schemas=schema_dir(), seed=DEFAULT_SEED, env=SEED_ENV),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a support set")
    p.add_argument("--support", required=True, help="SupportSpec JSON")
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help=f"degree budget N (default {DEFAULT_DEGREE})")
    p.add_argument("--trace-csv", default="", help="write the witness growth trace as CSV")
    _common(p, seed)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("construct", help="build a signed atomic measure with given moments")
    p.add_argument("--moments", required=True, help="MomentSequence JSON")
    p.add_argument("--support", required=True, help="SupportSpec JSON")
    p.add_argument("--objective", choices=[o.value for o in Objective], default=Objective.ANY.value)
    p.add_argument("--node-budget", type=int, default=None, help="number of atoms to place (default C(N+d,d))")
    p.add_argument("--tol", type=float, default=DEFAULT_RESIDUAL_TOL, help="relative residual tolerance in float mode")
    _common(p, seed)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="check a measure against moments and a support")
    p.add_argument("--measure", required=True, help="measure JSON (or construct output)")
    p.add_argument("--moments", required=True, help="MomentSequence JSON")
    p.add_argument("--support", required=True, help="SupportSpec JSON")
    p.add_argument("--tol", type=float, default=DEFAULT_RESIDUAL_TOL, help="relative residual tolerance in float mode")
    _common(p, seed, mode=False)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("demo", help="run the acceptance fixtures and print a pass/fail table")
    p.add_argument("fixture", nargs="?", choices=list(FIXTURES), help="run one fixture only")
    _common(p, seed, mode=False)
    p.set_defaults(func=_cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        seed = _default_seed()
    except InputError as exc:
        print(f"signedmoments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser = build_parser(seed)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"signedmoments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
