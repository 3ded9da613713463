"""Command-line front end.

    monotone check SCENARIO [--seed N] [--tol T] [--format csv] [--out PATH] [--jobs J]
    monotone validate --op NAME | --op-json JSON | --scenario PATH
    monotone slope --op NAME --x X --xstar XS [--eps E]
    monotone enlarge --op NAME --kind KIND --eps E (--x X --xstar XS | --x X --set | --probe LO HI COUNT)
    monotone report REPORT.json [--format csv] [--out PATH]

Vectors are comma-separated (``--x 0.5,1``).  Exit codes: 0 all checks
hold, 1 at least one violation, 2 invalid input or configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import geometry as geo
from .enlargements import (KINDS, EnlargementQuery, domain_probe, enlargement_membership,
                           enlargement_polyhedron, image_plus_ball, interval_grid)
from .errors import InvalidInput, MonotoneError
from .operators import FiniteGraph, OperatorSpec, named_operator, operator_from_dict, sample_graph
from .report import FORMATS, emit_report, fmt_float, load_report
from .sampling import direction_set, local_sample
from .scenario import (bundled_scenarios, load_scenario, monotone_check, run_checks,
                       validate_operators, worst_failure)
from .slope import image_distance, slope_enlarged, slope_estimate

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID = 0, 1, 2


def _vec(text: str) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from None
    if not np.all(np.isfinite(v)):
        raise argparse.ArgumentTypeError(f"vector entries must be finite: {text!r}")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _jobs(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def _out(data: dict, fmt: str = "json") -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True, default=_jsonable))
    else:
        for k in sorted(data):
            print(f"{k}={_jsonable(data[k])}")


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return [_jsonable(t) for t in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(t) for t in v]
    if isinstance(v, (float, np.floating)):
        return fmt_float(v) if not math.isfinite(v) else float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _operator(args) -> OperatorSpec:
    if getattr(args, "op_json", None):
        try:
            desc = json.loads(args.op_json)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"--op-json:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        return operator_from_dict(desc)
    if not getattr(args, "op", None):
        raise InvalidInput("an operator is required (--op NAME or --op-json JSON)")
    return named_operator(args.op, args.dim)


def _common(p: argparse.ArgumentParser, *, sampling=True, output=True):
    p.add_argument("--seed", type=_nonneg_int, help="seed (default: scenario, then $MONOTONE_SEED, then 0)")
    p.add_argument("--dim", type=int, help="dimension of dimension-generic catalog operators")
    if sampling:
        p.add_argument("--radius", type=_positive, help="sampling radius R")
        p.add_argument("--density", type=_positive, help="sampling density h")
        p.add_argument("--tol", type=_positive, help="tolerance")
    if output:
        p.add_argument("--format", choices=FORMATS, help="report format")
        p.add_argument("--out", help="report path ('-' for stdout)")


def _op_args(p):
    p.add_argument("--op", help="catalog operator name")
    p.add_argument("--op-json", help="operator description as JSON")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monotone", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a scenario file")
    p.add_argument("scenario", help=f"scenario path or bundled name ({', '.join(bundled_scenarios())})")
    _common(p)
    p.add_argument("--jobs", type=_jobs, help="worker processes")
    p.add_argument("--timings", action="store_true", default=None,
                   help="record runtime_ms (makes reports run-dependent)")

    p = sub.add_parser("validate", help="check operator monotonicity")
    _op_args(p)
    p.add_argument("--scenario", help="validate every operator of a scenario")
    _common(p)

    p = sub.add_parser("slope", help="slope L(x, x*, T) and distance d(x*, T(x))")
    _op_args(p)
    p.add_argument("--x", type=_vec, required=True)
    p.add_argument("--xstar", type=_vec, required=True)
    p.add_argument("--eps", type=float, help="slope of the norm-weighted enlargement instead")
    _common(p, output=False)

    p = sub.add_parser("enlarge", help="enlargement membership, set or domain probe")
    _op_args(p)
    p.add_argument("--kind", choices=KINDS, default="norm_weighted")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--x", type=_vec)
    p.add_argument("--xstar", type=_vec)
    p.add_argument("--set", action="store_true", help="support of the sampled set vs T(x) + eps B")
    p.add_argument("--probe", nargs=3, type=float, metavar=("LO", "HI", "COUNT"),
                   help="domain probe on a grid")
    _common(p, output=False)

    p = sub.add_parser("report", help="re-emit a json report (e.g. as csv)")
    p.add_argument("report")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--out", default="-")
    return ap


def _overrides(args) -> dict:
    keys = ("seed", "tol", "density", "radius", "dim", "format", "out", "jobs", "timings")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def run_scenario(path, overrides: dict | None = None) -> int:
    """Run every check of a scenario and write the report; returns the exit code."""
    try:
        sc = load_scenario(path)
        seed, settings = sc.resolved(overrides)
        results = run_checks(sc, overrides)
        verdicts = [v for r in results for v in r.verdicts]
        runtimes = None
        if settings.get("timings"):
            runtimes = [r.runtime_ms for r in results for _ in r.verdicts]
        emit_report(verdicts, settings["format"], settings.get("out"), runtimes)
    except MonotoneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    failed = worst_failure(results)
    n_bad = sum(not v.holds for v in verdicts)
    if failed is None:
        print(f"{sc.name}: {len(verdicts)} verdicts hold (seed {seed})", file=sys.stderr)
        return EXIT_OK
    r, v = failed
    print(f"{sc.name}: {n_bad} of {len(verdicts)} verdicts violated (seed {seed}); worst: "
          f"{v.theorem_id} on {v.params.get('operator')} (check {r.index}) "
          f"worst_violation={fmt_float(v.worst_violation)} tol={v.params.get('tol')}",
          file=sys.stderr)
    return EXIT_VIOLATION


def _cmd_validate(args) -> int:
    if args.scenario:
        sc = load_scenario(args.scenario)
        ops = sc.build_operators(args.dim)
    else:
        T = _operator(args)
        ops = {T.label: T}
    verdicts = []
    for T in ops.values():
        p = {} if isinstance(T, FiniteGraph) else {"radius": args.radius or 3.0}
        if args.density:
            p["density"] = args.density
        verdicts += monotone_check(T, p, args.seed or 0, {})
    emit_report(verdicts, args.format or "json", args.out)
    bad = [v for v in verdicts if not v.holds]
    for v in bad:
        pr = v.params
        print(f"error: {pr['operator']} is not monotone: pairs #{pr['i']} and #{pr['j']} "
              f"give {pr['worst_value']:.6g}", file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


def _cmd_slope(args) -> int:
    T = _operator(args)
    tol, h = args.tol or 1e-3, args.density or 1e-3
    x, xs = geo.as_vec(args.x, T.dim), geo.as_vec(args.xstar, T.dim)
    d = image_distance(T, x, xs)
    if args.eps is not None:
        r = slope_enlarged(T, args.eps, x, xs, tol, h)
        _out({"operator": T.label, "x": x, "xstar": xs, "eps": args.eps,
              "slope_enlarged": r.value, "max0_d_minus_eps": max(0.0, d - args.eps),
              "R": r.truncation_radius, "h": r.density})
        return EXIT_OK
    r = slope_estimate(T, x, xs, tol, h)
    _out({"operator": T.label, "x": x, "xstar": xs, "slope": r.value, "distance": d,
          "R": r.truncation_radius, "h": r.density, "lower_bound": r.is_lower_bound})
    return EXIT_OK


def _cmd_enlarge(args) -> int:
    T = _operator(args)
    if args.probe is not None:
        lo, hi, count = args.probe
        if count < 1 or count != int(count):
            raise InvalidInput("probe COUNT must be a positive integer")
        grid = interval_grid(lo, hi, int(count), T.dim)
        out = domain_probe(T, args.kind, args.eps, grid)
        _out({"operator": T.label, "kind": args.kind, "eps": args.eps,
              "points": [[p.tolist(), bool(ne)] for p, ne in out]})
        return EXIT_OK
    if args.x is None:
        raise InvalidInput("--x is required for membership and --set")
    x = geo.as_vec(args.x, T.dim)
    radius, h = args.radius or 8.0, args.density or 1e-2
    q = EnlargementQuery(args.kind, args.eps, x, radius, h)
    if args.set:
        s = local_sample(T, x, min(h, radius / 4), radius)
        P = enlargement_polyhedron(s, q)
        U = direction_set(T.dim, 8)
        sup = [P.support(u) if not P.is_empty() else -math.inf for u in U]
        data = {"operator": T.label, "kind": args.kind, "eps": args.eps, "x": x,
                "empty": P.is_empty(), "directions": U, "support": sup}
        if args.kind == "norm_weighted":
            B = image_plus_ball(T, x, args.eps)
            data["support_image_plus_ball"] = [geo.set_support(B, u) if not B.is_empty()
                                               else -math.inf for u in U]
        _out(data)
        return EXIT_OK
    if args.xstar is None:
        raise InvalidInput("--xstar is required for membership")
    sample = T.sample if isinstance(T, FiniteGraph) else sample_graph(T, radius, h)
    member, worst = enlargement_membership(sample, q, args.xstar)
    _out({"operator": T.label, "kind": args.kind, "eps": args.eps, "x": x,
          "xstar": args.xstar, "member": member, "worst": worst, "R": radius, "h": h})
    return EXIT_OK


def _cmd_report(args) -> int:
    verdicts, runtimes = load_report(args.report)
    emit_report(verdicts, args.format, args.out,
                runtimes if any(t is not None for t in runtimes) else None)
    return EXIT_OK if all(v.holds for v in verdicts) else EXIT_VIOLATION


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if args.command == "check":
        return run_scenario(args.scenario, _overrides(args))
    handlers = {"validate": _cmd_validate, "slope": _cmd_slope, "enlarge": _cmd_enlarge,
                "report": _cmd_report}
    try:
        return handlers[args.command](args)
    except MonotoneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


__all__ = ["main", "run_scenario", "build_parser", "validate_operators"]

if __name__ == "__main__":
    sys.exit(main())
