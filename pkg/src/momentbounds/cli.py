"""Command-line front end.

Usage::

    momentbounds report --measure mu.json [--format json|csv]
    momentbounds report --mean 0 --var 0.25
    momentbounds tightness --eps 0.1,0.01
    momentbounds tightness --log-range 1e-1 1e-6 6
    momentbounds minorant --center 0.3 --grid 1001
    momentbounds extremal --mean 0 --var 0.25 --family two_point --grid 10000
    momentbounds verify --seed 1 --trials 10000 --max-atoms 8

Exit status: 0 on success, 1 when a sweep (or an oracle) finds a violation,
2 on invalid input; the error class name is printed on standard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import bounds, extremal, measures, verify
from .errors import InvalidInput, MomentBoundsError, OracleViolation


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_table(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, allow_nan=False) + "\n"


def cmd_report(args) -> int:
    inline = args.mean is not None or args.var is not None
    if inline and args.measure:
        raise InvalidInput("--measure and --mean/--var are mutually exclusive")
    if inline:
        if args.mean is None or args.var is None:
            raise InvalidInput("inline input needs both --mean and --var")
        if args.save_measure:
            raise InvalidInput("--save-measure needs --measure")
        result = bounds.bounds_only(args.mean, args.var)
    elif args.measure:
        mu = measures.load_measure(args.measure)
        if args.save_measure:
            measures.save_measure(mu, args.save_measure)
        result = bounds.report(mu).to_dict()
    else:
        raise InvalidInput("give either --measure FILE or --mean M --var V")
    if args.format == "csv":
        _emit(_csv_table(list(result), [list(result.values())]), args.output)
    else:
        _emit(_dump_json(result), args.output)
    return 0


def _parse_eps_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InvalidInput(f"cannot parse eps list {text!r}") from None


def cmd_tightness(args) -> int:
    if args.eps is not None:
        eps = _parse_eps_list(args.eps)
    else:
        a, b, n = args.log_range
        try:
            a, b, n = float(a), float(b), int(n)
        except ValueError:
            raise InvalidInput("--log-range expects A B N") from None
        if n < 1 or not (a > 0 and b > 0):
            raise InvalidInput("--log-range needs positive A, B and N >= 1")
        eps = np.geomspace(a, b, n).tolist()
    if not eps:
        raise InvalidInput("no eps values given")
    scan = extremal.epsilon_sweep(eps)
    _emit(_csv_table(scan.columns, scan.rows.tolist()), args.output)
    return 0


def cmd_minorant(args) -> int:
    if args.grid < 1:
        raise InvalidInput("--grid must be positive")
    xs = np.linspace(-1.0, 1.0, args.grid + 2)[1:-1]
    fx, qx, gap = bounds.minorant_grid(args.center, xs)
    rows = ([args.center, *r] for r in zip(xs.tolist(), fx.tolist(), qx.tolist(), gap.tolist()))
    _emit(_csv_table(("c", "x", "f", "q", "gap"), rows), args.output)
    return 0


def cmd_extremal(args) -> int:
    if args.family == "two_point":
        scan = extremal.sharp_scan(args.mean, args.var, args.grid)
    else:
        scan = extremal.three_atom_search(args.mean, args.var, args.grid)
    if args.format == "csv":
        buf = io.StringIO()
        scan.write_csv(buf)
        _emit(buf.getvalue(), args.output)
    else:
        _emit(_dump_json(scan.summary()), args.output)
    return 0


def cmd_verify(args) -> int:
    config = verify.SweepConfig(
        seed=args.seed, trials=args.trials, max_atoms=args.max_atoms, atom_margin=args.margin
    )
    result = verify.property_sweep(config)
    _emit(result.to_json(include_elapsed=not args.no_timing) + "\n", args.output)
    return 0 if result.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentbounds",
        description="Lower bounds on sum_n a_n = E[1/(1-x)] for probability measures on (-1, 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="both lower bounds for a measure or an (m, v) pair")
    p.add_argument("--measure", metavar="FILE", help="JSON measure file")
    p.add_argument("--mean", type=float, metavar="M")
    p.add_argument("--var", type=float, metavar="V")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--save-measure", metavar="FILE", help="write the parsed, canonical measure")
    p.add_argument("--output", "-o", metavar="FILE")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("tightness", help="S(eps) for the extremal family")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--eps", metavar="LIST", help="comma-separated eps values")
    group.add_argument("--log-range", nargs=3, metavar=("A", "B", "N"))
    p.add_argument("--output", "-o", metavar="FILE")
    p.set_defaults(func=cmd_tightness)

    p = sub.add_parser("minorant", help="gap between 1/(1-x) and its quadratic minorant")
    p.add_argument("--center", type=float, required=True, metavar="C")
    p.add_argument("--grid", type=int, required=True, metavar="N")
    p.add_argument("--output", "-o", metavar="FILE")
    p.set_defaults(func=cmd_minorant)

    p = sub.add_parser("extremal", help="brute-force infimum of S at fixed (m, v)")
    p.add_argument("--mean", type=float, required=True, metavar="M")
    p.add_argument("--var", type=float, required=True, metavar="V")
    p.add_argument("--family", choices=("two_point", "three_atom"), default="two_point")
    p.add_argument("--grid", type=int, required=True, metavar="N")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", metavar="FILE")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("verify", help="seeded property sweep over random measures")
    p.add_argument("--seed", type=int, required=True, metavar="S")
    p.add_argument("--trials", type=int, required=True, metavar="T")
    p.add_argument("--max-atoms", type=int, required=True, metavar="K")
    p.add_argument("--margin", type=float, default=1e-3)
    p.add_argument("--no-timing", action="store_true", help="omit elapsed time from the report")
    p.add_argument("--output", "-o", metavar="FILE")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MomentBoundsError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OracleViolation as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
