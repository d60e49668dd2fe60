"""Command-line front end.

Usage:
    sqpart members --limit 100
    sqpart count 1000 [--set all|twosquares|file:PATH] [--save table.bin]
    sqpart estimate 10000 --method main
    sqpart saddle 1e6
    sqpart compare --range 1000 20000 --factor 2 [--out json]
    sqpart constant --digits 12
    sqpart landau 1e7

Exit codes: 0 ok, 2 usage error, 3 resource cap, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import exactcount, saddle, twosquares
from .errors import NumericalError, ResourceCapError

EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_NUMERIC = 4

MAX_DIGITS = 15


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    exact_log: float
    main_log: float
    simple_log: float
    diff_exact_log: float
    diff_est_log: float
    ratio_main: float


CSV_COLUMNS = [f.name for f in fields(ComparisonRow)]


def _positive_number(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _integer(text):
    # accept 1e4 / 20000 / 2e4 style integers
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _load_parts(name, n_max, sieve_cap):
    if name == "twosquares":
        return twosquares.sieve_membership(max(n_max, 1), cap=sieve_cap)
    if name == "all":
        return range(1, n_max + 1)
    if name.startswith("file:"):
        path = Path(name[5:])
        data = path.read_bytes()
        if data.strip(b"0123456789 \t\r\n"):
            return twosquares.read_bitset(path)
        return exactcount.read_part_file(path)
    raise ValueError(f"unknown part-set {name!r}; use twosquares, all or file:PATH")


def _save_table(table, path):
    if Path(path).suffix.lower() == ".csv":
        exactcount.write_csv(table, path)
    else:
        exactcount.write_binary(table, path)


def _load_table(path):
    if Path(path).suffix.lower() == ".csv":
        return exactcount.read_csv(path, set_id="twosquares")
    return exactcount.read_binary(path)


def _dump_json(obj, out):
    out.write(json.dumps(obj, sort_keys=False))
    out.write("\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_members(args, out):
    table = twosquares.sieve_membership(args.limit, cap=args.cap)
    if args.format == "bits":
        if not args.output:
            raise ValueError("--format bits needs --output PATH")
        twosquares.write_bitset(table, args.output)
    elif args.output:
        twosquares.write_member_list(table, args.output)
    else:
        out.write("".join(f"{ell}\n" for ell in table.members()))


def cmd_count(args, out):
    parts = _load_parts(args.set, args.n, args.sieve_cap)
    set_id = args.set if not args.set.startswith("file:") else "file"
    table = exactcount.partition_counts(args.n, parts, cap=args.cap, set_id=set_id)
    if args.save:
        _save_table(table, args.save)
    out.write(f"{table[args.n]}\n")


_ESTIMATORS = {
    "main": lambda n, l: saddle.main_estimate_log(n, l_extra=l),
    "difference": lambda n, l: saddle.difference_estimate_log(n, l_extra=l),
}


def estimate_record(n, method, l_extra=0.0):
    if method == "simple":
        est = saddle.simple_estimate_log(n)
        sp = saddle.solve_saddle(n, l_extra=l_extra)
    else:
        est = _ESTIMATORS[method](n, l_extra)
        sp = est.saddle
    return {
        "n": n,
        "method": method,
        "log_value": est.log_value,
        "rho": sp.rho,
        "X": sp.X,
        "residual": sp.residual,
    }


def cmd_estimate(args, out):
    _dump_json(estimate_record(args.n, args.method, args.l_extra), out)


def cmd_saddle(args, out):
    sp = saddle.solve_saddle(args.x, l_extra=args.l_extra)
    _dump_json({"x": sp.x, "rho": sp.rho, "X": sp.X, "residual": sp.residual}, out)


def comparison_rows(n_values, table, l_extra=0.0):
    rows = []
    for n in n_values:
        exact = table[n]
        diff = exactcount.difference_exact(n, table)
        main = saddle.main_estimate_log(n, l_extra=l_extra)
        exact_log = math.log(exact)
        rows.append(ComparisonRow(
            n=n,
            exact_log=exact_log,
            main_log=main.log_value,
            simple_log=saddle.simple_estimate_log(n).log_value,
            diff_exact_log=math.log(diff),
            diff_est_log=main.log_value + math.log(main.saddle.u),
            ratio_main=math.exp(exact_log - main.log_value),
        ))
    return rows


def _grid(args):
    if args.n_list:
        values = sorted(set(args.n_list))
    else:
        start, stop = args.range
        if not (args.factor > 1 and start >= 1 and stop >= start):
            raise ValueError("--range needs 1 <= START <= STOP and --factor > 1")
        values = []
        v = float(start)
        while v <= stop * (1 + 1e-12):
            values.append(int(round(v)))
            v *= args.factor
    for n in values:
        if n < saddle.ASYMPTOTIC_MIN_N:
            raise ValueError(f"n below asymptotic regime (n={n})")
    return values


def write_rows(rows, fmt, out):
    if fmt == "json":
        _dump_json([asdict(r) for r in rows], out)
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r.n] + [repr(getattr(r, c)) for c in CSV_COLUMNS[1:]])
    out.write(buf.getvalue())


def read_rows(text, fmt):
    if fmt == "json":
        return [ComparisonRow(**d) for d in json.loads(text)]
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_COLUMNS:
        raise ValueError(f"unexpected header {header}")
    return [ComparisonRow(int(r[0]), *map(float, r[1:])) for r in reader]


def cmd_compare(args, out):
    n_values = _grid(args)
    top = max(n_values) + 1
    if args.table:
        table = _load_table(args.table)
        if table.set_id != "twosquares":
            raise ValueError(f"{args.table}: table was built for set {table.set_id!r}")
        if table.n_max < top:
            raise ValueError(f"{args.table}: table stops at {table.n_max}, need {top}")
    else:
        if top > args.cap:
            raise ResourceCapError(f"n_max {top} exceeds DP cap {args.cap}")
        parts = twosquares.sieve_membership(top)
        table = exactcount.partition_counts(top, parts, cap=args.cap)
    write_rows(comparison_rows(n_values, table, args.l_extra), args.out, out)


def cmd_constant(args, out):
    if not 1 <= args.digits <= MAX_DIGITS:
        raise ValueError(f"digits must lie in 1..{MAX_DIGITS}")
    approx = twosquares.landau_ramanujan_constant(max(10.0 ** -(args.digits + 1), 1e-14))
    # truncate rather than round: the printed digits are digits of K itself
    text = f"{approx.value:.20f}"[: 2 + args.digits]
    if args.out == "json":
        _dump_json({"value": approx.value, "abs_error_bound": approx.abs_error_bound,
                    "terms_used": approx.terms_used, "digits": text}, out)
    else:
        out.write(text + "\n")


def cmd_landau(args, out):
    x = int(args.x)
    if not x > math.e:
        raise ValueError(f"x must exceed e (log x > 1), got {args.x}")
    table = twosquares.sieve_membership(x, cap=args.cap)
    K = twosquares.landau_ramanujan_value()
    count = twosquares.count_members_up_to(table, x)
    ref = twosquares.landau_reference(x, K)
    _dump_json({"x": x, "count": count, "reference": ref, "ratio": count / ref}, out)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="sqpart", description=(
        "Partitions into sums of two squares: exact counts and saddle-point asymptotics."))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("members", help="list sums of two squares up to --limit")
    s.add_argument("--limit", type=_integer, required=True)
    s.add_argument("--format", choices=["text", "bits"], default="text")
    s.add_argument("--output", help="write to file instead of stdout")
    s.add_argument("--cap", type=_integer, default=twosquares.DEFAULT_SIEVE_CAP)
    s.set_defaults(func=cmd_members)

    s = sub.add_parser("count", help="exact number of partitions of N")
    s.add_argument("n", type=_integer)
    s.add_argument("--set", default="twosquares",
                   help="twosquares | all | file:PATH (member list or bitset)")
    s.add_argument("--cap", type=_integer, default=exactcount.DEFAULT_DP_CAP)
    s.add_argument("--sieve-cap", type=_integer, default=twosquares.DEFAULT_SIEVE_CAP)
    s.add_argument("--save", help="save the table (.csv, otherwise binary)")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("estimate", help="asymptotic estimate of p_S(N) as a JSON record")
    s.add_argument("n", type=_integer)
    s.add_argument("--method", choices=["main", "simple", "difference"], default="main")
    s.add_argument("--l-extra", type=float, default=0.0, help="extend the truncation length")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("saddle", help="solve rho Phi'(rho) = x")
    s.add_argument("x", type=_positive_number)
    s.add_argument("--l-extra", type=float, default=0.0)
    s.set_defaults(func=cmd_saddle)

    s = sub.add_parser("compare", help="exact vs asymptotic table")
    grid = s.add_mutually_exclusive_group(required=True)
    grid.add_argument("--n", dest="n_list", type=_integer, nargs="+")
    grid.add_argument("--range", type=_integer, nargs=2, metavar=("START", "STOP"))
    s.add_argument("--factor", type=float, default=2.0)
    s.add_argument("--out", choices=["csv", "json"], default="csv")
    s.add_argument("--cap", type=_integer, default=exactcount.DEFAULT_DP_CAP)
    s.add_argument("--table", help="reuse a table saved by 'count --save'")
    s.add_argument("--l-extra", type=float, default=0.0)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("constant", help="Landau-Ramanujan constant")
    s.add_argument("--digits", type=_integer, default=12)
    s.add_argument("--out", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_constant)

    s = sub.add_parser("landau", help="S(x) against K x / sqrt(log x)")
    s.add_argument("x", type=_integer)
    s.add_argument("--cap", type=_integer, default=twosquares.DEFAULT_SIEVE_CAP)
    s.set_defaults(func=cmd_landau)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except ResourceCapError as exc:
        print(f"sqpart: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NumericalError as exc:
        print(f"sqpart: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, IndexError, OSError) as exc:
        print(f"sqpart: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
