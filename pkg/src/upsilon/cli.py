"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 capacity
cap exceeded.
"""
import argparse
import csv
import io
import json
import math
import resource
import sys
import time
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

from . import analytics, config, master
from .errors import CapacityError, DomainError
from .primecount import build_prime_count_table

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

TREND_COLUMNS = ("claim", "x", "value", "reference", "ratio")
VERIFY_COLUMNS = ("check", "x", "lhs", "rhs", "rel_diff", "pass")
MAJORANT_SLACK = 1e-12
TIMING_FIELDS = frozenset({"wall_time_s", "table_build_s", "identity_s", "direct_s", "peak_rss_mib"})

CLAIM_CHOICES = ("theorem-master", "landau", "chebyshev", "cor1", "cor2", "cor3", "moment")


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    command: str
    x: int
    fields: dict = field(default_factory=dict)


def format_number(value):
    """15 significant digits, printed as the shortest repr of that rounding."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(float(f"{value:.15g}"))
    return str(value)


def _json_value(value):
    if isinstance(value, bool) or isinstance(value, int) or value is None:
        return value
    if isinstance(value, float):
        return None if math.isnan(value) else float(f"{value:.15g}")
    return str(value)


def render(records, fmt="csv"):
    """Serialise records to CSV (header from the first record) or a JSON array."""
    rows = [r.fields for r in records]
    if fmt == "json":
        payload = [{k: _json_value(v) for k, v in row.items()} for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow(["" if v is None else format_number(v) for v in row.values()])
    return buf.getvalue()


def integer(text):
    """argparse type accepting ``1000000`` as well as integral forms like ``1e6``."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        d = Decimal(text)
    except InvalidOperation:
        d = None
    if d is not None and d.is_finite() and d == d.to_integral_value():
        return int(d)
    raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _grid_xs(args, minimum):
    if args.x:
        xs = list(args.x)
    elif args.start is not None and args.stop is not None:
        try:
            xs = list(analytics.EvalGrid(args.start, args.stop, args.points).values)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    else:
        raise UsageError("give --x values or a --from/--to grid")
    bad = [x for x in xs if x < minimum]
    if bad:
        raise UsageError(f"every x must be >= {minimum}, got {bad}")
    return xs


# -- commands ------------------------------------------------------------------


def cmd_eval(n):
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    u = master.upsilon(n)
    return OutputRecord("eval", n, {"n": n, "value": u.value, "kind": u.kind.value, "omega": u.omega})


def cmd_sum(x, method="both", threads=None):
    if x < 0:
        raise UsageError(f"x must be >= 0, got {x}")
    if method in ("direct", "both"):
        config.check_capacity(x, "direct")
    if method in ("identity", "both"):
        config.check_capacity(x, "identity")
    start = time.perf_counter()
    direct = master.sum_upsilon_direct(x, threads=threads) if method != "identity" else None
    identity = master.sum_upsilon_identity(x, threads=threads) if method != "direct" else None
    elapsed = time.perf_counter() - start
    value = direct if direct is not None else identity
    reference = master.loglog_reference(x)
    fields = {"x": x, "method": method, "direct": direct, "identity": identity}
    if direct is not None and identity is not None:
        abs_diff = abs(direct - identity)
        fields["abs_diff"] = abs_diff
        fields["rel_diff"] = abs_diff / max(direct, 1.0)
    fields["reference"] = reference
    fields["ratio"] = value / reference if reference > 0 else math.nan
    fields["wall_time_s"] = elapsed
    return OutputRecord("sum", x, fields)


def _verify_rows(x, threads=None):
    config.check_capacity(x, "direct")
    report = master.verify_identity(x, threads=threads)
    s = report.direct
    rosser = analytics.rosser_identity_check(x)
    decomposition = analytics.cor2_sum(x, threads) + analytics.cor2_integral_remainder(x, threads)
    majorant = analytics.cor1_majorant(x, threads)
    decomp_diff = abs(s - decomposition) / max(abs(s), 1.0)
    major_diff = (s - majorant) / majorant
    rows = [
        ("identity", s, report.identity, report.rel_diff, report.passed),
        ("rosser", rosser.lhs, rosser.rhs, rosser.rel_diff, rosser.passed),
        ("cor2-decomposition", s, decomposition, decomp_diff, decomp_diff <= master.IDENTITY_TOLERANCE),
        ("cor1-majorant", s, majorant, major_diff, major_diff <= MAJORANT_SLACK),
    ]
    return [
        OutputRecord(
            "verify",
            x,
            {"check": c, "x": x, "lhs": float(lhs), "rhs": float(rhs), "rel_diff": d, "pass": bool(ok)},
        )
        for c, lhs, rhs, d, ok in rows
    ]


def cmd_verify(xs, threads=None):
    records = []
    for x in xs:
        if x < 4:
            raise UsageError(f"verify needs x >= 4, got {x}")
        records.extend(_verify_rows(x, threads))
    return records


def cmd_trend(claim, grid, threads=None):
    config.check_capacity(grid.stop, "cor3" if claim == "cor3" else "identity")
    series = analytics.trend_series(claim, grid, threads=threads)
    return [
        OutputRecord(
            "trend",
            row.x,
            {"claim": series.claim, "x": row.x, "value": row.value, "reference": row.reference, "ratio": row.ratio},
        )
        for row in series.rows
    ]


def _peak_rss_mib():
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def cmd_bench(x, threads=None):
    if x < 1000:
        raise UsageError(f"bench needs x >= 1000, got {x}")
    config.check_capacity(x, "identity")
    t0 = time.perf_counter()
    table = build_prime_count_table(x)
    t1 = time.perf_counter()
    identity = master.sum_upsilon_identity(x, threads=threads, table=table)
    t2 = time.perf_counter()
    fields = {"x": x, "table_build_s": t1 - t0, "identity_s": t2 - t1, "identity": identity}
    if x <= config.max_x("direct"):
        t3 = time.perf_counter()
        fields["direct"] = master.sum_upsilon_direct(x, threads=threads)
        fields["direct_s"] = time.perf_counter() - t3
    else:
        fields["direct"] = "skipped"
        fields["direct_s"] = "skipped"
    fields["peak_rss_mib"] = _peak_rss_mib()
    return OutputRecord("bench", x, fields)


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=integer, default=None, help="worker cap (default: all cores)")
    common.add_argument("--out", metavar="FILE", default=None, help="write output here instead of stdout")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--from", dest="start", type=integer)
    grid.add_argument("--to", dest="stop", type=integer)
    grid.add_argument("--points", type=integer, default=10)

    parser = _Parser(prog="upsilon", description="Master function sums and their numerical checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate the master function at n")
    p.add_argument("n", type=integer)

    p = sub.add_parser("sum", parents=[common], help="partial sum up to x")
    p.add_argument("--x", type=integer, required=True)
    p.add_argument("--method", choices=("direct", "identity", "both"), default="both")

    p = sub.add_parser("verify", parents=[common, grid], help="exact identity and proof checks")
    p.add_argument("--x", type=integer, nargs="+")

    p = sub.add_parser("trend", parents=[common, grid], help="ratio table for an asymptotic claim")
    p.add_argument("--claim", choices=CLAIM_CHOICES, required=True)
    p.add_argument("--m", type=integer, default=2, help="power for --claim moment")

    p = sub.add_parser("bench", parents=[common], help="time the summation paths")
    p.add_argument("--x", type=integer, required=True)
    return parser


def _dispatch(args):
    threads = args.threads
    if threads is not None and threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.command == "eval":
        return [cmd_eval(args.n)], EXIT_OK
    if args.command == "sum":
        return [cmd_sum(args.x, args.method, threads)], EXIT_OK
    if args.command == "verify":
        records = cmd_verify(_grid_xs(args, 4), threads)
        ok = all(r.fields["pass"] for r in records)
        return records, EXIT_OK if ok else EXIT_FAILED
    if args.command == "trend":
        if args.start is None or args.stop is None:
            raise UsageError("trend needs --from and --to")
        claim = args.claim
        if claim == "moment":
            if args.m < 1:
                raise UsageError("--m must be >= 1")
            claim = f"moment-{args.m}"
        try:
            grid = analytics.EvalGrid(args.start, args.stop, args.points)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        return cmd_trend(claim, grid, threads), EXIT_OK
    if args.command == "bench":
        return [cmd_bench(args.x, threads)], EXIT_OK
    raise UsageError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        records, code = _dispatch(args)
    except (UsageError, DomainError) as exc:
        print(f"upsilon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"upsilon: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    text = render(records, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def run():
    sys.exit(main())
