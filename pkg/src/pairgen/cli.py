"""Command-line front end.

Every subcommand reads bundled or user-supplied data, computes with exact
arithmetic, and emits one table to stdout (or ``--out``) as CSV or JSON
with identical fields either way.  Reruns with the same inputs and seed
are byte-identical.  Exit status: 0 on success, 1 when the computation
rejects its input (missing file, integrity failure, enumeration limit),
2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io as _stringio
import json
import sys
from fractions import Fraction
from pathlib import Path

from .census import DEFAULT_ENUM_LIMIT, conjugacy_classes, order_census
from .chartab import cmc, cmc_scan, phi_divisibility, validate
from .genprob import gen_probability
from .io import ReportRow, ReportTable, data_path, decimal5, \
    load_bundle, load_character_table
from .maxbound import lower_bound, subgroup_census
from .perm import build_chain
from .wordprog import evaluate, parse_program

__all__ = ["main"]

# domain failures turn into exit status 1; anything else is a real bug
_DOMAIN_ERRORS = (ValueError, RuntimeError, OSError)


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {value} outside 0..2^64-1")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive count, got {value}")
    return value


def _table_path(source: str) -> Path:
    """Character-table argument: explicit path, or bundled fixture name."""
    path = Path(source)
    if path.exists():
        return path
    bundled = data_path("chartab", f"{source}.json")
    return bundled if bundled.exists() else path


def _program_path(source: str) -> Path:
    """Word-program argument: explicit path, or bundled corpus name."""
    path = Path(source)
    if path.exists():
        return path
    bundled = data_path("wordprog", f"{source}.w")
    return bundled if bundled.exists() else path


def _emit(fieldnames: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"rows": rows}, indent=2) + "\n"
    buf = _stringio.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns the full output text.
# ---------------------------------------------------------------------------

def _cmd_census(args) -> str:
    bundle = load_bundle(args.bundle)
    chain = bundle.build(seed=args.seed)
    census = order_census(chain, limit=args.limit, threads=args.threads)
    rows = [{"order": r, "count": str(census.counts[r])}
            for r in sorted(census.counts)]
    return _emit(["order", "count"], rows, args.format)


def _cmd_genprob(args) -> str:
    bundle = load_bundle(args.bundle)
    chain = bundle.build(seed=args.seed)
    classes = conjugacy_classes(chain, limit=args.limit)
    result = gen_probability(chain, classes, args.r, args.s,
                             seed=args.seed, threads=args.threads,
                             limit=args.limit, checkpoint=args.checkpoint)
    rows = [{"group": bundle.name, "r": args.r, "s": args.s,
             "generating": str(result.generating_pairs),
             "total": str(result.total_pairs),
             "value": str(result.probability),
             "decimal5": result.decimal5}]
    return _emit(["group", "r", "s", "generating", "total", "value",
                  "decimal5"], rows, args.format)


def _cmd_bound(args) -> str:
    bundle = load_bundle(args.bundle)
    if not bundle.maximals:
        raise ValueError(
            f"bundle {bundle.name!r} carries no maximal-subgroup records")
    chain = bundle.build(seed=args.seed)
    group_census = order_census(chain, limit=args.limit,
                                threads=args.threads)
    pairs = [(rec, subgroup_census(rec, chain, limit=args.limit,
                                   threads=args.threads))
             for rec in bundle.maximals]
    result = lower_bound(group_census, pairs, args.p)
    rows = [{"group": bundle.name, "p": args.p,
             "value": str(result.bound),
             "decimal5": decimal5(result.bound),
             "informative": "true" if result.informative else "false"}]
    return _emit(["group", "p", "value", "decimal5", "informative"],
                 rows, args.format)


def _cmd_cmc(args) -> str:
    table = load_character_table(_table_path(args.table))
    value = cmc(table, args.i, args.j, args.k)
    names = [table.classes[idx - 1].name for idx in (args.i, args.j, args.k)]
    rows = [{"i": args.i, "j": args.j, "k": args.k,
             "classes": "*".join(names[:2]) + "->" + names[2],
             "value": str(value)}]
    return _emit(["i", "j", "k", "classes", "value"], rows, args.format)


def _cmd_cmc_scan(args) -> str:
    table = load_character_table(_table_path(args.table))
    report = cmc_scan(table, args.i, args.k)
    rows = [{"j": j, "class": table.classes[j - 1].name,
             "value": str(value)}
            for j, value in enumerate(report.values, 1)]
    return _emit(["j", "class", "value"], rows, args.format)


def _cmd_orthocheck(args) -> str:
    # loading already validates; re-validate for the explicit report
    table = load_character_table(_table_path(args.table))
    report = validate(table)
    if not report.ok:
        raise ValueError(f"character table failed validation:\n{report}")
    rows = [{"classes": table.n_classes(),
             "group_order": str(table.group_order), "ok": "true"}]
    return _emit(["classes", "group_order", "ok"], rows, args.format)


def _cmd_slp_run(args) -> str:
    program = parse_program(_program_path(args.program).read_text())
    bundle = load_bundle(args.bundle)
    if len(bundle.generators) != 2:
        raise ValueError(
            f"bundle {bundle.name!r} has {len(bundle.generators)} "
            f"generators; word programs run on a standard pair (x, y)")
    x, y = bundle.generators
    emitted = evaluate(program, x, y)
    rows = []
    for pos, ((a, b), regs) in enumerate(zip(emitted, program.emissions)):
        sub = build_chain([a, b], seed=args.seed)
        rows.append({"emission": pos,
                     "registers": f"w{regs[0]},w{regs[1]}",
                     "order": str(sub.group_order)})
    return _emit(["emission", "registers", "order"], rows, args.format)


def _cmd_phi_filter(args) -> str:
    hits = phi_divisibility(args.p, args.q, args.N)
    rows = [{"n": n} for n in sorted(hits)]
    return _emit(["n"], rows, args.format)


def _cmd_report_table1(args) -> str:
    rows = []
    for source in args.bundles:
        bundle = load_bundle(source)
        chain = bundle.build(seed=args.seed)
        classes = conjugacy_classes(chain, limit=args.limit)
        primes = sorted({c.order for c in classes.classes
                         if c.order > 2 and _is_prime(c.order)})
        for p in primes:
            result = gen_probability(chain, classes, 2, p,
                                     seed=args.seed, threads=args.threads,
                                     limit=args.limit)
            rows.append(ReportRow.make(bundle.name, p, result.probability,
                                       kind="exact"))
    table = ReportTable(rows=tuple(rows))
    return table.to_json() if args.format == "json" else table.to_csv()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Parser assembly and entry point.
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=0,
                        help="PRNG seed (u64); reruns are byte-identical")
    common.add_argument("--limit", type=_positive, default=DEFAULT_ENUM_LIMIT,
                        help="refuse enumerations beyond this many elements")
    common.add_argument("--threads", type=_positive, default=1,
                        help="worker count for scans and censuses")
    common.add_argument("--out", type=Path, default=None,
                        help="write the report here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="report format (default csv)")

    parser = argparse.ArgumentParser(
        prog="pairgen",
        description="Exact pair-generation analytics for permutation groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common],
                       help="element-order census of a bundled group")
    p.add_argument("bundle")
    p.set_defaults(handler=_cmd_census)

    p = sub.add_parser("genprob", parents=[common],
                       help="exact probability that an (r, s) pair generates")
    p.add_argument("bundle")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--checkpoint", type=Path, default=None,
                   help="resumable scan state file")
    p.set_defaults(handler=_cmd_genprob)

    p = sub.add_parser("bound", parents=[common],
                       help="maximal-subgroup lower bound on P(2, p)")
    p.add_argument("bundle")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("cmc", parents=[common],
                       help="class multiplication coefficient a_ijk")
    p.add_argument("table")
    p.add_argument("-i", type=int, required=True)
    p.add_argument("-j", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(handler=_cmd_cmc)

    p = sub.add_parser("cmc-scan", parents=[common],
                       help="a_ijk for fixed i, k across every middle class j")
    p.add_argument("table")
    p.add_argument("-i", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(handler=_cmd_cmc_scan)

    p = sub.add_parser("orthocheck", parents=[common],
                       help="exact orthogonality validation of a table")
    p.add_argument("table")
    p.set_defaults(handler=_cmd_orthocheck)

    p = sub.add_parser("slp", help="word-program operations")
    slp_sub = p.add_subparsers(dest="slp_command", required=True)
    run = slp_sub.add_parser("run", parents=[common],
                             help="evaluate a word program over a bundle's "
                                  "standard generators")
    run.add_argument("program")
    run.add_argument("bundle")
    run.set_defaults(handler=_cmd_slp_run)

    p = sub.add_parser("phi-filter", parents=[common],
                       help="n <= N with p dividing the nth cyclotomic "
                            "polynomial value at q")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("-N", type=int, required=True)
    p.set_defaults(handler=_cmd_phi_filter)

    p = sub.add_parser("report", help="multi-group report tables")
    rep_sub = p.add_subparsers(dest="report_command", required=True)
    t1 = rep_sub.add_parser("table1", parents=[common],
                            help="exact P(2, p) for every odd prime class "
                                 "order, per bundle")
    t1.add_argument("bundles", nargs="+")
    t1.set_defaults(handler=_cmd_report_table1)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = args.handler(args)
    except _DOMAIN_ERRORS as exc:
        print(f"pairgen: error: {exc}", file=sys.stderr)
        return 1
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
