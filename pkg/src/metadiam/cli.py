"""Command line front end.

Subcommands: ``weight`` (coverage weights, with a persistent record cache),
``diameter`` (exact BFS diameters and norm tables), ``table`` (recompute the
golden tables, optionally checking them), and ``verify`` (property sweeps).

Exit codes: 0 success, 1 usage or validation error, 2 a checked statement
was violated (counterexample found, including golden mismatches), 3 a
resource budget was exceeded.  All numeric output is plain decimal; JSON
objects carry a schema_version field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .coverage import (
    BudgetExceeded,
    ExponentSeq,
    SearchTruncated,
    WeightCache,
    WeightRecord,
    full_weight,
    level_weight,
    seq_label,
    sequence_weight,
)
from .metacyclic import SplitGroup, StateBudgetExceeded, norm_table
from .residue import build_context
from .sweeps import (
    SWEEP_NAMES,
    sweep_diameter_bounds,
    sweep_general_quotient,
    sweep_reductions,
    sweep_weight_properties,
)
from .tables import (
    TABLE_NAMES,
    check_completion_table,
    check_split_table,
    completion_table_csv,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_BUDGET = 3


def _default_cache_path() -> str:
    env = os.environ.get("METACYCLIC_CACHE")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "metadiam", "weights.jsonl")


def _emit(obj: dict, out=None) -> None:
    obj = {"schema_version": SCHEMA_VERSION, **obj}
    print(json.dumps(obj, separators=(", ", ": ")), file=out or sys.stdout)


def cmd_weight(args) -> int:
    ctx = build_context(args.n, args.k)
    if args.seq is not None:
        entries = tuple(int(x) for x in args.seq.split(","))
        label = seq_label(entries)
        mode = "seq"
    elif args.level is not None:
        label = f"level:{args.level}"
        mode = "level"
    else:
        label = "alpha"
        mode = "alpha"

    cache = None if args.no_cache else WeightCache(args.cache)
    t0 = time.time()
    rec = cache.get(ctx, label) if cache is not None else None
    if rec is None:
        if mode == "seq":
            seq = ExponentSeq(ctx.alpha, entries)
            weight, witness = sequence_weight(ctx, seq)
            stored_seq = seq.entries
        elif mode == "level":
            weight, seq, witness = level_weight(ctx, args.level)
            stored_seq = seq.entries
        else:
            weight, witness = full_weight(ctx)
            stored_seq = tuple(range(ctx.alpha - 1, -1, -1))
        rec = WeightRecord(
            n=ctx.n, k=ctx.k, label=label, weight=weight,
            witness=witness, sequence=stored_seq,
        )
        if cache is not None:
            cache.put(rec)
    _emit({
        "n": ctx.n,
        "k": ctx.k,
        "alpha": ctx.alpha,
        "mode": mode,
        "sequence": list(rec.sequence),
        "weight": rec.weight,
        "witness": list(rec.witness),
        "elapsed": round(time.time() - t0, 6),
    })
    return EXIT_OK


def cmd_diameter(args) -> int:
    group = SplitGroup(args.m, args.n, args.k)
    table = norm_table(group, max_states=args.max_states)
    if args.norms:
        with open(args.norms, "w", encoding="utf-8") as fh:
            table.write_csv(fh)
    _emit({"m": args.m, "n": args.n, "k": args.k, "diameter": table.diameter})
    return EXIT_OK


def _split_table_text(which: str, jobs: int) -> str:
    import io

    from .tables import GOLDEN_ROWS_1MOD4, GOLDEN_ROWS_3MOD4, compute_split_row

    golden = GOLDEN_ROWS_1MOD4 if which == "primes-1mod4" else GOLDEN_ROWS_3MOD4
    keys = [(m, n, k) for m, n, k, *_ in golden]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_worker, keys))
    else:
        rows = [compute_split_row(*key) for key in keys]
    buf = io.StringIO()
    import csv

    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "n", "k", "wt", "lambda", "diam", "bound"])
    for row in rows:
        writer.writerow([
            row.m, row.n, row.k, row.weight,
            " ".join(str(x) for x in row.witness),
            row.diameter, row.bound,
        ])
    return buf.getvalue()


def _row_worker(key):
    from .tables import compute_split_row

    return compute_split_row(*key)


def cmd_table(args) -> int:
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        if args.which == "omega-example":
            completion_table_csv(out)
            problems = check_completion_table() if args.check else []
        else:
            out.write(_split_table_text(args.which, args.jobs))
            problems = check_split_table(args.which) if args.check else []
    finally:
        if args.output:
            out.close()
    if problems:
        for p in problems:
            print(f"golden mismatch: {p}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _verify_chunk(suite: str, args_dict: dict, ns: list[int]):
    if suite == "props":
        return sweep_weight_properties(
            max_n=args_dict["max_n"], alpha_max=args_dict["alpha_max"], ns=ns
        )
    if suite == "bounds":
        rep = sweep_diameter_bounds(
            max_n=args_dict["max_n"], max_m=args_dict["max_m"], ns=ns
        )
        rep.merge(sweep_general_quotient(max_n=args_dict["max_n"], ns=ns))
        return rep
    return sweep_reductions(
        max_n=args_dict["max_n"],
        max_m=args_dict["max_m"],
        alpha_max=args_dict["alpha_max"],
        sum_trials=0,
        ns=ns,
    )


def cmd_verify(args) -> int:
    from .sweeps import SweepReport, _random_formal_sums
    import random

    moduli = list(range(3, args.max_n + 1))
    args_dict = {"max_n": args.max_n, "max_m": args.max_m, "alpha_max": args.alpha_max}
    report = SweepReport(args.suite)
    if args.suite == "reductions" and args.sum_trials:
        report.merge(_random_formal_sums(random.Random(20240601), args.sum_trials))
    if args.jobs > 1:
        # shard the moduli round-robin; merge in input order for determinism
        chunks = [moduli[j :: args.jobs] for j in range(args.jobs)]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            parts = list(pool.map(_verify_worker, [(args.suite, args_dict, c) for c in chunks]))
        for part in parts:
            report.merge(part)
    else:
        report.merge(_verify_chunk(args.suite, args_dict, moduli))
    if args.output and report.rows:
        with open(args.output, "w", encoding="utf-8") as fh:
            report.write_rows_csv(fh)
    print(report.summary())
    for f in report.flags:
        print(f"flagged (conjecture counterexample): {f}")
    for v in report.violations:
        print(f"violation: {v}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _verify_worker(job):
    suite, args_dict, ns = job
    return _verify_chunk(suite, args_dict, ns)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metadiam",
        description="Exact diameters and coverage weights of split metacyclic groups.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--config", default=None, metavar="FILE",
        help="JSON file of option defaults (underscored flag names as keys); "
             "accepted before or after the subcommand",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weight", help="minimal coverage weight for a unit mod n")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--k", type=int, required=True)
    mode = w.add_mutually_exclusive_group(required=True)
    mode.add_argument("--seq", help="comma separated exponents, e.g. 3,1,0")
    mode.add_argument("--level", type=int, help="minimize over sequences of this length")
    mode.add_argument("--alpha", action="store_true",
                      help="weight of the complete descending sequence")
    w.add_argument("--cache", default=_default_cache_path(),
                   help="weight record cache path (env METACYCLIC_CACHE overrides default)")
    w.add_argument("--no-cache", action="store_true")
    w.set_defaults(fn=cmd_weight)

    d = sub.add_parser("diameter", help="exact Cayley graph diameter by BFS")
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--norms", metavar="PATH", help="also write the full norm table CSV")
    d.add_argument("--max-states", type=int, default=10**6)
    d.set_defaults(fn=cmd_diameter)

    t = sub.add_parser("table", help="recompute a published table as CSV")
    t.add_argument("--which", choices=TABLE_NAMES, required=True)
    t.add_argument("--check", action="store_true",
                   help="compare against embedded golden values")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("-o", "--output", help="write CSV here instead of stdout")
    t.set_defaults(fn=cmd_table)

    v = sub.add_parser("verify", help="run a property sweep")
    v.add_argument("--suite", choices=SWEEP_NAMES, required=True)
    v.add_argument("--max-n", type=int, default=40)
    v.add_argument("--max-m", type=int, default=40)
    v.add_argument("--alpha-max", type=int, default=12)
    v.add_argument("--sum-trials", type=int, default=10_000)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("-o", "--output", metavar="PATH",
                   help="write per-tuple sweep rows as CSV (bounds suite)")
    v.set_defaults(fn=cmd_verify)
    return parser


def _extract_config(argv: list[str]) -> tuple[str | None, list[str]]:
    """Pull ``--config FILE`` out of argv; it may appear anywhere."""
    out = []
    cfg = None
    j = 0
    while j < len(argv):
        a = argv[j]
        if a == "--config" and j + 1 < len(argv):
            cfg = argv[j + 1]
            j += 2
            continue
        if a.startswith("--config="):
            cfg = a.split("=", 1)[1]
            j += 1
            continue
        out.append(a)
        j += 1
    return cfg, out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    cfg, argv = _extract_config(argv)
    if cfg:
        try:
            with open(cfg, encoding="utf-8") as fh:
                parser.set_defaults(**json.load(fh))
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            print(f"error: bad config file: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses status 2 for usage errors; keep 2 reserved for
        # counterexamples and report usage problems as 1
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.fn(args)
    except (BudgetExceeded, StateBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SearchTruncated as exc:
        print(f"error: search truncated: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
