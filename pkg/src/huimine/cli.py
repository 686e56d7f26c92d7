"""Command line: ``huimine mine|generate|bench|compare``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

from . import bench
from .dataset import DatabaseFormatError, DatasetSpec, generate_synthetic, load_database, load_fimi, save_database
from .miner import MinerConfig, mine, native_policy
from .oracle import OracleLimitError, brute_force_huis, check_guard
from .utility import ThresholdPolicy
from .verifier import VerifyStats, format_huis, verify

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_input(p):
    p.add_argument("--db", help="transactions file")
    p.add_argument("--utils", help="utility table file")
    p.add_argument("--fimi", help="FIMI itemset file; utilities are synthesized (seeded by --seed)")
    p.add_argument("--seed", type=int, default=0)


def _add_policy(p, sweep=False):
    if sweep:
        p.add_argument("--sweep", default="60:90:5",
                       help="threshold percentages start:stop:step or a comma list (default 60:90:5)")
    else:
        p.add_argument("--min-util", type=int, help="absolute utility threshold")
        p.add_argument("--threshold", type=float, help="fractional threshold in [0, 1]")
    p.add_argument("--base", choices=["total", "mtwu"],
                   help="threshold base (default: total for upg, mtwu for iupg)")


def _add_strategies(p):
    p.add_argument("--no-dlu", action="store_true", help="skip the DLU path-utility discount")
    p.add_argument("--no-dln", action="store_true", help="skip the DLN node-utility discount")


def _add_generator(p, default_d=10_000):
    p.add_argument("--T", type=float, default=10.0, help="average transaction size")
    p.add_argument("--I", type=float, default=6.0, help="average potential pattern size")
    p.add_argument("--D", type=int, default=default_d, help="number of transactions")
    p.add_argument("--N", type=int, default=1000, help="number of distinct items")
    p.add_argument("--max-qty", type=int, default=5)
    p.add_argument("--max-util", type=int, default=10)
    p.add_argument("--utility-dist", choices=["uniform", "lognormal"], default="uniform")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="huimine", description="High-utility itemset mining with UP-Growth / IUPG")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mine", help="mine high-utility itemsets")
    _add_input(p)
    _add_policy(p)
    _add_strategies(p)
    p.add_argument("--variant", choices=["upg", "iupg"], default="upg")
    p.add_argument("--out", help="HUI output file (default: stdout)")

    p = sub.add_parser("generate", help="write a synthetic T/I/D/N database")
    _add_generator(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--db", required=True, help="transactions output file")
    p.add_argument("--utils", required=True, help="utility table output file")

    p = sub.add_parser("bench", help="threshold or scalability sweep with phase-split timing")
    _add_input(p)
    _add_policy(p, sweep=True)
    _add_strategies(p)
    p.add_argument("--variant", choices=["upg", "iupg", "both"], default="both")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--csv", required=True, help="CSV output file")
    p.add_argument("--label", help="dataset label for CSV rows")
    p.add_argument("--min-util", type=int, action="append",
                   help="absolute threshold (repeatable); replaces --sweep")
    p.add_argument("--scalability", help="comma list of database sizes, e.g. 1000,5000,10000,25000,50000;"
                                         " databases are generated from the generator flags")
    _add_generator(p)

    p = sub.add_parser("compare", help="cross-check the pipeline against the brute-force oracle")
    _add_input(p)
    _add_policy(p)
    _add_strategies(p)
    p.add_argument("--variant", choices=["upg", "iupg"], default="upg")
    return parser


def _load(args):
    if args.fimi:
        if args.db or args.utils:
            raise UsageError("--fimi excludes --db/--utils")
        return load_fimi(args.fimi, seed=args.seed)
    if not args.db or not args.utils:
        raise UsageError("--db and --utils are required (or --fimi)")
    for path in (args.db, args.utils):
        if not Path(path).is_file():
            raise FileNotFoundError(f"no such file: {path}")
    return load_database(args.db, args.utils)


def _policy(args) -> ThresholdPolicy:
    if (args.min_util is None) == (args.threshold is None):
        raise UsageError("give exactly one of --min-util or --threshold")
    if args.min_util is not None:
        if args.base:
            raise UsageError("--base only applies to --threshold")
        if args.min_util < 0:
            raise UsageError("--min-util must be non-negative")
        return ThresholdPolicy.absolute(args.min_util)
    if not 0 <= args.threshold <= 1:
        raise UsageError("--threshold must lie in [0, 1]")
    if args.base == "mtwu":
        return ThresholdPolicy.of_mtwu(args.threshold)
    if args.base == "total":
        return ThresholdPolicy.of_total(args.threshold)
    return native_policy(args.variant, args.threshold)


def _config(args, variant=None) -> MinerConfig:
    return MinerConfig(variant or args.variant, not args.no_dlu, not args.no_dln)


def _spec(args, d=None) -> DatasetSpec:
    return DatasetSpec(args.T, args.I, args.D if d is None else d, args.N, args.max_qty,
                       args.max_util, args.seed, utility_distribution=args.utility_dist)


def cmd_mine(args) -> int:
    db = _load(args)
    policy = _policy(args)
    phuis, stats = mine(db, policy, _config(args))
    vstats = VerifyStats()
    huis = verify(phuis, db, stats.min_util, vstats)
    text = format_huis(huis)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"variant={args.variant} policy={policy.describe()} min_util={stats.min_util} "
          f"transactions={len(db)} promising={stats.promising_items} tree_nodes={stats.global_tree_nodes} "
          f"phuis={len(phuis)} huis={len(huis)} phase1_s={stats.phase1_s:.4f}",
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = _spec(args)
    db = generate_synthetic(spec)
    save_database(db, args.db, args.utils)
    mean = sum(len(t) for t in db) / len(db) if len(db) else 0.0
    print(f"{spec.label}: D={len(db)} N={spec.num_items} mean_length={mean:.3f} "
          f"distinct_used={len(db.present_items())}")
    return EXIT_OK


def _progress(res):
    print(f"{res.dataset} {res.variant} {res.policy_kind}={res.policy_value:g} min_util={res.min_util} "
          f"phase1={res.phase1_s:.3f}s phase2={res.phase2_s * 1000:.2f}ms "
          f"phuis={res.phui_count} huis={res.hui_count} nodes={res.tree_nodes}", file=sys.stderr)


def cmd_bench(args) -> int:
    variants = ("upg", "iupg") if args.variant == "both" else (args.variant,)
    min_utils = args.min_util or []
    if any(m < 0 for m in min_utils):
        raise UsageError("--min-util must be non-negative")
    if min_utils and args.base:
        raise UsageError("--base only applies to --sweep")
    fractions = [] if min_utils else bench.parse_sweep(args.sweep)
    metadata = {"variants": list(variants), "repeat": args.repeat, "base": args.base or "native",
                "dlu": not args.no_dlu, "dln": not args.no_dln}
    if args.scalability:
        sizes = [int(x) for x in args.scalability.split(",") if x.strip()]
        if len(fractions) + len(min_utils) != 1:
            raise UsageError("a scalability sweep takes a single threshold")
        if args.no_dlu or args.no_dln:
            raise UsageError("--no-dlu/--no-dln are not supported with --scalability")
        spec = _spec(args)
        results = bench.scalability_sweep(spec, sizes, fractions[0] if fractions else None, variants,
                                          args.base, args.repeat, _progress,
                                          min_utils[0] if min_utils else None)
        metadata.update(source="synthetic", generator=asdict(spec), sizes=sizes)
    else:
        db = _load(args)
        label = args.label or Path(args.fimi or args.db).stem
        results = bench.threshold_sweep(db, label, fractions, variants, args.base, args.repeat,
                                        not args.no_dlu, not args.no_dln, _progress, min_utils)
        if args.fimi:
            metadata.update(source="fimi", path=args.fimi,
                            utility_synthesis="quantities=1; external utilities uniform [1,10]",
                            utility_seed=args.seed)
        else:
            metadata.update(source="files", db=args.db, utils=args.utils)
    bench.write_csv(results, args.csv, metadata)
    print(f"wrote {len(results)} rows to {args.csv}")
    return EXIT_OK


def compare_results(pipeline, oracle) -> list[str]:
    """Human-readable differences between two HUI lists; empty when equal."""
    got = {h.itemset: h.utility for h in pipeline}
    want = {h.itemset: h.utility for h in oracle}
    diffs = []
    for x in sorted(want.keys() - got.keys()):
        diffs.append(f"missing {' '.join(map(str, x))} (oracle utility {want[x]})")
    for x in sorted(got.keys() - want.keys()):
        diffs.append(f"extra {' '.join(map(str, x))} (pipeline utility {got[x]})")
    for x in sorted(got.keys() & want.keys()):
        if got[x] != want[x]:
            diffs.append(f"utility {' '.join(map(str, x))}: pipeline {got[x]} oracle {want[x]}")
    return diffs


def cmd_compare(args, corrupt=None) -> int:
    """``corrupt`` is a test hook applied to the Phase-I candidates before verification."""
    db = _load(args)
    policy = _policy(args)
    check_guard(db)
    phuis, stats = mine(db, policy, _config(args))
    if corrupt is not None:
        phuis = corrupt(phuis)
    huis = verify(phuis, db, stats.min_util)
    expected = brute_force_huis(db, stats.min_util)
    diffs = compare_results(huis, expected)
    if diffs:
        print(f"FAIL min_util={stats.min_util}: {len(diffs)} difference(s)")
        for d in diffs:
            print(f"  {d}")
        return EXIT_MISMATCH
    print(f"PASS min_util={stats.min_util}: {len(huis)} HUIs match the oracle")
    return EXIT_OK


COMMANDS = {"mine": cmd_mine, "generate": cmd_generate, "bench": cmd_bench, "compare": cmd_compare}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DatabaseFormatError) as exc:
        print(f"huimine {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, OracleLimitError, ValueError) as exc:
        print(f"huimine {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
