"""Benchmark harness: threshold sweeps, scalability sweeps, phase-split timing."""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .dataset import DatasetSpec, TransactionDatabase, generate_synthetic
from .miner import MinerConfig, mine_with_tree, native_policy
from .utility import ThresholdPolicy
from .verifier import VerifyStats, verify

CSV_COLUMNS = ["dataset", "variant", "policy_kind", "policy_value", "min_util",
               "phase1_s", "phase2_ms", "phui_count", "hui_count", "tree_nodes"]

# rough per-candidate footprint: tuple header + frozen dataclass + one slot per item
_CANDIDATE_BYTES = 120
_ITEM_BYTES = 8


@dataclass
class BenchResult:
    dataset: str
    variant: str
    policy_kind: str
    policy_value: float
    min_util: int
    phase1_s: float
    phase2_s: float
    phui_count: int
    hui_count: int
    tree_nodes: int
    containment_tests: int = 0
    peak_candidate_memory_estimate: int = 0

    def row(self) -> dict:
        return {
            "dataset": self.dataset,
            "variant": self.variant,
            "policy_kind": self.policy_kind,
            "policy_value": f"{self.policy_value:g}",
            "min_util": self.min_util,
            "phase1_s": f"{self.phase1_s:.6f}",
            "phase2_ms": f"{self.phase2_s * 1000:.3f}",
            "phui_count": self.phui_count,
            "hui_count": self.hui_count,
            "tree_nodes": self.tree_nodes,
        }


def run_cell(db: TransactionDatabase, label: str, policy: ThresholdPolicy,
             config: MinerConfig, repeat: int = 3) -> BenchResult:
    """Mine and verify ``repeat`` times; durations are the minimum over runs."""
    if repeat < 1:
        raise ValueError("repeat must be >= 1")
    best1 = best2 = float("inf")
    for _ in range(repeat):
        phuis, stats, _tree = mine_with_tree(db, policy, config)
        vstats = VerifyStats()
        t0 = time.perf_counter()
        huis = verify(phuis, db, stats.min_util, vstats)
        t1 = time.perf_counter()
        best1 = min(best1, stats.phase1_s)
        best2 = min(best2, t1 - t0)
    mem = sum(_CANDIDATE_BYTES + _ITEM_BYTES * len(p.itemset) for p in phuis)
    return BenchResult(label, config.variant, policy.kind, float(policy.value), stats.min_util,
                       best1, best2, len(phuis), len(huis), stats.global_tree_nodes,
                       vstats.containment_tests, mem)


def threshold_sweep(db: TransactionDatabase, label: str, fractions: Sequence[float] = (),
                    variants: Sequence[str] = ("upg", "iupg"), base: str | None = None,
                    repeat: int = 3, enable_dlu: bool = True, enable_dln: bool = True,
                    progress=None, min_utils: Sequence[int] = ()) -> list[BenchResult]:
    """One cell per (variant, threshold).

    Thresholds are the ``fractions`` (``base`` None means each variant's native
    base) followed by the absolute ``min_utils``.
    """
    results = []
    for variant in variants:
        config = MinerConfig(variant, enable_dlu, enable_dln)
        policies = [_policy(variant, f, base) for f in fractions]
        policies += [ThresholdPolicy.absolute(m) for m in min_utils]
        for policy in policies:
            res = run_cell(db, label, policy, config, repeat)
            results.append(res)
            if progress:
                progress(res)
    return results


def scalability_sweep(spec: DatasetSpec, sizes: Iterable[int], fraction: float | None = None,
                      variants: Sequence[str] = ("upg", "iupg"), base: str | None = None,
                      repeat: int = 3, progress=None, min_util: int | None = None) -> list[BenchResult]:
    """Run every size with one threshold: a ``fraction`` or a fixed absolute ``min_util``.

    The largest database is generated once; smaller sizes are its prefixes.
    """
    if (fraction is None) == (min_util is None):
        raise ValueError("give exactly one of fraction or min_util")
    sizes = sorted(sizes)
    full = generate_synthetic(replace(spec, num_transactions=sizes[-1]))
    results = []
    for d in sizes:
        db = TransactionDatabase(full.transactions[:d], full.utilities)
        label = replace(spec, num_transactions=d).label
        for variant in variants:
            if min_util is not None:
                policy = ThresholdPolicy.absolute(min_util)
            else:
                policy = _policy(variant, fraction, base)
            res = run_cell(db, label, policy, MinerConfig(variant), repeat)
            results.append(res)
            if progress:
                progress(res)
    return results


def _policy(variant: str, fraction: float, base: str | None) -> ThresholdPolicy:
    if base is None:
        return native_policy(variant, fraction)
    if base == "mtwu":
        return ThresholdPolicy.of_mtwu(fraction)
    if base == "total":
        return ThresholdPolicy.of_total(fraction)
    raise ValueError(f"unknown threshold base {base!r}")


def write_csv(results: Iterable[BenchResult], path, metadata: dict | None = None) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in results:
            writer.writerow(r.row())
    if metadata:
        meta_path = path.with_name(path.name + ".meta.json")
        meta_path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n")


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def parse_sweep(text: str) -> list[float]:
    """``60:90:5`` (percent range, inclusive) or ``0.6,0.7`` / ``60,70`` lists."""
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"bad sweep range {text!r}; expected start:stop:step")
        start, stop, step = parts
        values = []
        k = 0
        while start + k * step <= stop + 1e-9:
            values.append(round(start + k * step, 10))
            k += 1
    else:
        values = [float(x) for x in text.split(",") if x.strip()]
    if not values:
        raise ValueError("empty sweep")
    # ranges are always percentages; a list is percentages if any entry exceeds 1
    if ":" in text or any(v > 1 for v in values):
        values = [v / 100 for v in values]
    if any(v < 0 or v > 1 for v in values):
        raise ValueError(f"sweep values must lie in [0, 100] percent: {text!r}")
    return values

