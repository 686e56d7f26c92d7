"""Phase I: recursive UP-Growth over the global UP-Tree, in UPG and IUPG flavours."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping

from .dataset import TransactionDatabase
from .utility import ThresholdPolicy, compute_miu, compute_twu, resolve_threshold
from .uptree import PathEntry, UpTree, build_global_tree, extract_cpb, reorganize

VARIANTS = ("upg", "iupg")


@dataclass(frozen=True)
class Phui:
    itemset: tuple[int, ...]    # ascending item ids
    estimated_utility: int


@dataclass(frozen=True)
class MinerConfig:
    variant: str = "upg"
    enable_dlu: bool = True
    enable_dln: bool = True

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass
class MinerStats:
    min_util: int = 0
    promising_items: int = 0
    reorganized_transactions: int = 0
    global_tree_nodes: int = 0
    local_trees: int = 0
    local_tree_nodes: int = 0
    phui_count: int = 0
    scan_s: float = 0.0
    tree_s: float = 0.0
    growth_s: float = 0.0

    @property
    def phase1_s(self) -> float:
        return self.scan_s + self.tree_s + self.growth_s


def build_local_tree(cpb: list[PathEntry], miu: Mapping[int, int], min_util: int,
                     enable_dlu: bool = True, enable_dln: bool = True) -> UpTree:
    """Local UP-Tree over a conditional pattern base.

    Items whose local TWU (sum of utilities of the paths holding them) falls
    below ``min_util`` are removed; with DLU the path utility is reduced by
    ``miu(item) * path_count`` per removed item.  With DLN a node's increment
    excludes ``miu * path_count`` of every item below it on the path.
    """
    local_twu: dict[int, int] = {}
    for path in cpb:
        for item in path.prefix_items:
            local_twu[item] = local_twu.get(item, 0) + path.path_utility
    promising = {i: u for i, u in local_twu.items() if u >= min_util}
    tree = UpTree(promising)
    rank = tree.rank
    for path in cpb:
        kept = []
        pu = path.path_utility
        for item in path.prefix_items:
            if item in rank:
                kept.append(item)
            elif enable_dlu:
                pu -= miu[item] * path.path_count
        if not kept:
            continue
        pu = max(pu, 0)
        kept.sort(key=rank.__getitem__)
        if enable_dln:
            increments = [0] * len(kept)
            below = 0
            for k in range(len(kept) - 1, -1, -1):
                increments[k] = max(pu - below, 0)
                below += miu[kept[k]] * path.path_count
        else:
            increments = [pu] * len(kept)
        tree.insert(kept, increments, path.path_count)
    tree.prune_header()
    return tree


def _grow(tree: UpTree, suffix: tuple[int, ...], miu, min_util: int, config: MinerConfig,
          out: list[Phui], stats: MinerStats) -> None:
    for item in reversed(tree.order):
        estimate = tree.header[item].utility
        if estimate < min_util:
            continue
        itemset = tuple(sorted(suffix + (item,)))
        out.append(Phui(itemset, estimate))
        local = build_local_tree(extract_cpb(tree, item), miu, min_util,
                                 config.enable_dlu, config.enable_dln)
        if local.is_empty():
            continue
        stats.local_trees += 1
        stats.local_tree_nodes += local.node_count
        _grow(local, suffix + (item,), miu, min_util, config, out, stats)


def native_policy(variant: str, fraction) -> ThresholdPolicy:
    """Fractional threshold in the variant's own base: total utility for UPG, MTWU for IUPG."""
    if variant == "iupg":
        return ThresholdPolicy.of_mtwu(fraction)
    return ThresholdPolicy.of_total(fraction)


def mine_with_tree(db: TransactionDatabase, policy: ThresholdPolicy,
                   config: MinerConfig = MinerConfig()) -> tuple[list[Phui], MinerStats, UpTree]:
    stats = MinerStats()
    t0 = time.perf_counter()
    twu = compute_twu(db)
    miu = compute_miu(db)
    min_util = resolve_threshold(policy, db, twu)
    stats.min_util = min_util
    promising = {i: u for i, u in twu.items() if u >= min_util}
    stats.promising_items = len(promising)
    t1 = time.perf_counter()
    reorg = reorganize(db, twu, min_util)
    stats.reorganized_transactions = len(reorg)
    tree = build_global_tree(reorg, promising)
    stats.global_tree_nodes = tree.node_count
    t2 = time.perf_counter()
    phuis: list[Phui] = []
    _grow(tree, (), miu, min_util, config, phuis, stats)
    stats.phui_count = len(phuis)
    t3 = time.perf_counter()
    stats.scan_s, stats.tree_s, stats.growth_s = t1 - t0, t2 - t1, t3 - t2
    return phuis, stats, tree


def mine(db: TransactionDatabase, policy: ThresholdPolicy,
         config: MinerConfig = MinerConfig()) -> tuple[list[Phui], MinerStats]:
    phuis, stats, _ = mine_with_tree(db, policy, config)
    return phuis, stats
