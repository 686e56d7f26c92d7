"""Phase II: exact utilities of candidate itemsets."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dataset import TransactionDatabase


@dataclass(frozen=True)
class Hui:
    itemset: tuple[int, ...]
    utility: int


@dataclass
class VerifyStats:
    candidates: int = 0
    containment_tests: int = 0


def sort_huis(huis: Iterable[Hui]) -> list[Hui]:
    return sorted(huis, key=lambda h: (-h.utility, h.itemset))


def verify(phuis, db: TransactionDatabase, min_util: int,
           stats: VerifyStats | None = None) -> list[Hui]:
    """Keep candidates whose exact utility reaches ``min_util``.

    One pass over the database.  Each candidate is filed under its rarest
    item, so a transaction is only tested against candidates whose rarest
    item it contains.
    """
    itemsets = sorted({tuple(sorted(getattr(p, "itemset", p))) for p in phuis})
    if stats is None:
        stats = VerifyStats()
    stats.candidates = len(itemsets)
    if not itemsets:
        return []

    support: dict[int, int] = {}
    for t in db:
        for item, _ in t.entries:
            support[item] = support.get(item, 0) + 1

    by_item: dict[int, list[int]] = {}
    for k, itemset in enumerate(itemsets):
        if any(i not in support for i in itemset):
            continue
        rarest = min(itemset, key=lambda i: (support[i], i))
        by_item.setdefault(rarest, []).append(k)

    utility = [0] * len(itemsets)
    ext = db.utilities
    tests = 0
    for t in db:
        qty = None
        for item, _ in t.entries:
            bucket = by_item.get(item)
            if not bucket:
                continue
            if qty is None:
                qty = t.quantities()
            for k in bucket:
                tests += 1
                itemset = itemsets[k]
                if all(i in qty for i in itemset):
                    utility[k] += sum(qty[i] * ext[i] for i in itemset)
    stats.containment_tests = tests

    return sort_huis(
        Hui(itemset, u) for itemset, u in zip(itemsets, utility) if u > 0 and u >= min_util
    )


def format_huis(huis: Iterable[Hui]) -> str:
    return "".join(" ".join(map(str, h.itemset)) + f" #UTIL: {h.utility}\n" for h in huis)


def parse_huis(text: str) -> list[Hui]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        items, _, util = line.partition("#UTIL:")
        out.append(Hui(tuple(int(x) for x in items.split()), int(util)))
    return out
