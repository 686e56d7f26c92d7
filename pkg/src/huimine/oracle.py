"""Brute-force reference miner.

Shares no code with the tree pipeline: itemsets are enumerated as bitmasks
over the items present in the database and scored by a full scan.
"""
from __future__ import annotations

import numpy as np

from .dataset import TransactionDatabase
from .verifier import Hui, sort_huis

MAX_ORACLE_ITEMS = 20


class OracleLimitError(ValueError):
    pass


def _matrices(db: TransactionDatabase, items: list[int]):
    col = {item: k for k, item in enumerate(items)}
    util = np.zeros((len(db), len(items)), dtype=np.int64)
    for r, t in enumerate(db.transactions):
        for item, qty in t.entries:
            util[r, col[item]] = qty * db.utilities[item]
    return util


def check_guard(db: TransactionDatabase, max_items: int = MAX_ORACLE_ITEMS) -> int:
    n = len({item for t in db.transactions for item, _ in t.entries})
    if n > max_items:
        raise OracleLimitError(f"{n} distinct items exceed the enumeration guard of {max_items}")
    return n


def brute_force_utilities(db: TransactionDatabase, max_items: int = MAX_ORACLE_ITEMS) -> dict[tuple[int, ...], int]:
    """Exact utility of every itemset with non-empty support."""
    check_guard(db, max_items)
    items = sorted({item for t in db.transactions for item, _ in t.entries})
    n = len(items)
    if n == 0:
        return {}
    util = _matrices(db, items)
    present = util > 0
    weights = 1 << np.arange(n, dtype=np.int64)
    tmask = present.astype(np.int64) @ weights
    result: dict[tuple[int, ...], int] = {}
    shifts = np.arange(n, dtype=np.int64)
    # chunked to bound memory at 20 items
    step = max(1, (1 << 20) // max(1, len(db)))
    for start in range(1, 1 << n, step):
        masks = np.arange(start, min(start + step, 1 << n), dtype=np.int64)
        mbits = (masks[:, None] >> shifts) & 1
        contains = (tmask[None, :] & masks[:, None]) == masks[:, None]
        totals = ((mbits @ util.T) * contains).sum(axis=1)
        for m_bits, total, ok in zip(mbits, totals, contains.any(axis=1)):
            if ok:
                result[tuple(items[k] for k in np.flatnonzero(m_bits))] = int(total)
    return result


def brute_force_huis(db: TransactionDatabase, min_util: int,
                     max_items: int = MAX_ORACLE_ITEMS) -> list[Hui]:
    utils = brute_force_utilities(db, max_items)
    return sort_huis(Hui(x, u) for x, u in utils.items() if u >= min_util)


def brute_force_twu(db: TransactionDatabase) -> dict[int, int]:
    """TWU by filtering the database once per item."""
    twu = {}
    for item in sorted({i for t in db.transactions for i, _ in t.entries}):
        twu[item] = sum(
            sum(q * db.utilities[i] for i, q in t.entries)
            for t in db.transactions
            if any(i == item for i, _ in t.entries)
        )
    return twu
