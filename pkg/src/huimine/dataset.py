"""Transaction databases with quantities and external utilities.

File formats
------------
Transactions: one transaction per line, whitespace separated ``item:quantity``
pairs.  Utility table: one ``item external_utility`` pair per line.  Lines
starting with ``#`` are ignored in both files.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np


class DatabaseFormatError(ValueError):
    """Raised for malformed or inconsistent database files.

    ``kind`` is one of ``malformed``, ``unknown-item``,
    ``non-positive-quantity``, ``non-positive-utility``, ``duplicate-item``.
    """

    def __init__(self, kind: str, message: str, line: int | None = None, source: str = ""):
        self.kind = kind
        self.line = line
        self.source = source
        where = f"{source}:" if source else ""
        if line is not None:
            where += f"line {line}: "
        super().__init__(f"{where}{kind}: {message}")


@dataclass(frozen=True)
class Transaction:
    """Item/quantity pairs in file order."""

    tid: int
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError(f"transaction {self.tid} is empty")
        seen = set()
        for item, qty in self.entries:
            if qty < 1:
                raise ValueError(f"transaction {self.tid}: quantity {qty} for item {item}")
            if item in seen:
                raise ValueError(f"transaction {self.tid}: duplicate item {item}")
            seen.add(item)

    @property
    def items(self) -> tuple[int, ...]:
        return tuple(item for item, _ in self.entries)

    def quantities(self) -> dict[int, int]:
        return dict(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class TransactionDatabase:
    transactions: tuple[Transaction, ...]
    utilities: Mapping[int, int]
    # dense index: item -> position in ``item_ids`` (sorted external ids)
    item_ids: tuple[int, ...] = field(init=False, compare=False, repr=False)
    item_index: Mapping[int, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        for item, u in self.utilities.items():
            if u < 1:
                raise ValueError(f"external utility of item {item} must be >= 1, got {u}")
        for pos, t in enumerate(self.transactions):
            if t.tid != pos:
                raise ValueError(f"transaction id {t.tid} at position {pos}")
            for item, _ in t.entries:
                if item not in self.utilities:
                    raise ValueError(f"transaction {pos}: item {item} has no external utility")
        ids = tuple(sorted(self.utilities))
        object.__setattr__(self, "item_ids", ids)
        object.__setattr__(self, "item_index", {item: k for k, item in enumerate(ids)})

    @classmethod
    def from_lists(cls, transactions: Iterable[Iterable[tuple[int, int]]],
                   utilities: Mapping[int, int]) -> "TransactionDatabase":
        txs = tuple(Transaction(k, tuple(entries)) for k, entries in enumerate(transactions))
        return cls(txs, dict(utilities))

    def __len__(self):
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    def present_items(self) -> list[int]:
        """Items occurring in at least one transaction, ascending."""
        return sorted({item for t in self.transactions for item, _ in t.entries})


# --------------------------------------------------------------------------
# text I/O

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_int(token: str, lineno: int, source: str) -> int:
    if not token.isdigit():
        raise DatabaseFormatError("malformed", f"expected unsigned integer, got {token!r}", lineno, source)
    return int(token)


def parse_utilities(text: str, source: str = "") -> dict[int, int]:
    utilities: dict[int, int] = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise DatabaseFormatError("malformed", f"expected 'item utility', got {line!r}", lineno, source)
        item = _parse_int(parts[0], lineno, source)
        util = _parse_int(parts[1], lineno, source)
        if util < 1:
            raise DatabaseFormatError("non-positive-utility", f"item {item} has utility {util}", lineno, source)
        if item in utilities:
            raise DatabaseFormatError("duplicate-item", f"item {item} listed twice", lineno, source)
        utilities[item] = util
    return utilities


def parse_transactions(text: str, utilities: Mapping[int, int] | None = None,
                       source: str = "") -> list[tuple[tuple[int, int], ...]]:
    rows = []
    for lineno, line in _content_lines(text):
        entries = []
        seen = set()
        for token in line.split():
            item_s, sep, qty_s = token.partition(":")
            if not sep:
                raise DatabaseFormatError("malformed", f"expected item:quantity, got {token!r}", lineno, source)
            item = _parse_int(item_s, lineno, source)
            qty = _parse_int(qty_s, lineno, source)
            if qty < 1:
                raise DatabaseFormatError("non-positive-quantity", f"item {item} has quantity {qty}",
                                          lineno, source)
            if item in seen:
                raise DatabaseFormatError("duplicate-item", f"item {item} repeated", lineno, source)
            if utilities is not None and item not in utilities:
                raise DatabaseFormatError("unknown-item", f"item {item} not in utility table", lineno, source)
            seen.add(item)
            entries.append((item, qty))
        rows.append(tuple(entries))
    return rows


def parse_database(transactions_text: str, utilities_text: str,
                   sources: tuple[str, str] = ("", "")) -> TransactionDatabase:
    utilities = parse_utilities(utilities_text, sources[1])
    rows = parse_transactions(transactions_text, utilities, sources[0])
    return TransactionDatabase.from_lists(rows, utilities)


def write_database(db: TransactionDatabase) -> tuple[str, str]:
    tx_text = "".join(
        " ".join(f"{item}:{qty}" for item, qty in t.entries) + "\n" for t in db.transactions
    )
    util_text = "".join(f"{item} {u}\n" for item, u in db.utilities.items())
    return tx_text, util_text


def load_database(db_path, utils_path) -> TransactionDatabase:
    db_path, utils_path = Path(db_path), Path(utils_path)
    return parse_database(db_path.read_text(), utils_path.read_text(),
                          sources=(str(db_path), str(utils_path)))


def save_database(db: TransactionDatabase, db_path, utils_path) -> None:
    tx_text, util_text = write_database(db)
    Path(db_path).write_text(tx_text)
    Path(utils_path).write_text(util_text)


def load_fimi(path, seed: int = 0, max_utility: int = 10) -> TransactionDatabase:
    """Read a FIMI-style itemset file (items only, no utilities).

    Every occurrence gets quantity 1 and each item a seeded uniform external
    utility in ``[1, max_utility]``.
    """
    rows = []
    for lineno, line in _content_lines(Path(path).read_text()):
        items = []
        for tok in line.split():
            item = _parse_int(tok, lineno, str(path))
            if item not in items:
                items.append(item)
        rows.append(tuple((item, 1) for item in items))
    present = sorted({item for row in rows for item, _ in row})
    rng = np.random.default_rng(seed)
    utils = rng.integers(1, max_utility + 1, size=len(present))
    return TransactionDatabase.from_lists(rows, {item: int(u) for item, u in zip(present, utils)})


# --------------------------------------------------------------------------
# synthetic generation

@dataclass(frozen=True)
class DatasetSpec:
    """Parameters of an IBM-Quest-like generator (``T10I6D10K`` etc.)."""

    avg_transaction_size: float = 10.0   # T
    avg_pattern_size: float = 6.0        # I
    num_transactions: int = 10_000       # D
    num_items: int = 1000                # N
    max_quantity: int = 5
    max_external_utility: int = 10
    seed: int = 42
    num_patterns: int = 2000
    correlation: float = 0.5
    utility_distribution: str = "uniform"   # or "lognormal"

    def validate(self) -> None:
        T, I = self.avg_transaction_size, self.avg_pattern_size
        if self.num_items < 1:
            raise ValueError("num_items (N) must be positive")
        if T <= 0 or I <= 0:
            raise ValueError("T and I must be positive")
        if T > self.num_items:
            raise ValueError(f"T={T} exceeds N={self.num_items}")
        if I > T:
            raise ValueError(f"I={I} exceeds T={T}")
        if self.num_transactions < 0:
            raise ValueError("D must be non-negative")
        if self.max_quantity < 1 or self.max_external_utility < 1:
            raise ValueError("max_quantity and max_external_utility must be >= 1")
        if self.num_patterns < 1:
            raise ValueError("num_patterns must be >= 1")
        if self.utility_distribution not in ("uniform", "lognormal"):
            raise ValueError(f"unknown utility distribution {self.utility_distribution!r}")

    @property
    def label(self) -> str:
        return f"T{self.avg_transaction_size:g}I{self.avg_pattern_size:g}D{_count_label(self.num_transactions)}"


def _count_label(n: int) -> str:
    if n >= 1000 and n % 1000 == 0:
        return f"{n // 1000}K"
    return str(n)


def _external_utilities(spec: DatasetSpec, rng: np.random.Generator) -> np.ndarray:
    n, hi = spec.num_items, spec.max_external_utility
    if spec.utility_distribution == "uniform":
        return rng.integers(1, hi + 1, size=n)
    raw = rng.lognormal(mean=0.0, sigma=1.0, size=n)
    return np.clip(np.ceil(raw), 1, hi).astype(np.int64)


def _potential_patterns(spec: DatasetSpec, rng: np.random.Generator):
    n = spec.num_items
    patterns = []
    prev: np.ndarray | None = None
    for _ in range(spec.num_patterns):
        size = int(min(max(1, rng.poisson(spec.avg_pattern_size)), n))
        items: list[int] = []
        if prev is not None:
            frac = min(1.0, rng.exponential(spec.correlation))
            take = min(int(round(frac * size)), len(prev))
            if take:
                items.extend(int(x) for x in rng.choice(prev, size=take, replace=False))
        chosen = set(items)
        while len(items) < size:
            x = int(rng.integers(n))
            if x not in chosen:
                chosen.add(x)
                items.append(x)
        arr = np.array(items, dtype=np.int64)
        patterns.append(arr)
        prev = arr
    weights = rng.exponential(1.0, size=spec.num_patterns)
    weights /= weights.sum()
    corruption = np.clip(rng.normal(0.5, math.sqrt(0.1), size=spec.num_patterns), 0.0, 1.0)
    return patterns, np.cumsum(weights), corruption


def generate_synthetic(spec: DatasetSpec) -> TransactionDatabase:
    """Generate a database in the style of the IBM Quest generator.

    Transaction lengths are Poisson with mean T (clamped to [1, N]); each
    transaction is filled from weighted potential patterns of mean size I,
    each corrupted by dropping items.  A pattern that overflows the remaining
    room is truncated half of the time and otherwise carried over to the next
    transaction.  Utilities and patterns are drawn before any transaction, so
    a database with D transactions is a prefix of one with more transactions
    under the same seed.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n = spec.num_items
    ext = _external_utilities(spec, rng)
    patterns, cum_weights, corruption = _potential_patterns(spec, rng)

    rows = []
    carried: np.ndarray | None = None
    for _ in range(spec.num_transactions):
        target = int(min(max(1, rng.poisson(spec.avg_transaction_size)), n))
        items: list[int] = []
        chosen: set[int] = set()
        attempts = 0
        while len(items) < target:
            attempts += 1
            if carried is not None:
                pattern, carried = carried, None
            else:
                k = int(np.searchsorted(cum_weights, rng.random(), side="right"))
                k = min(k, len(patterns) - 1)
                pattern = patterns[k]
                keep = rng.random(len(pattern)) >= corruption[k]
                pattern = pattern[keep]
            fresh = [int(x) for x in pattern if int(x) not in chosen]
            room = target - len(items)
            if len(fresh) > room and items and rng.random() < 0.5:
                carried = pattern
                fresh = []
            if attempts > 50 and not fresh:
                fresh = [int(rng.integers(n))]
                fresh = [x for x in fresh if x not in chosen]
            for x in fresh[:room]:
                chosen.add(x)
                items.append(x)
        qty = rng.integers(1, spec.max_quantity + 1, size=len(items))
        rows.append(tuple((item, int(q)) for item, q in zip(items, qty)))

    return TransactionDatabase.from_lists(rows, {i: int(ext[i]) for i in range(n)})
