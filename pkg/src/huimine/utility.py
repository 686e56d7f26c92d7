"""Utility arithmetic: transaction utility, TWU, MTWU, MIU, exact utility, thresholds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .dataset import Transaction, TransactionDatabase

UTILITY_LIMIT = 2**63 - 1

ABSOLUTE = "absolute"
FRACTION_OF_TOTAL = "fraction_of_total_utility"
FRACTION_OF_MTWU = "fraction_of_mtwu"
POLICY_KINDS = (ABSOLUTE, FRACTION_OF_TOTAL, FRACTION_OF_MTWU)


def _check_range(value: int) -> int:
    if value > UTILITY_LIMIT:
        raise OverflowError(f"utility {value} exceeds the 64-bit range")
    return value


def transaction_utility(t: Transaction, utilities: Mapping[int, int]) -> int:
    total = 0
    for item, qty in t.entries:
        try:
            total += qty * utilities[item]
        except KeyError:
            raise KeyError(f"no external utility for item {item}") from None
    return total


def total_utility(db: TransactionDatabase) -> int:
    return _check_range(sum(transaction_utility(t, db.utilities) for t in db))


def compute_twu(db: TransactionDatabase) -> dict[int, int]:
    """Transaction-weighted utilization of every item, in one database pass."""
    twu: dict[int, int] = {}
    grand = 0
    for t in db:
        tu = transaction_utility(t, db.utilities)
        grand += tu
        for item, _ in t.entries:
            twu[item] = twu.get(item, 0) + tu
    # every per-item sum is bounded by grand * max transaction length
    if twu:
        _check_range(max(twu.values()))
    return twu


def compute_mtwu(twu: Mapping[int, int]) -> int:
    if not twu:
        raise ValueError("MTWU of an empty TWU table is undefined")
    return max(twu.values())


def compute_miu(db: TransactionDatabase) -> dict[int, int]:
    """Smallest single-occurrence utility of every item."""
    miu: dict[int, int] = {}
    for t in db:
        for item, qty in t.entries:
            u = qty * db.utilities[item]
            if item not in miu or u < miu[item]:
                miu[item] = u
    return miu


def exact_utility(itemset: Iterable[int], db: TransactionDatabase) -> int:
    items = tuple(itemset)
    if not items:
        raise ValueError("itemset must be non-empty")
    total = 0
    for t in db:
        q = t.quantities()
        if all(i in q for i in items):
            total += sum(q[i] * db.utilities[i] for i in items)
    return total


@dataclass(frozen=True)
class ThresholdPolicy:
    """How the absolute ``min_util`` is obtained.

    ``absolute`` takes ``value`` as the utility threshold itself; the two
    fraction kinds scale the total database utility or the MTWU and round up.
    """

    kind: str
    value: Fraction

    def __init__(self, kind: str, value):
        if kind not in POLICY_KINDS:
            raise ValueError(f"unknown threshold kind {kind!r}")
        v = value if isinstance(value, Fraction) else Fraction(str(value))
        if v < 0:
            raise ValueError("threshold must be non-negative")
        if kind != ABSOLUTE and v > 1:
            raise ValueError(f"fractional threshold must lie in [0, 1], got {value}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "value", v)

    @classmethod
    def absolute(cls, min_util: int) -> "ThresholdPolicy":
        return cls(ABSOLUTE, int(min_util))

    @classmethod
    def of_total(cls, fraction) -> "ThresholdPolicy":
        return cls(FRACTION_OF_TOTAL, fraction)

    @classmethod
    def of_mtwu(cls, fraction) -> "ThresholdPolicy":
        return cls(FRACTION_OF_MTWU, fraction)

    def describe(self) -> str:
        return f"{self.kind}={float(self.value):g}"


def resolve_threshold(policy: ThresholdPolicy, db: TransactionDatabase,
                      twu: Mapping[int, int] | None = None) -> int:
    if policy.kind == ABSOLUTE:
        return math.ceil(policy.value)
    if len(db) == 0:
        raise ValueError("a fractional threshold needs a non-empty database")
    if policy.kind == FRACTION_OF_MTWU:
        base = compute_mtwu(twu if twu is not None else compute_twu(db))
    else:
        base = total_utility(db)
    return math.ceil(policy.value * base)
