"""Rule-form and aggregate constraints.

Expert constraints come in two kinds: membership pools restricting which
items may appear in a rule's premise or conclusion, and aggregate
predicates (SUM/AVG/MIN/MAX of an item's quantity over the rule's
supporting transactions).  Membership is anti-monotone item-wise and is
pushed into candidate generation; aggregates are not anti-monotone in
general and are checked at rule-generation time only.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from typing import Collection

from .temporal_db import TemporalDatabase

AGGREGATE_FUNCTIONS = ("SUM", "AVG", "MIN", "MAX")

COMPARATORS = {
    ">=": operator.ge,
    ">": operator.gt,
    "<=": operator.le,
    "<": operator.lt,
    "=": operator.eq,
}

_AGGREGATE_RE = re.compile(
    r"^\s*(SUM|AVG|MIN|MAX)\s*\(\s*(\d+)\s*\)\s*(>=|<=|>|<|=)\s*(-?\d+(?:\.\d+)?)\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class AggregateConstraint:
    """Predicate ``fct(item) cmp threshold`` over supporting transactions."""

    fct: str
    item: int
    comparator: str
    threshold: float

    def __post_init__(self) -> None:
        if self.fct not in AGGREGATE_FUNCTIONS:
            raise ValueError(f"unknown aggregate function {self.fct!r}")
        if self.comparator not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.comparator!r}")
        if self.item < 0:
            raise ValueError("aggregate target item must be a non-negative id")
        if not math.isfinite(self.threshold):
            raise ValueError("aggregate threshold must be finite")

    def compare(self, value: float) -> bool:
        return COMPARATORS[self.comparator](value, self.threshold)

    def __str__(self) -> str:
        return f"{self.fct}({self.item}){self.comparator}{self.threshold:g}"


def parse_aggregate(text: str) -> AggregateConstraint:
    """Parse the CLI grammar ``FCT(item) CMP number``, e.g. ``SUM(0)>=1``."""
    m = _AGGREGATE_RE.match(text)
    if not m:
        raise ValueError(
            f"malformed aggregate constraint {text!r}; "
            "expected FCT(item)CMP number, e.g. SUM(0)>=1"
        )
    fct, item, cmp_, threshold = m.groups()
    return AggregateConstraint(fct.upper(), int(item), cmp_, float(threshold))


@dataclass(frozen=True)
class ConstraintSet:
    """Premise/conclusion item pools plus aggregate predicates.

    ``None`` pools are wildcards (unrestricted); explicit pools must be
    non-empty.  The same item may legally sit in both pools.
    """

    premise_items: frozenset[int] | None = None
    conclusion_items: frozenset[int] | None = None
    aggregates: tuple[AggregateConstraint, ...] = ()

    def __post_init__(self) -> None:
        for pool in (self.premise_items, self.conclusion_items):
            if pool is not None:
                if not pool:
                    raise ValueError("a non-wildcard item pool must be non-empty")
                if any(i < 0 for i in pool):
                    raise ValueError("item pools hold non-negative ids")

    @classmethod
    def unconstrained(cls) -> "ConstraintSet":
        return cls()

    @property
    def is_unconstrained(self) -> bool:
        return (
            self.premise_items is None
            and self.conclusion_items is None
            and not self.aggregates
        )

    @property
    def universe(self) -> frozenset[int] | None:
        """Allowed item universe, or None when either pool is a wildcard."""
        if self.premise_items is None or self.conclusion_items is None:
            return None
        return self.premise_items | self.conclusion_items


def universe_allows(itemset: Collection[int], cs: ConstraintSet) -> bool:
    """Every item must sit in the premise-or-conclusion universe.

    Anti-monotone: rejecting an itemset rejects all its supersets, which
    licenses pushing this check into candidate generation.
    """
    universe = cs.universe
    return universe is None or frozenset(itemset) <= universe


def rule_form_allows(
    premise: Collection[int], conclusion: Collection[int], cs: ConstraintSet
) -> bool:
    if cs.premise_items is not None and not frozenset(premise) <= cs.premise_items:
        return False
    if cs.conclusion_items is not None and not frozenset(conclusion) <= cs.conclusion_items:
        return False
    return True


def evaluate_aggregates(
    db: TemporalDatabase,
    joint: frozenset[int],
    constraints: Collection[AggregateConstraint],
) -> bool:
    """Evaluate all aggregate predicates over ``joint``'s supporting transactions.

    Supporting transactions lacking the target item contribute 0 to
    SUM/AVG and are skipped for MIN/MAX; an empty support set yields
    SUM = AVG = 0 and fails MIN/MAX outright.
    """
    constraints = list(constraints)
    if not constraints:
        return True
    if not joint:
        raise ValueError("aggregate evaluation needs a non-empty itemset")
    for ac in constraints:
        if ac.item not in db.item_ids:
            raise ValueError(
                f"aggregate target item {ac.item} does not occur in the database"
            )
    # Scanning the rarest member's transaction list is enough: every
    # supporting transaction contains each member of the itemset.
    rarest = min(joint, key=lambda i: len(db.transactions_with_item(i)))
    supporting = [
        db.transactions[idx]
        for idx in db.transactions_with_item(rarest)
        if joint <= db.transactions[idx].items
    ]
    for ac in constraints:
        if ac.fct in ("SUM", "AVG"):
            total = sum(t.quantities.get(ac.item, 0) for t in supporting)
            value = total if ac.fct == "SUM" else (total / len(supporting) if supporting else 0.0)
            if not ac.compare(value):
                return False
        else:
            present = [t.quantities[ac.item] for t in supporting if ac.item in t.quantities]
            if not present or not ac.compare(min(present) if ac.fct == "MIN" else max(present)):
                return False
    return True


def aggregate_satisfied(
    premise: Collection[int],
    conclusion: Collection[int],
    db: TemporalDatabase,
    ac: AggregateConstraint,
) -> bool:
    """Check one aggregate predicate for the rule premise -> conclusion."""
    joint = frozenset(premise) | frozenset(conclusion)
    return evaluate_aggregates(db, joint, (ac,))
