"""Cyclic association rules generated from frequent cyclic itemsets.

A rule splits a frequent cyclic itemset into premise and conclusion.
Support is the joint itemset's support; confidence divides by the
premise's support (an empty premise has support 1 by convention, so
conf(() -> X) = supp(X)).  Rules inherit the joint itemset's cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import TYPE_CHECKING, Collection, Iterable, Sequence

from . import cycles as cycles_mod
from .constraints import ConstraintSet, evaluate_aggregates, rule_form_allows
from .cycles import Cycle
from .temporal_db import TemporalDatabase

if TYPE_CHECKING:  # pragma: no cover
    from .mining import ItemsetRecord


class UndefinedConfidenceError(ValueError):
    """Raised when a rule's premise has zero support."""


@dataclass(frozen=True, order=True)
class CyclicRule:
    """Premise -> conclusion with support, confidence and cycle set."""

    premise: tuple[int, ...]
    conclusion: tuple[int, ...]
    support: float
    confidence: float
    cycles: tuple[Cycle, ...]

    def __post_init__(self) -> None:
        if not self.conclusion:
            raise ValueError("rule conclusion must be non-empty")
        if set(self.premise) & set(self.conclusion):
            raise ValueError("premise and conclusion must be disjoint")
        if not self.cycles:
            raise ValueError("an emitted rule must carry at least one cycle")

    @property
    def joint(self) -> frozenset[int]:
        return frozenset(self.premise) | frozenset(self.conclusion)

    def __str__(self) -> str:
        prem = " ".join(map(str, self.premise)) if self.premise else "{}"
        concl = " ".join(map(str, self.conclusion))
        cyc = ", ".join(str(c) for c in self.cycles)
        return (
            f"{prem} -> {concl}  supp={self.support:.4g} "
            f"conf={self.confidence:.4g}  cycles [{cyc}]"
        )


def confidence(
    premise: Collection[int], conclusion: Collection[int], db: TemporalDatabase
) -> float:
    """supp(premise | conclusion) / supp(premise); supp of the empty set is 1."""
    premise = frozenset(premise)
    conclusion = frozenset(conclusion)
    if not conclusion:
        raise ValueError("rule conclusion must be non-empty")
    joint_count = db.count_support(premise | conclusion)
    if not premise:
        return joint_count / len(db)
    premise_count = db.count_support(premise)
    if premise_count == 0:
        raise UndefinedConfidenceError(
            f"premise {sorted(premise)} has zero support; confidence undefined"
        )
    return joint_count / premise_count


def rule_cycles(
    record: "ItemsetRecord", length: int, unit_count: int
) -> set[Cycle]:
    """Cycles of the record's full itemset at the given length."""
    offsets = cycles_mod.cyclic_offsets(record.occurrence_units, length, unit_count)
    return {Cycle(length, o) for o in offsets}


def candidate_splits(
    itemset: frozenset[int], allow_empty_premise: bool = False
) -> list[tuple[frozenset[int], frozenset[int]]]:
    """All premise/conclusion splits of an itemset.

    Every non-empty proper subset forms a premise; the empty premise is
    only offered for singleton itemsets (the whole-itemset rule), so a
    two-item set yields exactly its two directed rules.
    """
    items = sorted(itemset)
    splits: list[tuple[frozenset[int], frozenset[int]]] = []
    if allow_empty_premise and len(items) == 1:
        splits.append((frozenset(), frozenset(items)))
    for size in range(1, len(items)):
        for prem in combinations(items, size):
            premise = frozenset(prem)
            splits.append((premise, frozenset(itemset) - premise))
    return splits


def generate_rules(
    frequent: Sequence["ItemsetRecord"],
    db: TemporalDatabase,
    minconf: float,
    cs: ConstraintSet | None = None,
    allow_empty_premise: bool = False,
) -> list[CyclicRule]:
    """Expand frequent cyclic itemsets into constraint-satisfying rules.

    A split survives when its form fits the constraint pools, its
    confidence reaches minconf (inclusive), every aggregate predicate
    holds, and the joint itemset's cycle set is non-empty.  Output is in
    canonical order: lexicographic by premise, then conclusion.
    """
    cs = cs or ConstraintSet.unconstrained()
    n = len(db)
    counts = {rec.itemset: rec.count for rec in frequent}
    out: list[CyclicRule] = []
    for rec in frequent:
        if not rec.cycles:
            continue
        support = rec.count / n
        sorted_cycles = tuple(sorted(rec.cycles))
        aggregates_ok: bool | None = None  # lazy: aggregates depend only on the joint itemset
        for premise, conclusion in candidate_splits(rec.itemset, allow_empty_premise):
            if not rule_form_allows(premise, conclusion, cs):
                continue
            if premise:
                premise_count = counts.get(premise)
                if premise_count is None:
                    premise_count = db.count_support(premise)
                if premise_count == 0:
                    raise UndefinedConfidenceError(
                        f"premise {sorted(premise)} has zero support"
                    )
                conf = rec.count / premise_count
            else:
                conf = support
            if conf < minconf:
                continue
            if aggregates_ok is None:
                aggregates_ok = evaluate_aggregates(db, rec.itemset, cs.aggregates)
            if not aggregates_ok:
                break
            out.append(
                CyclicRule(
                    tuple(sorted(premise)),
                    tuple(sorted(conclusion)),
                    support,
                    conf,
                    sorted_cycles,
                )
            )
    out.sort(key=lambda r: (r.premise, r.conclusion))
    return out
