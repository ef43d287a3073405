"""Frequent cyclic itemset mining and the four algorithm drivers.

Two families share the support-counting substrate:

* ``sequential`` / ``interleaved`` mine association rules per time unit
  and keep the rules whose unit-by-unit binary sequence is periodic for
  some length in ``[l_min, l_max]``.  The interleaved driver reaches the
  same result set through candidate-cycle pruning, unit skipping and
  early elimination, and reports its scan effort for comparison.

* ``pcar`` / ``cbcar`` scan the database partition by partition and keep
  itemsets that are frequent and cyclic at one fixed cycle length over
  the full window; ``cbcar`` additionally pushes an item-membership
  constraint into candidate generation and filters rules by form and
  aggregates.  ``pcar`` is ``cbcar`` with no constraints.

Threshold comparisons are inclusive (>=) for both support and
confidence.  Mid-scan checkpoint pruning only drops candidates that
provably cannot end up frequent and cyclic; anything stricter would make
the final result depend on the partition count.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Collection, Iterable, NamedTuple, Sequence

from .constraints import ConstraintSet
from .cycles import (
    Cycle,
    CycleCandidateSet,
    OccurrenceSequence,
    cyclic_offsets,
    detect_cycles_exhaustive,
    minimal_cycles,
)
from .rules import CyclicRule, candidate_splits, generate_rules
from .temporal_db import TemporalDatabase, partition


@dataclass(frozen=True)
class MiningParams:
    """Thresholds and cycle parameters shared by the four drivers."""

    minsupp: float
    minconf: float
    partitions: int = 1
    cycle_length: int | None = None  # pcar / cbcar
    l_min: int = 1  # sequential / interleaved
    l_max: int | None = None
    allow_empty_premise: bool = False
    full_cycles: bool = False  # report multiples instead of the minimal set

    def __post_init__(self) -> None:
        if not 0.0 < self.minsupp <= 1.0:
            raise ValueError(f"minsupp must be in (0, 1], got {self.minsupp}")
        if not 0.0 < self.minconf <= 1.0:
            raise ValueError(f"minconf must be in (0, 1], got {self.minconf}")
        if self.partitions < 1:
            raise ValueError("partitions must be >= 1")
        if self.cycle_length is not None and self.cycle_length < 1:
            raise ValueError("cycle_length must be >= 1")
        if self.l_min < 1:
            raise ValueError("l_min must be >= 1")
        if self.l_max is not None and self.l_max < self.l_min:
            raise ValueError(f"need l_min <= l_max, got [{self.l_min}, {self.l_max}]")


@dataclass(frozen=True)
class ItemsetRecord:
    """A frequent cyclic itemset with its bookkeeping."""

    itemset: frozenset[int]
    count: int
    occurrence_units: frozenset[int]
    cycles: frozenset[Cycle]


@dataclass
class MiningCounters:
    """Abstract scan effort, comparable across drivers.

    ``transactions_touched`` counts transactions read by counting scans;
    ``units_evaluated`` counts per-unit pattern evaluations (for the
    partitioned drivers: candidate-offset checks at checkpoints).
    """

    transactions_touched: int = 0
    units_evaluated: int = 0


class MiningOutcome(NamedTuple):
    rules: tuple[CyclicRule, ...]
    records: tuple[ItemsetRecord, ...]
    itemset_counts: dict[int, int]
    counters: MiningCounters


def support(
    itemset: Collection[int], db: TemporalDatabase, scan_limit: int | None = None
) -> tuple[int, float]:
    """Count and fraction of the first ``scan_limit`` transactions containing the itemset."""
    items = frozenset(itemset)
    if not items:
        raise ValueError("the empty itemset has support 1 by convention; not counted here")
    unknown = items - db.item_ids
    if unknown:
        raise ValueError(f"unknown item id(s) {sorted(unknown)}")
    limit = len(db) if scan_limit is None else scan_limit
    if not 1 <= limit <= len(db):
        raise ValueError(f"scan_limit must be in [1, {len(db)}], got {limit}")
    count = db.count_support(items, limit)
    return count, count / limit


def unit_holds(
    itemset: Collection[int], db: TemporalDatabase, unit: int, minsupp: float
) -> bool:
    """Itemset meets minsupp within one unit's transactions; empty units fail."""
    txns = db.unit_transactions(unit)
    if not txns:
        return False
    items = frozenset(itemset)
    hits = sum(1 for t in txns if items <= t.items)
    return hits / len(txns) >= minsupp


def apriori_gen(frequent_prev: Iterable[Collection[int]]) -> set[frozenset[int]]:
    """Classic join of (k-1)-itemsets sharing a prefix, then subset pruning."""
    prev = {frozenset(s) for s in frequent_prev}
    if not prev:
        return set()
    sizes = {len(s) for s in prev}
    if len(sizes) != 1:
        raise ValueError(f"itemsets must share one size, got sizes {sorted(sizes)}")
    if 0 in sizes:
        raise ValueError("itemsets must be non-empty")
    ordered = sorted(tuple(sorted(s)) for s in prev)
    out: set[frozenset[int]] = set()
    for a, b in combinations(ordered, 2):
        if a[:-1] != b[:-1]:
            continue
        cand = frozenset(a + (b[-1],))
        if all(cand - {x} in prev for x in cand):
            out.add(cand)
    return out


# ---------------------------------------------------------------------------
# partition-incremental drivers (pcar / cbcar)


class _PartitionStat:
    """Cumulative bookkeeping for one candidate during the partition scan."""

    __slots__ = ("count", "occurrence_units", "offset_hits", "last_unit")

    def __init__(self, cycle_length: int):
        self.count = 0
        self.occurrence_units: set[int] = set()
        self.offset_hits = [0] * cycle_length
        self.last_unit = -1

    def record(self, unit: int) -> None:
        self.count += 1
        if unit != self.last_unit:
            self.occurrence_units.add(unit)
            self.offset_hits[unit % len(self.offset_hits)] += 1
            self.last_unit = unit

    def possibly_cyclic(self, complete_units: int) -> bool:
        """Can any offset still have a fully occupied residue class?

        Offsets whose class is not yet observed stay possible; a hit in
        the one partially scanned unit may mask at most one miss, which
        keeps the filter lax, never strict.
        """
        length = len(self.offset_hits)
        for offset in range(length):
            if offset >= complete_units:
                return True
            class_size = (complete_units - offset + length - 1) // length
            if self.offset_hits[offset] >= class_size:
                return True
        return False


def _count_block(
    db: TemporalDatabase,
    start: int,
    end: int,
    live: dict[frozenset[int], _PartitionStat],
    k: int,
    counters: MiningCounters,
) -> None:
    counters.transactions_touched += end - start
    if not live:
        return
    if k == 1:
        by_item = {next(iter(c)): st for c, st in live.items()}
        for t in db.transactions[start:end]:
            unit = t.time_unit
            for item in t.quantities:
                st = by_item.get(item)
                if st is not None:
                    st.record(unit)
    else:
        pool = set().union(*live)
        for t in db.transactions[start:end]:
            its = t.items & pool
            if len(its) < k:
                continue
            unit = t.time_unit
            for combo in combinations(sorted(its), k):
                st = live.get(frozenset(combo))
                if st is not None:
                    st.record(unit)


def _mine_partitioned(
    db: TemporalDatabase,
    params: MiningParams,
    universe: frozenset[int] | None,
    counters: MiningCounters,
) -> tuple[list[ItemsetRecord], dict[int, int]]:
    n = len(db)
    unit_count = db.unit_count
    length = params.cycle_length
    if length is None:
        raise ValueError("cycle_length is required for partition-incremental mining")
    if length > unit_count // 2:
        raise ValueError(
            f"cycle length {length} cannot repeat twice over {unit_count} units"
        )
    checkpoint_ends = [end for _, end in partition(db, params.partitions).boundaries]
    items = db.item_ids if universe is None else db.item_ids & universe
    current: list[frozenset[int]] = [frozenset((i,)) for i in sorted(items)]
    records: list[ItemsetRecord] = []
    counts_per_size: dict[int, int] = {}
    k = 1
    while current:
        live = {cand: _PartitionStat(length) for cand in current}
        prev_end = 0
        for end in checkpoint_ends:
            _count_block(db, prev_end, end, live, k, counters)
            complete_units = (
                unit_count if end >= n else db.transactions[end].time_unit
            )
            remaining = n - end
            for cand in list(live):
                st = live[cand]
                counters.units_evaluated += length
                # sound pruning only: the candidate is dropped when no
                # completion of the scan can make it frequent, or no
                # offset can still yield a full residue class
                if (st.count + remaining) / n < params.minsupp:
                    del live[cand]
                elif not st.possibly_cyclic(complete_units):
                    del live[cand]
            prev_end = end
        frequent: list[ItemsetRecord] = []
        for cand, st in live.items():
            if st.count / n < params.minsupp:
                continue
            offsets = cyclic_offsets(st.occurrence_units, length, unit_count)
            if not offsets:
                continue
            frequent.append(
                ItemsetRecord(
                    cand,
                    st.count,
                    frozenset(st.occurrence_units),
                    frozenset(Cycle(length, o) for o in offsets),
                )
            )
        if frequent:
            counts_per_size[k] = len(frequent)
            records.extend(frequent)
            current = sorted(apriori_gen([r.itemset for r in frequent]), key=sorted)
        else:
            current = []
        k += 1
    return records, counts_per_size


def cbcar(
    db: TemporalDatabase, params: MiningParams, constraints: ConstraintSet | None = None
) -> MiningOutcome:
    """Partition-incremental mining with constraint pushing and rule filtering."""
    cs = constraints or ConstraintSet.unconstrained()
    counters = MiningCounters()
    records, counts = _mine_partitioned(db, params, cs.universe, counters)
    rules = generate_rules(records, db, params.minconf, cs, params.allow_empty_premise)
    return MiningOutcome(tuple(rules), tuple(records), counts, counters)


def pcar(db: TemporalDatabase, params: MiningParams) -> MiningOutcome:
    """Partition-incremental mining without constraints."""
    return cbcar(db, params, ConstraintSet.unconstrained())


# ---------------------------------------------------------------------------
# unit-wise drivers (sequential / interleaved)


def _resolve_length_range(db: TemporalDatabase, params: MiningParams) -> tuple[int, int]:
    l_max = params.l_max if params.l_max is not None else db.unit_count // 2
    if not 1 <= params.l_min <= l_max:
        raise ValueError(f"need 1 <= l_min <= l_max, got [{params.l_min}, {l_max}]")
    if l_max > db.unit_count // 2:
        raise ValueError(
            f"l_max={l_max} exceeds unit_count/2={db.unit_count // 2}; "
            "a cycle must repeat at least twice"
        )
    return params.l_min, l_max


def _emit_unitwise_rules(
    db: TemporalDatabase,
    entries: list[tuple[frozenset[int], frozenset[int], set[Cycle]]],
    params: MiningParams,
) -> tuple[tuple[CyclicRule, ...], dict[int, int]]:
    n = len(db)
    count_cache: dict[frozenset[int], int] = {}

    def joint_count(items: frozenset[int]) -> int:
        if items not in count_cache:
            count_cache[items] = db.count_support(items)
        return count_cache[items]

    rules = []
    joints = set()
    for premise, conclusion, cyc in entries:
        reported = cyc if params.full_cycles else minimal_cycles(cyc)
        joint = premise | conclusion
        supp_count = joint_count(joint)
        supp = supp_count / n
        conf = supp if not premise else supp_count / joint_count(premise)
        joints.add(joint)
        rules.append(
            CyclicRule(
                tuple(sorted(premise)),
                tuple(sorted(conclusion)),
                supp,
                conf,
                tuple(sorted(reported)),
            )
        )
    rules.sort(key=lambda r: (r.premise, r.conclusion))
    counts = Counter(len(j) for j in joints)
    return tuple(rules), dict(sorted(counts.items()))


def sequential(db: TemporalDatabase, params: MiningParams) -> MiningOutcome:
    """Two phases: per-unit rule mining, then cycle detection on rule sequences."""
    l_min, l_max = _resolve_length_range(db, params)
    counters = MiningCounters()
    item_ids = sorted(db.item_ids)
    rule_units: dict[tuple[frozenset[int], frozenset[int]], set[int]] = {}

    for unit in range(db.unit_count):
        txns = db.unit_transactions(unit)
        counters.transactions_touched += len(txns)
        counters.units_evaluated += len(item_ids)  # every single-item bit is fixed here
        if not txns:
            continue
        denom = len(txns)
        tally1: Counter[int] = Counter()
        for t in txns:
            tally1.update(t.items)
        unit_frequent: dict[frozenset[int], int] = {
            frozenset((item,)): c for item, c in tally1.items() if c / denom >= params.minsupp
        }
        prev = set(unit_frequent)
        k = 2
        while prev:
            candidates = apriori_gen(prev)
            if not candidates:
                break
            counters.transactions_touched += denom
            counters.units_evaluated += len(candidates)
            tally = {c: 0 for c in candidates}
            pool = set().union(*candidates)
            for t in txns:
                its = t.items & pool
                if len(its) < k:
                    continue
                for combo in combinations(sorted(its), k):
                    key = frozenset(combo)
                    if key in tally:
                        tally[key] += 1
            level = {c: cnt for c, cnt in tally.items() if cnt / denom >= params.minsupp}
            unit_frequent.update(level)
            prev = set(level)
            k += 1
        for itemset, count in unit_frequent.items():
            splits = candidate_splits(itemset, params.allow_empty_premise)
            counters.units_evaluated += len(splits)
            for premise, conclusion in splits:
                denom_p = unit_frequent[premise] if premise else denom
                if count / denom_p >= params.minconf:
                    rule_units.setdefault((premise, conclusion), set()).add(unit)

    entries = []
    for (premise, conclusion), units in rule_units.items():
        seq = OccurrenceSequence.from_units(units, db.unit_count)
        found = detect_cycles_exhaustive(seq, l_min, l_max)
        if found:
            entries.append((premise, conclusion, found))
    rules, counts = _emit_unitwise_rules(db, entries, params)
    return MiningOutcome(rules, (), counts, counters)


class _SweepState:
    """Live cycle candidates and per-unit support counts for one itemset."""

    __slots__ = ("live", "unit_counts")

    def __init__(self, live: set[Cycle]):
        self.live = live
        self.unit_counts: dict[int, int] = {}

    def covering(self, unit: int) -> list[Cycle]:
        return [c for c in self.live if c.covers(unit)]


def _sweep_level(
    db: TemporalDatabase,
    states: dict[frozenset[int], _SweepState],
    minsupp: float,
    counters: MiningCounters,
) -> None:
    """One left-to-right pass evaluating each itemset only where needed."""
    active = [(itemset, st) for itemset, st in states.items() if st.live]
    for unit in range(db.unit_count):
        if not active:
            break
        needers = []
        for itemset, st in active:
            cov = st.covering(unit)
            if cov:
                needers.append((itemset, st, cov))
        if not needers:
            continue
        txns = db.unit_transactions(unit)
        counters.transactions_touched += len(txns)
        denom = len(txns)
        tally = {itemset: 0 for itemset, _, _ in needers}
        for t in txns:
            items = t.items
            for itemset, _, _ in needers:
                if itemset <= items:
                    tally[itemset] += 1
        died = False
        for itemset, st, cov in needers:
            counters.units_evaluated += 1
            count = tally[itemset]
            st.unit_counts[unit] = count
            if denom == 0 or count / denom < minsupp:
                st.live.difference_update(cov)
                died = died or not st.live
        if died:
            active = [(itemset, st) for itemset, st in active if st.live]


def interleaved(db: TemporalDatabase, params: MiningParams) -> MiningOutcome:
    """Same result set as ``sequential`` via skipping, pruning and elimination."""
    l_min, l_max = _resolve_length_range(db, params)
    counters = MiningCounters()
    initial = CycleCandidateSet.full_range(l_min, l_max).live

    surviving: dict[frozenset[int], _SweepState] = {}
    current: dict[frozenset[int], _SweepState] = {
        frozenset((item,)): _SweepState(set(initial)) for item in sorted(db.item_ids)
    }
    while current:
        _sweep_level(db, current, params.minsupp, counters)
        level_survivors = {s: st for s, st in current.items() if st.live}
        surviving.update(level_survivors)
        if not level_survivors:
            break
        current = {}
        for cand in apriori_gen(set(level_survivors)):
            seed = set.intersection(*(level_survivors[cand - {x}].live for x in cand))
            if seed:
                current[cand] = _SweepState(seed)

    def unit_support(itemset: frozenset[int], unit: int) -> int:
        st = surviving.get(itemset)
        if st is not None and unit in st.unit_counts:
            return st.unit_counts[unit]
        return sum(1 for t in db.unit_transactions(unit) if itemset <= t.items)

    entries = []
    for itemset, st in surviving.items():
        for premise, conclusion in candidate_splits(itemset, params.allow_empty_premise):
            live = set(st.live)
            scan_units = sorted({u for c in st.live for u in c.units(db.unit_count)})
            for unit in scan_units:
                if not live:
                    break
                covering = [c for c in live if c.covers(unit)]
                if not covering:
                    continue
                counters.units_evaluated += 1
                denom = len(db.unit_transactions(unit))
                joint = unit_support(itemset, unit)
                ok = denom > 0 and joint / denom >= params.minsupp
                if ok:
                    denom_p = unit_support(premise, unit) if premise else denom
                    ok = denom_p > 0 and joint / denom_p >= params.minconf
                if not ok:
                    live.difference_update(covering)
            if live:
                entries.append((premise, conclusion, live))
    rules, counts = _emit_unitwise_rules(db, entries, params)
    return MiningOutcome(rules, (), counts, counters)


ALGORITHMS = ("sequential", "interleaved", "pcar", "cbcar")


def mine(
    db: TemporalDatabase,
    algorithm: str,
    params: MiningParams,
    constraints: ConstraintSet | None = None,
) -> MiningOutcome:
    """Dispatch one of the four drivers by name."""
    if algorithm == "sequential":
        return sequential(db, params)
    if algorithm == "interleaved":
        return interleaved(db, params)
    if algorithm == "pcar":
        return pcar(db, params)
    if algorithm == "cbcar":
        return cbcar(db, params, constraints)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
