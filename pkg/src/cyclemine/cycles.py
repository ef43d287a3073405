"""Binary occurrence sequences and cycle detection.

A cycle ``(length, offset)`` asserts that a pattern is present in every
time unit congruent to ``offset`` modulo ``length``.  Detection runs on
fixed-width binary sequences; besides the exhaustive reference scan
there is an optimized sweep built from three moves: skip units outside
every live candidate's residue class, seed a composite pattern's
candidates from the intersection of its sub-patterns' cycles, and retire
a candidate on the first miss.

A cycle only counts when its residue class is observed at least twice
inside the window, hence the ``l_max <= unit_count / 2`` requirement on
full-window detection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterable, Sequence


@dataclass(frozen=True, order=True)
class Cycle:
    """Periodicity descriptor: length in time units plus first offset."""

    length: int
    offset: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError(f"cycle length must be >= 1, got {self.length}")
        if not 0 <= self.offset < self.length:
            raise ValueError(
                f"cycle offset must satisfy 0 <= offset < length, "
                f"got ({self.length}, {self.offset})"
            )

    def covers(self, unit: int) -> bool:
        return unit % self.length == self.offset

    def units(self, unit_count: int) -> range:
        """Units of this cycle's residue class inside ``[0, unit_count)``."""
        return range(self.offset, unit_count, self.length)

    def __str__(self) -> str:
        return f"(l={self.length}, o={self.offset})"


@dataclass(frozen=True)
class OccurrenceSequence:
    """Presence bits for a pattern, one bit per time unit."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits:
            raise ValueError("occurrence sequence needs at least one unit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("occurrence bits must be 0 or 1")

    @property
    def unit_count(self) -> int:
        return len(self.bits)

    @classmethod
    def from_units(cls, units: Iterable[int], unit_count: int) -> "OccurrenceSequence":
        bits = [0] * unit_count
        for u in units:
            if not 0 <= u < unit_count:
                raise ValueError(f"unit {u} outside [0, {unit_count})")
            bits[u] = 1
        return cls(tuple(bits))

    def units(self) -> set[int]:
        return {u for u, b in enumerate(self.bits) if b}


@dataclass(frozen=True)
class CycleCandidateSet:
    """Cycles still in the running for one pattern during a sweep."""

    live: frozenset[Cycle]
    l_max: int

    def __post_init__(self) -> None:
        if self.l_max < 1:
            raise ValueError("l_max must be positive")
        for c in self.live:
            if c.length > self.l_max:
                raise ValueError(f"candidate {c} exceeds l_max={self.l_max}")

    @classmethod
    def full_range(cls, l_min: int, l_max: int) -> "CycleCandidateSet":
        if not 1 <= l_min <= l_max:
            raise ValueError(f"need 1 <= l_min <= l_max, got [{l_min}, {l_max}]")
        cands = frozenset(
            Cycle(length, offset)
            for length in range(l_min, l_max + 1)
            for offset in range(length)
        )
        return cls(cands, l_max)

    def __len__(self) -> int:
        return len(self.live)

    def __iter__(self):
        return iter(self.live)


def _check_length_range(l_min: int, l_max: int, unit_count: int) -> None:
    if not 1 <= l_min <= l_max:
        raise ValueError(f"need 1 <= l_min <= l_max, got [{l_min}, {l_max}]")
    if l_max > unit_count // 2:
        raise ValueError(
            f"l_max={l_max} exceeds unit_count/2={unit_count // 2}; "
            "a cycle must repeat at least twice inside the window"
        )


def detect_cycles_exhaustive(
    seq: OccurrenceSequence, l_min: int, l_max: int
) -> set[Cycle]:
    """Reference oracle: scan every residue class of every length.

    A cycle (l, o) is reported when every unit congruent to o modulo l
    carries a 1 bit and the class has at least two units in the window.
    """
    _check_length_range(l_min, l_max, seq.unit_count)
    bits = seq.bits
    n = seq.unit_count
    found = set()
    for length in range(l_min, l_max + 1):
        for offset in range(length):
            members = range(offset, n, length)
            if len(members) >= 2 and all(bits[u] for u in members):
                found.add(Cycle(length, offset))
    return found


def minimal_cycles(cycles: Collection[Cycle]) -> set[Cycle]:
    """Drop every cycle that is a residue class of a shorter cycle in the set.

    (l, o) is redundant when some (l', o') with l' | l, l' < l and
    o = o' (mod l') is present — its class is contained in the shorter
    cycle's class, so it adds no information.
    """
    cycles = set(cycles)
    kept = set()
    for c in cycles:
        redundant = any(
            d.length < c.length
            and c.length % d.length == 0
            and c.offset % d.length == d.offset
            for d in cycles
        )
        if not redundant:
            kept.add(c)
    return kept


def eliminate(candidates: CycleCandidateSet, unit: int, bit: int) -> CycleCandidateSet:
    """Retire every candidate whose residue class contains a 0-bit unit."""
    if bit:
        return candidates
    survivors = frozenset(c for c in candidates.live if not c.covers(unit))
    if len(survivors) == len(candidates.live):
        return candidates
    return CycleCandidateSet(survivors, candidates.l_max)


def prune_candidates(
    subset_cycles: Sequence[Collection[Cycle]], l_max: int
) -> CycleCandidateSet:
    """Seed a composite pattern's candidates from its sub-patterns' cycles.

    A composite's occurrence bits are the AND of its parts' bits, so any
    cycle of the whole must be a cycle of every part: intersect.
    """
    if not subset_cycles:
        raise ValueError("at least one subset cycle set is required")
    live = set(subset_cycles[0])
    for other in subset_cycles[1:]:
        live &= set(other)
    return CycleCandidateSet(
        frozenset(c for c in live if c.length <= l_max), l_max
    )


def units_to_scan(candidates: CycleCandidateSet, unit_count: int) -> list[int]:
    """Units that can still influence any live candidate, ascending."""
    needed: set[int] = set()
    for c in candidates.live:
        needed.update(c.units(unit_count))
    return sorted(needed)


def eliminate_sweep(seq: OccurrenceSequence, l_min: int, l_max: int) -> set[Cycle]:
    """Left-to-right elimination with unit skipping; equals the exhaustive scan."""
    _check_length_range(l_min, l_max, seq.unit_count)
    live = set(CycleCandidateSet.full_range(l_min, l_max).live)
    bits = seq.bits
    for unit in range(seq.unit_count):
        if not live:
            break
        covering = [c for c in live if c.covers(unit)]
        if not covering:
            continue  # skipped unit: no live candidate cares about its bit
        if not bits[unit]:
            live.difference_update(covering)
    return live


def cyclic_offsets(
    occurrence_units: Collection[int],
    length: int,
    scanned_units: int,
    require_repeats: bool = True,
) -> set[int]:
    """Offsets whose residue class is fully present within the scanned prefix.

    With ``require_repeats`` (the certification semantics) a class must
    have at least two units inside the prefix; without it, classes not
    yet observed count as possible, which is what incremental pruning
    needs mid-scan.
    """
    if length < 1:
        raise ValueError(f"cycle length must be >= 1, got {length}")
    offsets = set()
    for offset in range(length):
        members = range(offset, scanned_units, length)
        if require_repeats and len(members) < 2:
            continue
        if all(u in occurrence_units for u in members):
            offsets.add(offset)
    return offsets


def is_cyclic(
    occurrence_units: Collection[int],
    length: int,
    scanned_units: int,
    require_repeats: bool = True,
) -> bool:
    """True when some offset's residue class is fully occupied (see above)."""
    return bool(
        cyclic_offsets(occurrence_units, length, scanned_units, require_repeats)
    )
