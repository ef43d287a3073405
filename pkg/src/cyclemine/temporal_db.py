"""Temporal transaction databases.

Transactions carry item quantities and a 0-based time unit.  FIMI files
have no timestamps, so unit assignment is by line order: transaction i
lands in unit ``i // units_per_group``.  The quantified variant accepts
``id:qty`` tokens; ``csv_timestamped`` carries an explicit unit column.

Quantities default to 1, which makes a SUM aggregate over supporting
transactions coincide with an occurrence count on plain FIMI data.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cycles import Cycle

FORMATS = ("fimi", "fimi_quantified", "csv_timestamped")


class ParseError(ValueError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Transaction:
    id: int
    time_unit: int
    quantities: Mapping[int, int]

    def __post_init__(self) -> None:
        if self.id < 0 or self.time_unit < 0:
            raise ValueError("transaction id and time unit must be non-negative")
        for item, qty in self.quantities.items():
            if item < 0:
                raise ValueError(f"negative item id {item}")
            if qty < 1:
                raise ValueError(f"item {item} has non-positive quantity {qty}")

    @property
    def items(self) -> frozenset[int]:
        return frozenset(self.quantities)


class TemporalDatabase:
    """Immutable ordered transaction list with a fixed time-unit range."""

    def __init__(
        self,
        transactions: Iterable[Transaction],
        unit_count: int,
        labels: Mapping[int, str] | None = None,
    ):
        if unit_count < 1:
            raise ValueError("unit_count must be positive")
        txns = sorted(transactions, key=lambda t: (t.time_unit, t.id))
        seen_ids = set()
        for t in txns:
            if t.id in seen_ids:
                raise ValueError(f"duplicate transaction id {t.id}")
            seen_ids.add(t.id)
            if t.time_unit >= unit_count:
                raise ValueError(
                    f"transaction {t.id} has time unit {t.time_unit} "
                    f">= unit_count {unit_count}"
                )
        self.transactions: tuple[Transaction, ...] = tuple(txns)
        self.unit_count = unit_count
        self.labels = dict(labels or {})
        self._by_unit: tuple[tuple[Transaction, ...], ...] | None = None
        self._item_ids: frozenset[int] | None = None
        self._item_txns: dict[int, tuple[int, ...]] | None = None

    def __len__(self) -> int:
        return len(self.transactions)

    @property
    def item_ids(self) -> frozenset[int]:
        if self._item_ids is None:
            ids: set[int] = set()
            for t in self.transactions:
                ids.update(t.quantities)
            self._item_ids = frozenset(ids)
        return self._item_ids

    def unit_transactions(self, unit: int) -> tuple[Transaction, ...]:
        if not 0 <= unit < self.unit_count:
            raise ValueError(f"unit {unit} outside [0, {self.unit_count})")
        if self._by_unit is None:
            buckets: list[list[Transaction]] = [[] for _ in range(self.unit_count)]
            for t in self.transactions:
                buckets[t.time_unit].append(t)
            self._by_unit = tuple(tuple(b) for b in buckets)
        return self._by_unit[unit]

    def transactions_with_item(self, item: int) -> tuple[int, ...]:
        """Indices (into the sorted transaction order) containing the item."""
        if self._item_txns is None:
            index: dict[int, list[int]] = {}
            for i, t in enumerate(self.transactions):
                for it in t.quantities:
                    index.setdefault(it, []).append(i)
            self._item_txns = {it: tuple(v) for it, v in index.items()}
        return self._item_txns.get(item, ())

    def count_support(self, itemset: frozenset[int], scan_limit: int | None = None) -> int:
        """Transactions among the first ``scan_limit`` containing the itemset."""
        limit = len(self.transactions) if scan_limit is None else scan_limit
        if not 0 <= limit <= len(self.transactions):
            raise ValueError(f"scan_limit {limit} outside [0, {len(self.transactions)}]")
        return sum(1 for t in self.transactions[:limit] if itemset <= t.items)

    def occurrence_units(self, itemset: frozenset[int]) -> set[int]:
        """Units holding at least one transaction that contains the itemset."""
        return {t.time_unit for t in self.transactions if itemset <= t.items}


@dataclass(frozen=True)
class Partitioning:
    """Adjacent half-open transaction-index ranges covering the database."""

    boundaries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.boundaries:
            raise ValueError("a partitioning needs at least one range")
        prev_end = 0
        for start, end in self.boundaries:
            if start != prev_end or end <= start:
                raise ValueError("ranges must be adjacent, non-empty and ordered")
            prev_end = end

    @property
    def count(self) -> int:
        return len(self.boundaries)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(end - start for start, end in self.boundaries)


def partition(db: TemporalDatabase, nb: int) -> Partitioning:
    """Split the transaction order into ``nb`` adjacent ranges.

    When the count does not divide evenly the remainder is front-loaded:
    the first ``len(db) % nb`` partitions get one extra transaction.
    """
    n = len(db)
    if not 1 <= nb <= n:
        raise ValueError(f"partition count must be in [1, {n}], got {nb}")
    base, extra = divmod(n, nb)
    bounds = []
    start = 0
    for i in range(nb):
        size = base + (1 if i < extra else 0)
        bounds.append((start, start + size))
        start += size
    return Partitioning(tuple(bounds))


def relative_min_support(
    partitioning: Partitioning, i: int, db_size: int, minsupp: float
) -> float:
    """Threshold after scanning the first ``i`` partitions (1-based).

    Returns ``(transactions scanned so far / db_size) * minsupp``.  A
    cumulative count c passes ``c / db_size >= relative_min_support(i)``
    exactly when ``c / scanned >= minsupp``; the mining drivers compare
    in the scanned-fraction form.
    """
    if not 1 <= i <= partitioning.count:
        raise ValueError(f"partition index must be in [1, {partitioning.count}], got {i}")
    if db_size < 1:
        raise ValueError("db_size must be positive")
    scanned = partitioning.boundaries[i - 1][1]
    return scanned / db_size * minsupp


def _as_text(text) -> str:
    if isinstance(text, bytes):
        return text.decode("ascii")
    if hasattr(text, "read"):
        data = text.read()
        return data.decode("ascii") if isinstance(data, bytes) else data
    return text


def _parse_item_token(token: str, fmt: str, lineno: int) -> tuple[int, int]:
    if fmt == "fimi_quantified" and ":" in token:
        head, _, tail = token.partition(":")
        try:
            item, qty = int(head), int(tail)
        except ValueError:
            raise ParseError(f"malformed token {token!r}", lineno) from None
        if qty == 0:
            raise ParseError(f"item {item} has quantity 0", lineno)
        if qty < 0:
            raise ParseError(f"item {item} has negative quantity {qty}", lineno)
    else:
        try:
            item, qty = int(token), 1
        except ValueError:
            raise ParseError(f"malformed token {token!r}", lineno) from None
    if item < 0:
        raise ParseError(f"negative item id {item}", lineno)
    return item, qty


def _parse_fimi(text: str, fmt: str, units_per_group: int) -> TemporalDatabase:
    txns = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        quantities: dict[int, int] = {}
        for token in line.split():
            item, qty = _parse_item_token(token, fmt, lineno)
            quantities[item] = quantities.get(item, 0) + qty
        idx = len(txns)
        txns.append(Transaction(idx, idx // units_per_group, quantities))
    if not txns:
        raise ParseError("empty input: no transactions")
    return TemporalDatabase(txns, txns[-1].time_unit + 1)


def _parse_csv_timestamped(text: str) -> TemporalDatabase:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise ParseError("empty input: no transactions")
    if [h.strip().lower() for h in header] != ["unit", "items"]:
        raise ParseError("expected header 'unit,items'", line=1)
    txns = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 columns, got {len(row)}", lineno)
        try:
            unit = int(row[0])
        except ValueError:
            raise ParseError(f"malformed unit {row[0]!r}", lineno) from None
        if unit < 0:
            raise ParseError(f"negative time unit {unit}", lineno)
        quantities: dict[int, int] = {}
        for token in row[1].split(";"):
            token = token.strip()
            if not token:
                raise ParseError("empty item id in items list", lineno)
            item, qty = _parse_item_token(token, "fimi", lineno)
            quantities[item] = quantities.get(item, 0) + qty
        txns.append(Transaction(len(txns), unit, quantities))
    if not txns:
        raise ParseError("empty input: no transactions")
    return TemporalDatabase(txns, max(t.time_unit for t in txns) + 1)


def parse_transactions(
    text, fmt: str = "fimi", units_per_group: int = 1
) -> TemporalDatabase:
    """Parse a transaction file into a temporal database.

    ``text`` may be str, bytes or a file-like object.  For the FIMI
    formats transaction i (0-based) gets time unit ``i // units_per_group``;
    ``csv_timestamped`` uses its explicit unit column and ignores the
    grouping parameter.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if units_per_group < 1:
        raise ValueError("units_per_group must be positive")
    content = _as_text(text)
    if fmt == "csv_timestamped":
        return _parse_csv_timestamped(content)
    return _parse_fimi(content, fmt, units_per_group)


def load_transactions(
    path, fmt: str = "fimi", units_per_group: int = 1
) -> TemporalDatabase:
    with open(path, "rb") as fh:
        return parse_transactions(fh, fmt, units_per_group)


def to_fimi(db: TemporalDatabase) -> str:
    """Serialize one transaction per line; quantities != 1 use id:qty tokens.

    Output is parseable as ``fimi_quantified`` (plain ``fimi`` when every
    quantity is 1) and reproduces the entry multiset on round-trip.
    """
    lines = []
    for t in db.transactions:
        tokens = [
            str(item) if qty == 1 else f"{item}:{qty}"
            for item, qty in sorted(t.quantities.items())
        ]
        lines.append(" ".join(tokens))
    return "\n".join(lines) + "\n"


def generate_synthetic(
    n_units: int,
    n_items: int,
    planted_cycles: Sequence[tuple[Iterable[int], Cycle]] = (),
    noise: float = 0.0,
    seed: int = 0,
) -> TemporalDatabase:
    """Build a one-transaction-per-unit database with planted periodicity.

    Every planted (itemset, cycle) pair occurs in all units of the
    cycle's residue class; each noise item is added independently per
    unit with probability ``noise``.  Units that end up with no items
    stay empty.  Deterministic for a fixed seed.
    """
    if n_units < 1 or n_items < 1:
        raise ValueError("n_units and n_items must be positive")
    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise must be a fraction in [0, 1]")
    plants = []
    for itemset, cycle in planted_cycles:
        items = frozenset(itemset)
        if not items:
            raise ValueError("planted itemset must be non-empty")
        if any(not 0 <= i < n_items for i in items):
            raise ValueError(f"planted items {sorted(items)} outside [0, {n_items})")
        if cycle.length > n_units // 2:
            raise ValueError(
                f"planted cycle {cycle} cannot repeat twice in {n_units} units"
            )
        plants.append((items, cycle))
    rng = random.Random(seed)
    txns = []
    for unit in range(n_units):
        present: set[int] = set()
        for items, cycle in plants:
            if cycle.covers(unit):
                present.update(items)
        if noise:
            for item in range(n_items):
                if rng.random() < noise:
                    present.add(item)
        if present:
            txns.append(Transaction(len(txns), unit, {i: 1 for i in sorted(present)}))
    return TemporalDatabase(txns, n_units)
