"""Run configuration, mining reports, and the benchmark harness.

A run is a (dataset, algorithm, parameters) triple; the harness layers
two batch modes on top: ``sweep`` varies one dimension and emits one CSV
row per value, ``compare`` runs several configs against one dataset and
cross-checks their rule sets.  Reports are deterministic for a fixed
config; only the timing field varies between runs.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from collections import Counter
from dataclasses import asdict, dataclass, field, replace

from .constraints import ConstraintSet, parse_aggregate
from .mining import ALGORITHMS, MiningCounters, MiningParams, mine
from .rules import CyclicRule
from .temporal_db import FORMATS, TemporalDatabase, load_transactions

SCHEMA_VERSION = 1
OUT_FORMATS = ("json", "csv", "text")
SWEEP_DIMENSIONS = ("minsupp", "partitions", "cycle_length", "constraint_count")
UNITWISE = ("sequential", "interleaved")


@dataclass(frozen=True)
class RunConfig:
    """One mining run, mirroring the CLI flag surface."""

    algorithm: str
    minsupp: float
    minconf: float
    input: str | None = None
    format: str = "fimi"
    units_per_group: int = 1
    partitions: int = 1
    cycle_length: int | None = None
    l_min: int = 1
    l_max: int | None = None
    prm: tuple[int, ...] | None = None
    cl: tuple[int, ...] | None = None
    aggregates: tuple[str, ...] = ()
    allow_empty_premise: bool = False
    out_format: str = "json"
    seed: int | None = None  # provenance of synthetic inputs, echoed only

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"--algorithm must be one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}"
            )
        if self.format not in FORMATS:
            raise ValueError(f"--format must be one of {', '.join(FORMATS)}")
        if self.out_format not in OUT_FORMATS:
            raise ValueError(f"--out-format must be one of {', '.join(OUT_FORMATS)}")
        constrained = (
            self.prm is not None or self.cl is not None or bool(self.aggregates)
        )
        if constrained and self.algorithm != "cbcar":
            raise ValueError("--prm/--cl/--agg require --algorithm cbcar")
        if self.algorithm in UNITWISE and self.cycle_length is not None:
            raise ValueError(
                "--cycle-length applies to pcar/cbcar; use --lmin/--lmax "
                f"with --algorithm {self.algorithm}"
            )
        if self.algorithm not in UNITWISE and self.cycle_length is None:
            raise ValueError(f"--cycle-length is required for --algorithm {self.algorithm}")
        for text in self.aggregates:
            parse_aggregate(text)  # fail fast with the offending --agg value

    def mining_params(self) -> MiningParams:
        return MiningParams(
            minsupp=self.minsupp,
            minconf=self.minconf,
            partitions=self.partitions,
            cycle_length=self.cycle_length,
            l_min=self.l_min,
            l_max=self.l_max,
            allow_empty_premise=self.allow_empty_premise,
        )

    def constraint_set(self) -> ConstraintSet:
        return ConstraintSet(
            premise_items=frozenset(self.prm) if self.prm is not None else None,
            conclusion_items=frozenset(self.cl) if self.cl is not None else None,
            aggregates=tuple(parse_aggregate(a) for a in self.aggregates),
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["prm"] = list(self.prm) if self.prm is not None else None
        d["cl"] = list(self.cl) if self.cl is not None else None
        d["aggregates"] = list(self.aggregates)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        for key in ("prm", "cl"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        if "aggregates" in d:
            d["aggregates"] = tuple(d["aggregates"])
        return cls(**d)


@dataclass
class MiningReport:
    config: RunConfig
    rules: tuple[CyclicRule, ...]
    itemset_counts: dict[int, int]
    timing_ms: float
    counters: MiningCounters

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "rules": [
                {
                    "premise": list(r.premise),
                    "conclusion": list(r.conclusion),
                    "support": r.support,
                    "confidence": r.confidence,
                    "cycles": [{"l": c.length, "o": c.offset} for c in r.cycles],
                }
                for r in self.rules
            ],
            "counts": {str(k): v for k, v in sorted(self.itemset_counts.items())},
            "timing_ms": self.timing_ms,
            "counters": {
                "transactions_touched": self.counters.transactions_touched,
                "units_evaluated": self.counters.units_evaluated,
            },
        }


def load_database(config: RunConfig) -> TemporalDatabase:
    if config.input is None:
        raise ValueError("--input is required")
    return load_transactions(config.input, config.format, config.units_per_group)


def run(config: RunConfig, db: TemporalDatabase | None = None) -> MiningReport:
    """Execute one config; deterministic except for the timing field."""
    if db is None:
        db = load_database(config)
    params = config.mining_params()
    constraints = config.constraint_set()
    started = time.perf_counter()
    outcome = mine(db, config.algorithm, params, constraints)
    timing_ms = (time.perf_counter() - started) * 1000.0
    return MiningReport(
        config, outcome.rules, outcome.itemset_counts, timing_ms, outcome.counters
    )


def top_frequent_items(db: TemporalDatabase, k: int) -> list[int]:
    """The k most frequent items by transaction count (ties by id)."""
    counts: Counter[int] = Counter()
    for t in db.transactions:
        counts.update(t.items)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [item for item, _ in ranked[:k]]


def _apply_dimension(
    config: RunConfig, dimension: str, value, db: TemporalDatabase
) -> RunConfig:
    if dimension == "minsupp":
        return replace(config, minsupp=float(value))
    if dimension == "partitions":
        return replace(config, partitions=int(value))
    if dimension == "cycle_length":
        if config.algorithm in UNITWISE:
            raise ValueError("--sweep cycle_length applies to pcar/cbcar only")
        return replace(config, cycle_length=int(value))
    if dimension == "constraint_count":
        if config.algorithm != "cbcar":
            raise ValueError("--sweep constraint_count requires --algorithm cbcar")
        extra = tuple(f"SUM({item})>=1" for item in top_frequent_items(db, int(value)))
        return replace(config, aggregates=config.aggregates + extra)
    raise ValueError(
        f"--sweep must be one of {', '.join(SWEEP_DIMENSIONS)}, got {dimension!r}"
    )


@dataclass
class SweepRow:
    value: float
    timing_ms: float
    rule_count: int
    transactions_touched: int
    units_evaluated: int


@dataclass
class SweepResult:
    dimension: str
    rows: list[SweepRow]
    error: str | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            [self.dimension, "timing_ms", "rule_count", "transactions_touched", "units_evaluated"]
        )
        for row in self.rows:
            writer.writerow(
                [
                    f"{row.value:g}",
                    f"{row.timing_ms:.3f}",
                    row.rule_count,
                    row.transactions_touched,
                    row.units_evaluated,
                ]
            )
        return buf.getvalue()


def sweep(
    config: RunConfig,
    dimension: str,
    values,
    repeat: int = 1,
    db: TemporalDatabase | None = None,
) -> SweepResult:
    """One row per value; median timing over ``repeat`` runs.

    A failing row stops the sweep; rows computed so far are kept and the
    failure is recorded on the result instead of being raised, so partial
    output can still be flushed.
    """
    if dimension not in SWEEP_DIMENSIONS:
        raise ValueError(
            f"--sweep must be one of {', '.join(SWEEP_DIMENSIONS)}, got {dimension!r}"
        )
    values = list(values)
    if not values:
        raise ValueError("--values must be a non-empty list")
    if repeat < 1:
        raise ValueError("--repeat must be >= 1")
    if db is None:
        db = load_database(config)
    rows: list[SweepRow] = []
    for value in values:
        try:
            derived = _apply_dimension(config, dimension, value, db)
            reports = [run(derived, db=db) for _ in range(repeat)]
        except Exception as exc:  # abort, flush partial rows
            return SweepResult(dimension, rows, error=f"{dimension}={value}: {exc}")
        first = reports[0]
        rows.append(
            SweepRow(
                value=float(value),
                timing_ms=statistics.median(r.timing_ms for r in reports),
                rule_count=len(first.rules),
                transactions_touched=first.counters.transactions_touched,
                units_evaluated=first.counters.units_evaluated,
            )
        )
    return SweepResult(dimension, rows)


@dataclass
class CompareRow:
    algorithm: str
    timing_ms: float
    rule_count: int
    transactions_touched: int
    units_evaluated: int
    rules_vs_first: str


@dataclass
class CompareResult:
    rows: list[CompareRow]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            [
                "algorithm",
                "timing_ms",
                "rule_count",
                "transactions_touched",
                "units_evaluated",
                "rules_vs_first",
            ]
        )
        for row in self.rows:
            writer.writerow(
                [
                    row.algorithm,
                    f"{row.timing_ms:.3f}",
                    row.rule_count,
                    row.transactions_touched,
                    row.units_evaluated,
                    row.rules_vs_first,
                ]
            )
        return buf.getvalue()


def compare(configs, db: TemporalDatabase | None = None) -> CompareResult:
    """Run several configs on one dataset and cross-check their rule sets.

    Rule sets are projected to (premise, conclusion) pairs so drivers
    with different cycle parameters stay comparable.
    """
    configs = list(configs)
    if len(configs) < 2:
        raise ValueError("compare needs at least two configs")
    datasets = {(c.input, c.format, c.units_per_group) for c in configs}
    if len(datasets) != 1:
        raise ValueError("compare requires all configs to share one input dataset")
    if db is None:
        db = load_database(configs[0])
    reports = [run(c, db=db) for c in configs]
    baseline = {(r.premise, r.conclusion) for r in reports[0].rules}
    rows = []
    for i, report in enumerate(reports):
        projected = {(r.premise, r.conclusion) for r in report.rules}
        if i == 0:
            relation = "baseline"
        elif projected == baseline:
            relation = "equal"
        elif projected < baseline:
            relation = "subset"
        elif projected > baseline:
            relation = "superset"
        else:
            relation = "differs"
        rows.append(
            CompareRow(
                algorithm=report.config.algorithm,
                timing_ms=report.timing_ms,
                rule_count=len(report.rules),
                transactions_touched=report.counters.transactions_touched,
                units_evaluated=report.counters.units_evaluated,
                rules_vs_first=relation,
            )
        )
    return CompareResult(rows)


def rules_to_csv(report: MiningReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["premise", "conclusion", "support", "confidence", "cycles"])
    for r in report.rules:
        writer.writerow(
            [
                " ".join(map(str, r.premise)),
                " ".join(map(str, r.conclusion)),
                f"{r.support:g}",
                f"{r.confidence:g}",
                "; ".join(str(c) for c in r.cycles),
            ]
        )
    return buf.getvalue()


def report_to_text(report: MiningReport) -> str:
    lines = [
        f"algorithm: {report.config.algorithm}",
        f"rules: {len(report.rules)}",
        f"frequent itemsets per size: "
        + (
            ", ".join(f"{k}:{v}" for k, v in sorted(report.itemset_counts.items()))
            or "none"
        ),
        f"timing_ms: {report.timing_ms:.3f}",
        f"transactions_touched: {report.counters.transactions_touched}",
        f"units_evaluated: {report.counters.units_evaluated}",
        "",
    ]
    lines.extend(str(r) for r in report.rules)
    return "\n".join(lines) + "\n"
