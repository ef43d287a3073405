"""Cyclic association rule mining over temporal transaction databases."""

__version__ = "0.1.0"

from .constraints import AggregateConstraint, ConstraintSet, parse_aggregate
from .cycles import (
    Cycle,
    CycleCandidateSet,
    OccurrenceSequence,
    detect_cycles_exhaustive,
    eliminate,
    eliminate_sweep,
    is_cyclic,
    minimal_cycles,
    prune_candidates,
    units_to_scan,
)
from .mining import (
    ItemsetRecord,
    MiningOutcome,
    MiningParams,
    apriori_gen,
    cbcar,
    interleaved,
    mine,
    pcar,
    sequential,
    support,
    unit_holds,
)
from .rules import CyclicRule, confidence, generate_rules, rule_cycles
from .temporal_db import (
    ParseError,
    Partitioning,
    TemporalDatabase,
    Transaction,
    generate_synthetic,
    load_transactions,
    parse_transactions,
    partition,
    relative_min_support,
    to_fimi,
)

__all__ = [
    "AggregateConstraint",
    "ConstraintSet",
    "Cycle",
    "CycleCandidateSet",
    "CyclicRule",
    "ItemsetRecord",
    "MiningOutcome",
    "MiningParams",
    "OccurrenceSequence",
    "ParseError",
    "Partitioning",
    "TemporalDatabase",
    "Transaction",
    "apriori_gen",
    "cbcar",
    "confidence",
    "detect_cycles_exhaustive",
    "eliminate",
    "eliminate_sweep",
    "generate_rules",
    "generate_synthetic",
    "interleaved",
    "is_cyclic",
    "load_transactions",
    "mine",
    "minimal_cycles",
    "parse_aggregate",
    "parse_transactions",
    "partition",
    "pcar",
    "prune_candidates",
    "relative_min_support",
    "rule_cycles",
    "sequential",
    "support",
    "to_fimi",
    "unit_holds",
    "units_to_scan",
]
