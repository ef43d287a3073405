"""Pydantic request/response models for the mining service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..bench import MiningReport, RunConfig


class RunRequest(BaseModel):
    algorithm: Literal["sequential", "interleaved", "pcar", "cbcar"]
    minsupp: float
    minconf: float
    input: str | None = None
    format: Literal["fimi", "fimi_quantified", "csv_timestamped"] = "fimi"
    units_per_group: int = 1
    partitions: int = 1
    cycle_length: int | None = None
    l_min: int = 1
    l_max: int | None = None
    prm: list[int] | None = None
    cl: list[int] | None = None
    aggregates: list[str] = Field(default_factory=list)
    allow_empty_premise: bool = False
    out_format: Literal["json", "csv", "text"] = "json"
    seed: int | None = None

    def to_run_config(self) -> RunConfig:
        return RunConfig.from_dict(self.model_dump())


class CycleOut(BaseModel):
    l: int
    o: int


class RuleOut(BaseModel):
    premise: list[int]
    conclusion: list[int]
    support: float
    confidence: float
    cycles: list[CycleOut]


class CountersOut(BaseModel):
    transactions_touched: int
    units_evaluated: int


class ReportOut(BaseModel):
    schema_version: int
    config: RunRequest
    rules: list[RuleOut]
    counts: dict[str, int]
    timing_ms: float
    counters: CountersOut

    @classmethod
    def from_report(cls, report: MiningReport) -> "ReportOut":
        return cls.model_validate(report.to_dict())


class SweepRequest(BaseModel):
    config: RunRequest
    dimension: Literal["minsupp", "partitions", "cycle_length", "constraint_count"]
    values: list[float]
    repeat: int = 1


class SweepRowOut(BaseModel):
    value: float
    timing_ms: float
    rule_count: int
    transactions_touched: int
    units_evaluated: int


class SweepOut(BaseModel):
    dimension: str
    rows: list[SweepRowOut]
    error: str | None = None


class CompareRequest(BaseModel):
    configs: list[RunRequest]


class CompareRowOut(BaseModel):
    algorithm: str
    timing_ms: float
    rule_count: int
    transactions_touched: int
    units_evaluated: int
    rules_vs_first: str


class CompareOut(BaseModel):
    rows: list[CompareRowOut]


class PlantedCycleIn(BaseModel):
    items: list[int]
    length: int
    offset: int


class GenerateRequest(BaseModel):
    n_units: int
    n_items: int
    planted: list[PlantedCycleIn] = Field(default_factory=list)
    noise: float = 0.0
    seed: int = 0


class GenerateOut(BaseModel):
    fimi: str
    transactions: int
    unit_count: int


class HealthOut(BaseModel):
    status: str
    version: str
