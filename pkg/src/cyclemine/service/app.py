"""FastAPI service exposing the mining runs, sweeps and comparisons.

Dataset paths in requests are resolved on the service host; parse once
and fire as many configs at the same file as needed.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, HTTPException

from .. import __version__, bench
from ..cycles import Cycle
from ..temporal_db import ParseError, generate_synthetic, to_fimi
from .schemas import (
    CompareOut,
    CompareRequest,
    GenerateOut,
    GenerateRequest,
    HealthOut,
    ReportOut,
    RunRequest,
    SweepOut,
    SweepRequest,
)

app = FastAPI(title="cyclemine", version=__version__)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


@app.get("/health", response_model=HealthOut)
def health() -> HealthOut:
    return HealthOut(status="ok", version=__version__)


@app.post("/run", response_model=ReportOut)
def run_endpoint(request: RunRequest) -> ReportOut:
    try:
        report = bench.run(request.to_run_config())
    except (ValueError, OSError) as exc:
        raise _bad_request(exc) from exc
    return ReportOut.from_report(report)


@app.post("/sweep", response_model=SweepOut)
def sweep_endpoint(request: SweepRequest) -> SweepOut:
    try:
        result = bench.sweep(
            request.config.to_run_config(),
            request.dimension,
            request.values,
            repeat=request.repeat,
        )
    except (ValueError, OSError) as exc:
        raise _bad_request(exc) from exc
    return SweepOut(
        dimension=result.dimension,
        rows=[asdict(row) for row in result.rows],
        error=result.error,
    )


@app.post("/compare", response_model=CompareOut)
def compare_endpoint(request: CompareRequest) -> CompareOut:
    try:
        result = bench.compare([c.to_run_config() for c in request.configs])
    except (ValueError, OSError) as exc:
        raise _bad_request(exc) from exc
    return CompareOut(rows=[asdict(row) for row in result.rows])


@app.post("/generate", response_model=GenerateOut)
def generate_endpoint(request: GenerateRequest) -> GenerateOut:
    try:
        db = generate_synthetic(
            request.n_units,
            request.n_items,
            [(p.items, Cycle(p.length, p.offset)) for p in request.planted],
            noise=request.noise,
            seed=request.seed,
        )
    except (ValueError, ParseError) as exc:
        raise _bad_request(exc) from exc
    return GenerateOut(fimi=to_fimi(db), transactions=len(db), unit_count=db.unit_count)
