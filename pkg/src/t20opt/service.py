"""HTTP service exposing evaluation, optimization, and audit endpoints.

Optimizations and audits run as in-process jobs on a bounded worker pool
and are polled at GET /jobs/{id}; the reported best value never decreases
across polls. Evaluation is synchronous. Responses reuse the CLI payload
builders, so service and CLI output are identical for identical inputs.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .audit import run_audit
from .batting import BattingSearchConfig, optimize_batting
from .bowling import SAConfig, optimize_bowling
from .engine.mc import simulate_batting, simulate_bowling
from .errors import (
    InfeasiblePlanError,
    InfeasibleScenarioError,
    ScenarioError,
    T20OptError,
)
from .profiles import ProfileStore
from .reporting import evaluate_payload, optimize_batting_payload, optimize_bowling_payload
from .scenarios import BATTING_KIND, BOWLING_KIND, LoadedScenario, parse_scenario

UNPROCESSABLE = (InfeasibleScenarioError, InfeasiblePlanError)


class EvaluateRequest(BaseModel):
    scenario: dict
    order: Optional[list[str]] = None
    plan: Optional[list[str]] = None
    sims: int = 50_000
    seed: int = 0


class OptimizeBattingRequest(BaseModel):
    scenario: dict
    n1: int = 3_000
    n2: int = 20_000
    top_k: int = 10
    seed: int = 0


class OptimizeBowlingRequest(BaseModel):
    scenario: dict
    t0: float = 0.05
    eps: float = 1e-6
    steps: int = 8_000
    n_fast: int = 5_000
    n_refine: int = 30_000
    top_k: int = 10
    seed: int = 0


class AuditRequest(BaseModel):
    scenario: dict
    # batting knobs
    n1: int = 3_000
    n2: int = 20_000
    # bowling knobs
    t0: float = 0.05
    eps: float = 1e-6
    steps: int = 8_000
    n_fast: int = 5_000
    n_refine: int = 30_000
    top_k: int = 10
    seed: int = 0


@dataclass
class Job:
    job_id: str
    kind: str
    status: str = "queued"  # queued | running | done | failed
    progress: dict = field(default_factory=lambda: {"step": 0, "best_v_hat": None})
    result: Optional[dict] = None
    error: Optional[str] = None

    def snapshot(self) -> dict:
        out: dict[str, Any] = {
            "job_id": self.job_id,
            "kind": self.kind,
            "status": self.status,
            "progress": dict(self.progress),
        }
        if self.result is not None:
            out["result"] = self.result
        if self.error is not None:
            out["error"] = self.error
        return out


class JobTable:
    """In-process job store with a bounded worker pool."""

    def __init__(self, workers: int = 2):
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._ids = itertools.count(1)
        self._pool = ThreadPoolExecutor(max_workers=workers)

    def submit(self, kind: str, work) -> str:
        with self._lock:
            job_id = f"job-{next(self._ids)}"
            job = Job(job_id=job_id, kind=kind)
            self._jobs[job_id] = job

        def progress(step: int, best_v: float) -> None:
            with self._lock:
                job.progress = {"step": step, "best_v_hat": best_v}

        def run() -> None:
            with self._lock:
                job.status = "running"
            try:
                result = work(progress)
                with self._lock:
                    job.result = result
                    job.status = "done"
            except Exception as exc:  # surfaced to the poller, not swallowed
                with self._lock:
                    job.error = f"{type(exc).__name__}: {exc}"
                    job.status = "failed"

        self._pool.submit(run)
        return job_id

    def get(self, job_id: str) -> Optional[dict]:
        with self._lock:
            job = self._jobs.get(job_id)
            return job.snapshot() if job else None


def create_app(
    store_path: Optional[str] = None,
    workers: int = 2,
    ui_dir: Optional[str] = None,
    fixtures_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="t20opt", version="0.1.0")
    store: Optional[ProfileStore] = ProfileStore.load(store_path) if store_path else None
    jobs = JobTable(workers=workers)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    if fixtures_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/fixtures", StaticFiles(directory=fixtures_dir), name="fixtures")

    def load(data: dict) -> LoadedScenario:
        return parse_scenario(data, store=store)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        details = [
            {"field": ".".join(str(p) for p in err.get("loc", [])), "message": err.get("msg", "")}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "invalid body", "details": details})

    @app.exception_handler(T20OptError)
    async def on_domain_error(request: Request, exc: T20OptError):
        # infeasible scenarios/plans are semantically unprocessable (422);
        # everything else the domain rejects is a bad request (400)
        status = 422 if isinstance(exc, UNPROCESSABLE) else 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/evaluate/batting")
    def evaluate_batting(req: EvaluateRequest) -> dict:
        loaded = load(req.scenario)
        if loaded.kind != BATTING_KIND:
            raise ScenarioError(f"kind: expected a batting scenario, got {loaded.kind!r}")
        decision = tuple(req.order) if req.order else loaded.actual_decision
        if decision is None:
            raise ScenarioError("order: give an order or record actual_decision in the scenario")
        result = simulate_batting(loaded.scenario, decision, req.sims, req.seed)
        return evaluate_payload(loaded, decision, result, req.sims, req.seed)

    @app.post("/evaluate/bowling")
    def evaluate_bowling(req: EvaluateRequest) -> dict:
        loaded = load(req.scenario)
        if loaded.kind != BOWLING_KIND:
            raise ScenarioError(f"kind: expected a bowling scenario, got {loaded.kind!r}")
        decision = tuple(req.plan) if req.plan else loaded.actual_decision
        if decision is None:
            raise ScenarioError("plan: give a plan or record actual_decision in the scenario")
        result = simulate_bowling(loaded.scenario, decision, req.sims, req.seed)
        return evaluate_payload(loaded, decision, result, req.sims, req.seed)

    @app.post("/optimize/batting")
    def optimize_batting_endpoint(req: OptimizeBattingRequest) -> dict:
        loaded = load(req.scenario)
        if loaded.kind != BATTING_KIND:
            raise ScenarioError(f"kind: expected a batting scenario, got {loaded.kind!r}")
        config = BattingSearchConfig(n1=req.n1, k=req.top_k, n2=req.n2, seed=req.seed)

        def work(progress) -> dict:
            ranked = optimize_batting(loaded.scenario, config)
            if ranked:
                progress(len(ranked), ranked[0].best.v_hat)
            return optimize_batting_payload(loaded, ranked, asdict(config), req.seed)

        return {"job_id": jobs.submit("optimize/batting", work)}

    @app.post("/optimize/bowling")
    def optimize_bowling_endpoint(req: OptimizeBowlingRequest) -> dict:
        loaded = load(req.scenario)
        if loaded.kind != BOWLING_KIND:
            raise ScenarioError(f"kind: expected a bowling scenario, got {loaded.kind!r}")
        config = SAConfig(
            t0=req.t0,
            eps=req.eps,
            steps=req.steps,
            n_fast=req.n_fast,
            n_refine=req.n_refine,
            top_k=req.top_k,
            seed=req.seed,
        )

        def work(progress) -> dict:
            ranked = optimize_bowling(loaded.scenario, config, progress=progress)
            return optimize_bowling_payload(loaded, ranked, asdict(config), req.seed)

        return {"job_id": jobs.submit("optimize/bowling", work)}

    @app.post("/audit")
    def audit_endpoint(req: AuditRequest) -> dict:
        loaded = load(req.scenario)
        if loaded.actual_decision is None:
            raise ScenarioError("actual_decision: an audit needs the actually chosen decision")
        if loaded.kind == BATTING_KIND:
            config = BattingSearchConfig(n1=req.n1, k=req.top_k, n2=req.n2, seed=req.seed)
        else:
            config = SAConfig(
                t0=req.t0,
                eps=req.eps,
                steps=req.steps,
                n_fast=req.n_fast,
                n_refine=req.n_refine,
                top_k=req.top_k,
                seed=req.seed,
            )

        def work(progress) -> dict:
            return run_audit(loaded, config, progress=progress).as_dict()

        return {"job_id": jobs.submit("audit", work)}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        snapshot = jobs.get(job_id)
        if snapshot is None:
            return JSONResponse(status_code=404, content={"error": f"no such job: {job_id}"})
        return snapshot

    @app.get("/profiles/{player}")
    def get_profile(player: str):
        if store is None:
            return JSONResponse(
                status_code=404, content={"error": "no profile store loaded"}
            )
        out: dict[str, Any] = {"player": player, "corpus_hash": store.corpus_hash}
        found = False
        for role in ("batsman", "bowler"):
            phases = store.player_phases(player, role)
            if phases:
                found = True
            out[role] = {
                phase.value: {
                    "n": prof.n,
                    "lambda": prof.lam,
                    "sr": prof.sr,
                    "er": prof.er,
                    "p_w": prof.p_w,
                    "p_dot": prof.p_dot,
                    "vector": prof.vector.as_dict(),
                }
                for phase, prof in phases.items()
            }
        if not found:
            return JSONResponse(
                status_code=404, content={"error": f"player {player!r} not in the profile store"}
            )
        return out

    return app
