"""Decision audits: actual versus optimal, with a reproducibility envelope.

An audit optimizes the scenario, re-evaluates the actually chosen decision
at refinement precision on a fresh substream, and reports the gap in
percentage points with a two-evaluation z-score. Every report embeds the
seed, the config, and the corpus hash needed to reproduce it bit-exactly.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Union

from .batting import (
    BattingSearchConfig,
    OrderCandidate,
    evaluate_actual_order,
    optimize_batting,
)
from .bowling import (
    PlanCandidate,
    SAConfig,
    audit_z_score,
    evaluate_actual_plan,
    optimize_bowling,
    plan_counts,
)
from .engine.mc import EvalResult
from .errors import ScenarioError
from .scenarios import BATTING_KIND, BOWLING_KIND, LoadedScenario


def _pct(x: float) -> float:
    return round(100.0 * x, 1)


def eval_dict(result: EvalResult) -> dict:
    d = result.as_dict()
    d["v_hat_pct"] = _pct(result.v_hat)
    d["se_pct"] = round(100.0 * result.se, 2)
    return d


def order_candidate_dict(c: OrderCandidate, rank: int) -> dict:
    row = {
        "rank": rank,
        "order": list(c.order),
        "pass": 2 if c.pass2 is not None else 1,
        "pass1": eval_dict(c.pass1),
    }
    if c.pass2 is not None:
        row["pass2"] = eval_dict(c.pass2)
    return row


def plan_candidate_dict(c: PlanCandidate, rank: int, slots: tuple[int, ...]) -> dict:
    row = {
        "rank": rank,
        "plan": list(c.plan),
        "assignment": {str(over): bowler for over, bowler in zip(slots, c.plan)},
        "fast": eval_dict(c.fast),
    }
    if c.refined is not None:
        row["refined"] = eval_dict(c.refined)
    return row


@dataclass(frozen=True)
class AuditReport:
    """Actual vs optimal for one scenario, plus the full ranked table."""

    kind: str
    actual_decision: tuple[str, ...]
    actual: EvalResult
    optimal_decision: tuple[str, ...]
    optimal: EvalResult
    gap_pp: float
    z: float
    ranked: list[dict]
    config: dict
    corpus_hash: str
    seed: int
    scenario_hash: str = ""
    constraint_stats: Optional[dict] = None

    def as_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "actual": {"decision": list(self.actual_decision), **eval_dict(self.actual)},
            "optimal": {"decision": list(self.optimal_decision), **eval_dict(self.optimal)},
            "gap": self.optimal.v_hat - self.actual.v_hat,
            "gap_pp": self.gap_pp,
            "gap_pp_display": round(self.gap_pp, 1),
            "z": self.z,
            "ranked": self.ranked,
            "config": self.config,
            "corpus_hash": self.corpus_hash,
            "scenario_hash": self.scenario_hash,
            "seed": self.seed,
        }
        if self.constraint_stats is not None:
            out["constraint_stats"] = self.constraint_stats
        return out


def run_audit(
    loaded: LoadedScenario,
    config: Union[BattingSearchConfig, SAConfig],
    progress=None,
) -> AuditReport:
    """Optimize the scenario and compare against its recorded actual decision."""
    if loaded.actual_decision is None:
        raise ScenarioError("actual_decision: an audit needs the actually chosen decision")

    if loaded.kind == BATTING_KIND:
        if not isinstance(config, BattingSearchConfig):
            raise ValueError("batting audits take a BattingSearchConfig")
        ranked = optimize_batting(loaded.scenario, config)
        actual = evaluate_actual_order(loaded.scenario, loaded.actual_decision, config)
        best = ranked[0]
        optimal_eval = best.pass2
        rows = [order_candidate_dict(c, i + 1) for i, c in enumerate(ranked)]
        stats = None
    elif loaded.kind == BOWLING_KIND:
        if not isinstance(config, SAConfig):
            raise ValueError("bowling audits take an SAConfig")
        ranked = optimize_bowling(loaded.scenario, config, progress=progress)
        actual = evaluate_actual_plan(loaded.scenario, loaded.actual_decision, config)
        best = ranked[0]
        optimal_eval = best.refined
        rows = [
            plan_candidate_dict(c, i + 1, loaded.scenario.slots) for i, c in enumerate(ranked)
        ]
        stats = plan_counts(loaded.scenario)
    else:
        raise ScenarioError(f"kind: cannot audit scenario kind {loaded.kind!r}")

    gap = optimal_eval.v_hat - actual.v_hat
    # conservative two-evaluation z: use the larger of the two standard errors
    z = audit_z_score(gap, max(actual.se, optimal_eval.se))
    return AuditReport(
        kind=loaded.kind,
        actual_decision=loaded.actual_decision,
        actual=actual,
        optimal_decision=best.plan if loaded.kind == BOWLING_KIND else best.order,
        optimal=optimal_eval,
        gap_pp=100.0 * gap,
        z=z,
        ranked=rows,
        config=asdict(config),
        corpus_hash=loaded.corpus_hash,
        seed=config.seed,
        scenario_hash=loaded.scenario_hash,
        constraint_stats=stats,
    )
