"""Result payload builders shared by the CLI and the HTTP service.

Both surfaces must emit identical JSON for identical inputs and seeds, so
the payload shapes live here and nowhere else. Probabilities appear with
full precision plus a 1-decimal percentage alongside; every payload embeds
(seed, config, corpus hash) so it can be reproduced bit-exactly.
"""

from __future__ import annotations

from typing import Sequence

from .audit import eval_dict, order_candidate_dict, plan_candidate_dict
from .batting import OrderCandidate
from .bowling import PlanCandidate
from .engine.mc import EvalResult
from .scenarios import LoadedScenario


def provenance(loaded: LoadedScenario, seed: int, config: dict) -> dict:
    return {
        "seed": seed,
        "config": config,
        "corpus_hash": loaded.corpus_hash,
        "scenario_hash": loaded.scenario_hash,
    }


def evaluate_payload(
    loaded: LoadedScenario,
    decision: Sequence[str],
    result: EvalResult,
    sims: int,
    seed: int,
) -> dict:
    return {
        "kind": loaded.kind,
        "decision": list(decision),
        **eval_dict(result),
        **provenance(loaded, seed, {"sims": sims}),
    }


def optimize_batting_payload(
    loaded: LoadedScenario, ranked: list[OrderCandidate], config: dict, seed: int
) -> dict:
    return {
        "kind": loaded.kind,
        "optimal": {"decision": list(ranked[0].order), **eval_dict(ranked[0].best)},
        "ranked": [order_candidate_dict(c, i + 1) for i, c in enumerate(ranked)],
        **provenance(loaded, seed, config),
    }


def optimize_bowling_payload(
    loaded: LoadedScenario, ranked: list[PlanCandidate], config: dict, seed: int
) -> dict:
    return {
        "kind": loaded.kind,
        "optimal": {"decision": list(ranked[0].plan), **eval_dict(ranked[0].best)},
        "ranked": [
            plan_candidate_dict(c, i + 1, loaded.scenario.slots) for i, c in enumerate(ranked)
        ],
        **provenance(loaded, seed, config),
    }
