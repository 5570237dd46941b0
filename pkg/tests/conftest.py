from __future__ import annotations

from pathlib import Path

import pytest

from t20opt.engine.mc import BattingScenario, BowlerResource, BowlingScenario, PhaseProfiles
from t20opt.outcomes import BALLS_PER_OVER, OutcomeVector, Phase

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"

KKR_FIXTURE = FIXTURES / "kkr_mi_over12.json"
GT_FIXTURE = FIXTURES / "gt_pbks_over10.json"
CORPUS = FIXTURES / "corpus_small.csv"


def vec(**kwargs: float) -> OutcomeVector:
    """Shorthand: vec(W=0.05, d=0.35, s1=0.35, ...) with d->dot, sN->N runs."""
    rename = {"W": "W", "d": "0", "s1": "1", "s2": "2", "s3": "3", "s4": "4", "s6": "6"}
    return OutcomeVector.from_mapping({rename[k]: v for k, v in kwargs.items()})


def all_phase(v: OutcomeVector) -> dict[Phase, OutcomeVector]:
    return {Phase.PP: v, Phase.MI: v, Phase.DE: v}


def batting_toy(
    r0: int,
    b0: int,
    batter_vectors: list[OutcomeVector],
    ns_vector: OutcomeVector,
    initial_striker: str = "new_batsman",
) -> BattingScenario:
    pool = tuple(
        PhaseProfiles(f"B{i}", all_phase(v)) for i, v in enumerate(batter_vectors)
    )
    return BattingScenario(
        r0=r0,
        b0=b0,
        pool=pool,
        fixed_non_striker=PhaseProfiles("NS", all_phase(ns_vector)),
        initial_striker=initial_striker,
    )


def bowling_toy(
    d0: int,
    n_overs: int,
    quotas: dict[str, int],
    vectors: dict[str, OutcomeVector],
    w_max: int = 3,
    prev_bowler: str | None = None,
) -> BowlingScenario:
    first = 20 - n_overs
    bowlers = {
        name: BowlerResource(name, quotas[name], all_phase(vectors[name])) for name in quotas
    }
    return BowlingScenario(
        d0=d0,
        b0=BALLS_PER_OVER * n_overs,
        w_max=w_max,
        slots=tuple(range(first, 20)),
        bowlers=bowlers,
        prev_bowler=prev_bowler,
    )


@pytest.fixture(scope="session")
def corpus_result():
    from t20opt.ingest import load_corpus

    return load_corpus(CORPUS)
