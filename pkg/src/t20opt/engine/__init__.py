"""Match-state engine: transitions, Monte Carlo estimation, exact induction."""

from .state import MatchState, rotate_strike, transition
from .mc import (
    BattingScenario,
    BowlerResource,
    BowlingPlan,
    BowlingScenario,
    EvalResult,
    PhaseProfiles,
    simulate_batting,
    simulate_bowling,
    standard_error,
)
from .exact import exact_batting_value, exact_bowling_value
from .rng import derive_seed, plan_digest

__all__ = [
    "MatchState",
    "transition",
    "rotate_strike",
    "EvalResult",
    "standard_error",
    "PhaseProfiles",
    "BattingScenario",
    "BowlingScenario",
    "BowlerResource",
    "BowlingPlan",
    "simulate_batting",
    "simulate_bowling",
    "exact_batting_value",
    "exact_bowling_value",
    "derive_seed",
    "plan_digest",
]
