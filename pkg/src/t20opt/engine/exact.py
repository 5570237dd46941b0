"""Exact finite-horizon values by memoized backward induction.

These evaluators mirror the Monte Carlo simulators rule for rule (strike
rotation, wicket replacement, pool exhaustion, phase lookup) but compute
the value exactly, so they serve as oracles for small instances. A state
budget guards against accidentally tabulating something laptop-hostile.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from ..errors import CapacityError, InfeasiblePlanError
from ..outcomes import (
    BALLS_PER_INNINGS,
    BALLS_PER_OVER,
    OUTCOMES,
    RUNS,
    W_IDX,
    phase_of_over,
)
from .mc import BattingScenario, BowlingScenario, _order_slots, plan_violation

DEFAULT_STATE_BUDGET = 2_000_000

_RUNS = tuple(int(x) for x in RUNS)


def exact_batting_value(
    scenario: BattingScenario,
    order: Sequence[str],
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> float:
    """Exact win probability for one batting order via backward induction.

    The tabulated state is (runs remaining, balls remaining, wickets fallen,
    striker slot, partner slot); slot 0 is the fixed non-striker and slot
    i >= 1 the i-th batsman of the order.
    """
    slots = _order_slots(scenario, order)
    n_pool = len(scenario.pool)
    w_eff = scenario.usable_wickets
    n_slots = len(slots)
    estimate = scenario.r0 * (scenario.b0 + 1) * (w_eff + 1) * n_slots * n_slots
    if estimate > state_budget:
        raise CapacityError(
            f"batting value table needs ~{estimate} states, over the budget {state_budget}"
        )

    probs = {}
    for phase in scenario.phases_needed():
        for i, prof in enumerate(slots):
            probs[(i, phase)] = prof.vector(phase).p

    @lru_cache(maxsize=None)
    def value(r: int, b: int, fallen: int, striker: int, partner: int) -> float:
        if r <= 0:
            return 1.0
        if b == 0 or fallen >= w_eff:
            return 0.0
        bowled = BALLS_PER_INNINGS - b
        over_ball = bowled % BALLS_PER_OVER
        phase = phase_of_over(bowled // BALLS_PER_OVER)
        p = probs[(striker, phase)]
        last_ball = over_ball == 5

        total = 0.0
        for idx in range(len(OUTCOMES)):
            pi = p[idx]
            if pi == 0.0:
                continue
            if idx == W_IDX:
                # new batsman (next order slot) takes strike; partner survives.
                # With the pool spent, the survivor bats on alone at both ends.
                incoming = fallen + 2
                if incoming <= n_pool:
                    total += pi * value(r, b - 1, fallen + 1, incoming, partner)
                else:
                    total += pi * value(r, b - 1, fallen + 1, partner, partner)
            else:
                runs = _RUNS[idx]
                if (runs % 2 == 1) != last_ball:
                    total += pi * value(r - runs, b - 1, fallen, partner, striker)
                else:
                    total += pi * value(r - runs, b - 1, fallen, striker, partner)
        return total

    initial_striker = 1 if scenario.initial_striker == "new_batsman" else 0
    initial_partner = 1 - initial_striker
    result = value(scenario.r0, scenario.b0, 0, initial_striker, initial_partner)
    value.cache_clear()
    return result


def exact_bowling_value(
    scenario: BowlingScenario,
    plan: Sequence[str],
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> float:
    """Exact defend probability for one bowling plan via backward induction."""
    violation = plan_violation(plan, scenario)
    if violation is not None:
        raise InfeasiblePlanError(violation)
    estimate = scenario.d0 * (scenario.b0 + 1) * (scenario.w_max + 1)
    if estimate > state_budget:
        raise CapacityError(
            f"bowling value table needs ~{estimate} states, over the budget {state_budget}"
        )

    first_over = scenario.slots[0]
    probs = []
    for s, over in enumerate(scenario.slots):
        probs.append(scenario.bowlers[plan[s]].vector(phase_of_over(over)).p)

    w_max = scenario.w_max

    @lru_cache(maxsize=None)
    def value(d: int, b: int, w: int) -> float:
        if d <= 0:
            return 0.0
        if b == 0 or w >= w_max:
            return 1.0
        bowled = BALLS_PER_INNINGS - b
        p = probs[bowled // BALLS_PER_OVER - first_over]
        total = 0.0
        for idx in range(len(OUTCOMES)):
            pi = p[idx]
            if pi == 0.0:
                continue
            if idx == W_IDX:
                total += pi * value(d, b - 1, w + 1)
            else:
                total += pi * value(d - _RUNS[idx], b - 1, w)
        return total

    result = value(scenario.d0, scenario.b0, 0)
    value.cache_clear()
    return result
