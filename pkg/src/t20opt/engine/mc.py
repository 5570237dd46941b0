"""Vectorized Monte Carlo estimation of win and defend probabilities.

All trajectories advance together one ball at a time; terminated ones are
masked out. Outcome draws come from a pre-generated trajectory-major
uniform matrix, so a result depends only on (scenario, order/plan, n_sims,
seed) and never on batching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import InfeasiblePlanError, InfeasibleScenarioError, ScenarioError
from ..outcomes import (
    BALLS_PER_INNINGS,
    BALLS_PER_OVER,
    PHASE_INDEX,
    PHASES,
    RUNS,
    W_IDX,
    OutcomeVector,
    Phase,
    phase_of_over,
)
from .rng import derive_seed, generator, uniform_matrix

NEW_BATSMAN = "new_batsman"
FIXED_NON_STRIKER = "fixed_non_striker"

MAX_QUOTA = 4

_SLOT_STREAM = 7001  # tag separating per-slot substreams from other uses
_RUNS_I32 = RUNS.astype(np.int32)


def standard_error(v_hat: float, n_sims: int) -> float:
    """Binomial standard error sqrt(v(1-v)/n); bounded by 1/(2*sqrt(n))."""
    if not 0.0 <= v_hat <= 1.0:
        raise ValueError(f"v_hat must be a probability, got {v_hat}")
    if n_sims < 1:
        raise ValueError(f"n_sims must be >= 1, got {n_sims}")
    return math.sqrt(v_hat * (1.0 - v_hat) / n_sims)


@dataclass(frozen=True)
class EvalResult:
    """One Monte Carlo evaluation: the estimate, its precision, and its seed."""

    v_hat: float
    n_sims: int
    se: float
    seed: int

    @classmethod
    def from_wins(cls, wins: int, n_sims: int, seed: int) -> "EvalResult":
        v = wins / n_sims
        return cls(v_hat=v, n_sims=n_sims, se=standard_error(v, n_sims), seed=int(seed))

    def as_dict(self) -> dict:
        return {"v_hat": self.v_hat, "n_sims": self.n_sims, "se": self.se, "seed": self.seed}


@dataclass(frozen=True)
class PhaseProfiles:
    """A player's per-ball outcome vector for each phase they may bat or bowl in."""

    player: str
    vectors: dict[Phase, OutcomeVector]

    def vector(self, phase: Phase) -> OutcomeVector:
        try:
            return self.vectors[phase]
        except KeyError:
            raise ScenarioError(
                f"player {self.player!r} has no profile for phase {phase.value}"
            ) from None


def _balls_schedule(b0: int) -> tuple[np.ndarray, np.ndarray, list[Phase]]:
    """Per-ball (phase index, over_ball) for each of the b0 deliveries."""
    bowled = BALLS_PER_INNINGS - b0 + np.arange(b0)
    overs = bowled // BALLS_PER_OVER
    over_ball = bowled % BALLS_PER_OVER
    phases = [phase_of_over(int(o)) for o in overs]
    phase_idx = np.array([PHASE_INDEX[p] for p in phases], dtype=np.int64)
    return phase_idx, over_ball, phases


@dataclass(frozen=True)
class BattingScenario:
    """A batting-side intervention: chase r0 off b0 balls with a fixed pool.

    The pool is the batsmen still to come (the next-in enters at ball one).
    Wickets usable from here are the pool size plus one: once the pool is
    spent, the crease survivor bats on alone until dismissed, regardless of
    nominal wickets in hand. `initial_striker` says whether the incoming
    batsman or the surviving non-striker faces the first ball.
    """

    r0: int
    b0: int
    pool: tuple[PhaseProfiles, ...]
    fixed_non_striker: PhaseProfiles
    initial_striker: str = NEW_BATSMAN
    wickets_in_hand: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.pool:
            raise ScenarioError("pool: must contain at least one batsman")
        if self.r0 < 1:
            raise ScenarioError(f"r0: runs remaining must be >= 1, got {self.r0}")
        if not 1 <= self.b0 <= BALLS_PER_INNINGS:
            raise ScenarioError(f"b0: balls remaining must be in 1..120, got {self.b0}")
        if self.initial_striker not in (NEW_BATSMAN, FIXED_NON_STRIKER):
            raise ScenarioError(
                f"initial_striker: must be {NEW_BATSMAN!r} or {FIXED_NON_STRIKER!r}, "
                f"got {self.initial_striker!r}"
            )
        if self.wickets_in_hand is not None and self.wickets_in_hand < 1:
            raise ScenarioError("wickets_in_hand: must be >= 1 when given")
        names = [p.player for p in self.pool] + [self.fixed_non_striker.player]
        if len(set(names)) != len(names):
            raise ScenarioError(f"pool: duplicate player ids in {names}")

    @property
    def pool_ids(self) -> tuple[str, ...]:
        return tuple(p.player for p in self.pool)

    @property
    def usable_wickets(self) -> int:
        """Dismissals that end the innings: pool size + 1 crease survivor."""
        budget = len(self.pool) + 1
        if self.wickets_in_hand is None:
            return budget
        return min(budget, self.wickets_in_hand)

    def phases_needed(self) -> list[Phase]:
        seen: list[Phase] = []
        for phase in _balls_schedule(self.b0)[2]:
            if phase not in seen:
                seen.append(phase)
        return seen


def _order_slots(scenario: BattingScenario, order: Sequence[str]) -> list[PhaseProfiles]:
    if sorted(order) != sorted(scenario.pool_ids):
        raise ScenarioError(
            f"order {list(order)} is not a permutation of the pool {list(scenario.pool_ids)}"
        )
    by_id = {p.player: p for p in scenario.pool}
    return [scenario.fixed_non_striker] + [by_id[name] for name in order]


def _cdf_matrix(players: Sequence[PhaseProfiles], phases: Sequence[Phase]) -> np.ndarray:
    """Cumulative outcome distributions, shape (n_players, n_phases, 7).

    Phases a scenario never reaches are left as NaN rows. The last cdf entry
    is forced to 1.0 so a uniform draw in [0,1) can never fall off the end.
    """
    cdf = np.full((len(players), len(PHASES), len(RUNS)), np.nan)
    for i, prof in enumerate(players):
        for phase in phases:
            row = np.cumsum(prof.vector(phase).as_array())
            row[-1] = 1.0
            cdf[i, PHASE_INDEX[phase]] = row
    return cdf


def _run_batting(
    scenario: BattingScenario, order: Sequence[str], n_sims: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Advance all trajectories; returns (won, runs_scored) per trajectory."""
    slots = _order_slots(scenario, order)
    phase_idx, over_ball, _ = _balls_schedule(scenario.b0)
    cdf = _cdf_matrix(slots, scenario.phases_needed())
    n_pool = len(scenario.pool)
    w_eff = scenario.usable_wickets

    u = uniform_matrix(seed, n_sims, scenario.b0)

    r = np.full(n_sims, scenario.r0, dtype=np.int64)
    scored = np.zeros(n_sims, dtype=np.int64)
    wf = np.zeros(n_sims, dtype=np.int64)  # wickets fallen
    if scenario.initial_striker == NEW_BATSMAN:
        striker = np.ones(n_sims, dtype=np.int64)
        non_striker = np.zeros(n_sims, dtype=np.int64)
    else:
        striker = np.zeros(n_sims, dtype=np.int64)
        non_striker = np.ones(n_sims, dtype=np.int64)
    alive = np.ones(n_sims, dtype=bool)
    won = np.zeros(n_sims, dtype=bool)

    for k in range(scenario.b0):
        if not alive.any():
            break
        rows = cdf[striker, phase_idx[k]]
        out = (rows <= u[k, :, None]).sum(axis=1)  # per-row searchsorted
        out = np.minimum(out, len(RUNS) - 1)
        runs = RUNS[out]
        is_w = out == W_IDX

        live = alive
        r = r - np.where(live, runs, 0)
        scored += np.where(live, runs, 0)
        newly_won = live & (r <= 0)
        won |= newly_won
        alive = alive & ~newly_won

        wicket = live & is_w  # wickets score zero, so no overlap with wins
        wf = wf + wicket
        alive = alive & ~(wicket & (wf >= w_eff))
        # new batsman takes strike; with the pool spent, the survivor bats on
        # alone (occupying both ends, so later swaps are no-ops)
        has_next = (wf + 1) <= n_pool
        replace = wicket & alive & has_next
        lone = wicket & alive & ~has_next
        striker = np.where(replace, wf + 1, striker)
        striker = np.where(lone, non_striker, striker)
        non_striker = np.where(lone, striker, non_striker)

        swap = live & ~is_w & alive & (((runs % 2) == 1) != (over_ball[k] == 5))
        striker, non_striker = (
            np.where(swap, non_striker, striker),
            np.where(swap, striker, non_striker),
        )
    return won, scored


def simulate_batting(
    scenario: BattingScenario, order: Sequence[str], n_sims: int, seed: int
) -> EvalResult:
    """Estimate the win probability of one batting order by forward simulation."""
    if n_sims < 1:
        raise ValueError(f"n_sims must be >= 1, got {n_sims}")
    won, _ = _run_batting(scenario, order, n_sims, seed)
    return EvalResult.from_wins(int(won.sum()), n_sims, seed)


@dataclass(frozen=True)
class BowlerResource:
    """A bowler's remaining quota and phase profiles."""

    player: str
    quota: int
    phases: dict[Phase, OutcomeVector]

    def vector(self, phase: Phase) -> OutcomeVector:
        try:
            return self.phases[phase]
        except KeyError:
            raise ScenarioError(
                f"bowler {self.player!r} has no profile for phase {phase.value}"
            ) from None


BowlingPlan = tuple[str, ...]


@dataclass(frozen=True)
class BowlingScenario:
    """A bowling-side intervention: defend d0 over the remaining whole overs.

    Slots are the 0-indexed overs still to assign; they must cover exactly
    the b0 balls remaining, so the scenario starts on an over boundary (the
    over in progress before the first slot belongs to prev_bowler).
    """

    d0: int
    b0: int
    w_max: int
    slots: tuple[int, ...]
    bowlers: dict[str, BowlerResource]
    prev_bowler: Optional[str] = None
    batting_proxy: Optional[dict[Phase, OutcomeVector]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.d0 < 1:
            raise ScenarioError(f"d0: runs to defend must be >= 1, got {self.d0}")
        if self.w_max < 1:
            raise ScenarioError(f"w_max: must be >= 1, got {self.w_max}")
        if not self.slots:
            raise ScenarioError("slots: at least one over slot is required")
        if self.b0 != BALLS_PER_OVER * len(self.slots):
            raise ScenarioError(
                f"b0: {self.b0} balls do not cover {len(self.slots)} whole overs"
            )
        first = (BALLS_PER_INNINGS - self.b0) // BALLS_PER_OVER
        expected = tuple(range(first, first + len(self.slots)))
        if self.slots != expected:
            raise ScenarioError(f"slots: expected contiguous overs {expected}, got {self.slots}")
        if not self.bowlers:
            raise ScenarioError("bowlers: at least one bowler is required")
        for name, res in self.bowlers.items():
            if name != res.player:
                raise ScenarioError(f"bowlers: key {name!r} does not match player {res.player!r}")
            if not 0 <= res.quota <= MAX_QUOTA:
                raise ScenarioError(
                    f"bowlers: {name!r} quota {res.quota} outside 0..{MAX_QUOTA}"
                )
        total_quota = sum(res.quota for res in self.bowlers.values())
        if total_quota < len(self.slots):
            raise InfeasibleScenarioError(
                f"bowlers: total quota {total_quota} cannot fill {len(self.slots)} slots"
            )

    def phases_needed(self) -> list[Phase]:
        seen: list[Phase] = []
        for over in self.slots:
            phase = phase_of_over(over)
            if phase not in seen:
                seen.append(phase)
        return seen


def plan_violation(plan: Sequence[str], scenario: BowlingScenario) -> Optional[str]:
    """Return the first violated constraint, or None if the plan is feasible."""
    if len(plan) != len(scenario.slots):
        return f"plan has {len(plan)} entries for {len(scenario.slots)} slots"
    for name in plan:
        if name not in scenario.bowlers:
            return f"unknown bowler {name!r} in plan"
    if scenario.prev_bowler is not None and plan[0] == scenario.prev_bowler:
        return (
            f"prev-bowler: {plan[0]!r} bowled the over before slot {scenario.slots[0]} "
            "and cannot bowl consecutive overs"
        )
    for k in range(len(plan) - 1):
        if plan[k] == plan[k + 1]:
            return (
                f"adjacency: {plan[k]!r} assigned to consecutive overs "
                f"{scenario.slots[k]} and {scenario.slots[k + 1]}"
            )
    for name in set(plan):
        used = sum(1 for p in plan if p == name)
        if used > scenario.bowlers[name].quota:
            return (
                f"quota: {name!r} assigned {used} overs with quota "
                f"{scenario.bowlers[name].quota}"
            )
    return None


def _slot_blocks(
    scenario: BowlingScenario, slot: int, bowler: str, n_sims: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Sampled (runs, wickets) rows for one over slot under one bowler.

    The uniforms come from a substream keyed by (seed, slot) only, so two
    plans that agree on a slot's bowler see identical outcomes there: plan
    comparisons at a fixed seed differ only where the plans differ.
    """
    vec = scenario.bowlers[bowler].vector(phase_of_over(scenario.slots[slot])).as_array()
    cdf = np.cumsum(vec)
    cdf[-1] = 1.0  # a draw in [0,1) can never fall past the last edge
    u = generator(derive_seed(seed, _SLOT_STREAM, slot)).random((BALLS_PER_OVER, n_sims))
    out = np.searchsorted(cdf, u, side="right")
    return _RUNS_I32[out], (out == W_IDX).view(np.int8)


def simulate_bowling(
    scenario: BowlingScenario,
    plan: Sequence[str],
    n_sims: int,
    seed: int,
    block_cache: Optional[dict] = None,
) -> EvalResult:
    """Estimate the defend probability of one bowling plan by forward simulation.

    The batting side is profile-agnostic: each ball's outcome is drawn from
    the assigned bowler's phase vector. A trajectory defends when the balls
    run out, or w_max wickets fall, before the target is reached. Callers
    evaluating many plans at one seed may pass a dict to reuse sampled
    per-(slot, bowler) outcome blocks across calls.
    """
    if n_sims < 1:
        raise ValueError(f"n_sims must be >= 1, got {n_sims}")
    violation = plan_violation(plan, scenario)
    if violation is not None:
        raise InfeasiblePlanError(violation)

    runs = np.empty((scenario.b0, n_sims), dtype=np.int32)
    wick = np.empty((scenario.b0, n_sims), dtype=np.int8)
    for s in range(len(scenario.slots)):
        key = (s, plan[s], n_sims, seed)
        if block_cache is not None and key in block_cache:
            runs_block, wick_block = block_cache[key]
        else:
            runs_block, wick_block = _slot_blocks(scenario, s, plan[s], n_sims, seed)
            if block_cache is not None:
                block_cache[key] = (runs_block, wick_block)
        block = slice(s * BALLS_PER_OVER, (s + 1) * BALLS_PER_OVER)
        runs[block] = runs_block
        wick[block] = wick_block

    cum_runs = np.cumsum(runs, axis=0)
    cum_wick = np.cumsum(wick, axis=0, dtype=np.int32)
    target_hit = cum_runs >= scenario.d0
    all_out = cum_wick >= scenario.w_max
    # first ball index at which each event occurs (a wicket scores no runs,
    # so the two events can never land on the same ball)
    never = scenario.b0 + 1
    t_target = np.where(target_hit.any(axis=0), target_hit.argmax(axis=0), never)
    t_out = np.where(all_out.any(axis=0), all_out.argmax(axis=0), never)
    defended = (t_target == never) | (t_out < t_target)
    return EvalResult.from_wins(int(defended.sum()), n_sims, seed)
