"""Bowling plan search: simulated annealing over the feasible assignment set.

Plans assign one bowler per remaining over subject to quotas and the
no-consecutive-overs rule. The chain proposes single-slot replacements
drawn from the feasible candidate set, accepts by the Metropolis
criterion under linear cooling, caches every unique plan's screening
evaluation, and refines the best unique plans at high precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .engine.mc import BowlingPlan, BowlingScenario, EvalResult, plan_violation, simulate_bowling
from .engine.rng import derive_seed, generator, plan_digest
from .errors import CapacityError, InfeasibleScenarioError
from .outcomes import phase_of_over
from .profiles import derive_stats

_CHAIN_TAG = 101
_FAST_TAG = 102
_REFINE_TAG = 103
_AUDIT_TAG = 104

_REPAIR_ATTEMPTS = 2_000


@dataclass(frozen=True)
class SAConfig:
    """Annealing schedule and simulation budgets."""

    t0: float = 0.05
    eps: float = 1e-6
    steps: int = 8_000
    n_fast: int = 5_000
    n_refine: int = 30_000
    top_k: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.t0 > self.eps > 0.0:
            raise ValueError(f"need t0 > eps > 0, got t0={self.t0}, eps={self.eps}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.n_fast < 1 or self.n_refine < 1:
            raise ValueError("simulation counts must be >= 1")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")


@dataclass(frozen=True)
class PlanCandidate:
    """A feasible plan with its screening and (if retained) refined evaluation."""

    plan: BowlingPlan
    fast: EvalResult
    refined: Optional[EvalResult] = None

    @property
    def best(self) -> EvalResult:
        return self.refined if self.refined is not None else self.fast


def is_feasible(plan: Sequence[str], scenario: BowlingScenario) -> bool:
    """True iff quotas, adjacency, and the prev-bowler rule all hold."""
    return plan_violation(plan, scenario) is None


def candidate_set(plan: Sequence[str], k: int, scenario: BowlingScenario) -> set[str]:
    """Bowlers that could replace plan[k] without breaking any constraint.

    Quota is checked on usage excluding slot k's current occupant; the
    neighbors checked are plan[k-1] (or prev_bowler at the first slot) and
    plan[k+1]. The empty set is a valid return.
    """
    if not 0 <= k < len(plan):
        raise ValueError(f"slot {k} outside 0..{len(plan) - 1}")
    before = plan[k - 1] if k > 0 else scenario.prev_bowler
    after = plan[k + 1] if k + 1 < len(plan) else None
    out: set[str] = set()
    for name, res in scenario.bowlers.items():
        if name == plan[k] or name == before or name == after:
            continue
        used_elsewhere = sum(1 for i, p in enumerate(plan) if p == name and i != k)
        if used_elsewhere < res.quota:
            out.add(name)
    return out


def sa_temperature(step: int, config: SAConfig) -> float:
    """Linear cooling: t0*(1 - step/steps) + eps."""
    if not 0 <= step <= config.steps:
        raise ValueError(f"step {step} outside 0..{config.steps}")
    return config.t0 * (1.0 - step / config.steps) + config.eps


def sa_accept(delta_v: float, temperature: float, uniform_draw: float) -> bool:
    """Metropolis rule: improvements always accepted, others with exp(dv/T)."""
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    if not 0.0 <= uniform_draw < 1.0:
        raise ValueError(f"uniform draw must be in [0,1), got {uniform_draw}")
    if delta_v > 0.0:
        return True
    return uniform_draw < math.exp(delta_v / temperature)


def _phase_er(scenario: BowlingScenario, name: str, over: int) -> float:
    return derive_stats(scenario.bowlers[name].vector(phase_of_over(over))).er


def _slot_candidates(
    scenario: BowlingScenario, slot: int, previous: Optional[str], used: dict[str, int]
) -> list[str]:
    over = scenario.slots[slot]
    names = []
    for name, res in scenario.bowlers.items():
        if name == previous or used.get(name, 0) >= res.quota:
            continue
        names.append(name)
    return sorted(names, key=lambda n: (_phase_er(scenario, n, over), n))


def initial_plan(scenario: BowlingScenario, rng: np.random.Generator) -> BowlingPlan:
    """A feasible starting plan: greedy lowest phase economy, random repair.

    The greedy pass assigns, slot by slot, the cheapest bowler for that
    over's phase with spare quota and no adjacency clash. If it dead-ends,
    randomized construction retries; if that also fails, the scenario is
    reported infeasible with the binding constraint.
    """
    m = len(scenario.slots)

    def construct(pick: Callable[[list[str]], str]) -> Optional[BowlingPlan]:
        used: dict[str, int] = {}
        prev = scenario.prev_bowler
        plan: list[str] = []
        for slot in range(m):
            options = _slot_candidates(scenario, slot, prev, used)
            if not options:
                return None
            choice = pick(options)
            plan.append(choice)
            used[choice] = used.get(choice, 0) + 1
            prev = choice
        return tuple(plan)

    plan = construct(lambda options: options[0])
    if plan is not None:
        return plan
    for _ in range(_REPAIR_ATTEMPTS):
        plan = construct(lambda options: options[int(rng.integers(len(options)))])
        if plan is not None:
            return plan

    alternation_cap = sum(
        min(res.quota, (m + 1) // 2) for res in scenario.bowlers.values()
    )
    if alternation_cap < m:
        raise InfeasibleScenarioError(
            f"no feasible plan: alternation caps quotas at {alternation_cap} "
            f"usable overs for {m} slots (no bowler may bowl consecutive overs)"
        )
    raise InfeasibleScenarioError(
        f"no feasible plan found after {_REPAIR_ATTEMPTS} randomized constructions; "
        "the adjacency and prev-bowler constraints leave no assignment"
    )


def _propose(
    plan: BowlingPlan, scenario: BowlingScenario, rng: np.random.Generator
) -> Optional[BowlingPlan]:
    """One neighborhood move: single-slot replacement, swap escape on dead ends."""
    m = len(plan)
    for _ in range(m):
        k = int(rng.integers(m))
        options = sorted(candidate_set(plan, k, scenario))
        if options:
            j = options[int(rng.integers(len(options)))]
            return plan[:k] + (j,) + plan[k + 1 :]
    # every sampled slot was stuck: try swapping two slots' bowlers
    for _ in range(m * m):
        a, b = int(rng.integers(m)), int(rng.integers(m))
        if a == b or plan[a] == plan[b]:
            continue
        swapped = list(plan)
        swapped[a], swapped[b] = swapped[b], swapped[a]
        swapped = tuple(swapped)
        if plan_violation(swapped, scenario) is None:
            return swapped
    return None


def optimize_bowling(
    scenario: BowlingScenario,
    config: SAConfig,
    progress: Optional[Callable[[int, float], None]] = None,
) -> list[PlanCandidate]:
    """Anneal over feasible plans and refine the best unique ones.

    Every unique plan's screening evaluation is cached by plan identity, so
    revisits reuse the cached value and the chain is deterministic given the
    seed. The starting plan always joins the refinement set, so the result
    can never rank below the search's own starting point.
    """
    rng = generator(derive_seed(config.seed, _CHAIN_TAG))
    start = initial_plan(scenario, rng)

    # Screening and refinement each use one common seed across plans, so
    # two plans differ only through the slots where their bowlers differ
    # (common random numbers); sampled per-(slot, bowler) blocks are reused.
    fast_seed = derive_seed(config.seed, _FAST_TAG)
    refine_seed = derive_seed(config.seed, _REFINE_TAG)
    blocks: dict = {}

    fast_cache: dict[BowlingPlan, EvalResult] = {}

    def eval_fast(plan: BowlingPlan) -> EvalResult:
        if plan not in fast_cache:
            fast_cache[plan] = simulate_bowling(
                scenario, plan, config.n_fast, fast_seed, block_cache=blocks
            )
        return fast_cache[plan]

    current = start
    current_eval = eval_fast(current)
    best_v = current_eval.v_hat
    for step in range(config.steps):
        temperature = sa_temperature(step, config)
        proposal = _propose(current, scenario, rng)
        if proposal is not None:
            prop_eval = eval_fast(proposal)
            draw = float(rng.random())
            if sa_accept(prop_eval.v_hat - current_eval.v_hat, temperature, draw):
                current, current_eval = proposal, prop_eval
        best_v = max(best_v, current_eval.v_hat)
        if progress is not None:
            progress(step, best_v)

    by_screen = sorted(fast_cache.items(), key=lambda item: (-item[1].v_hat, item[0]))
    to_refine = [plan for plan, _ in by_screen[: config.top_k]]
    if start not in to_refine:
        to_refine.append(start)

    refined: list[PlanCandidate] = []
    for plan in to_refine:
        result = simulate_bowling(
            scenario, plan, config.n_refine, refine_seed, block_cache=blocks
        )
        refined.append(PlanCandidate(plan=plan, fast=fast_cache[plan], refined=result))
    refined.sort(key=lambda c: (-c.refined.v_hat, c.plan))
    return refined


def evaluate_actual_plan(
    scenario: BowlingScenario, plan: Sequence[str], config: SAConfig
) -> EvalResult:
    """Evaluate a given (actual) plan at refinement precision, fresh substream."""
    seed = derive_seed(config.seed, _AUDIT_TAG, plan_digest(plan))
    return simulate_bowling(scenario, tuple(plan), config.n_refine, seed)


def audit_z_score(gap: float, se: float) -> float:
    """Two-evaluation z: gap / (sqrt(2) * se)."""
    if se <= 0.0:
        raise ValueError(f"se must be positive, got {se}")
    return gap / (math.sqrt(2.0) * se)


def enumerate_feasible_plans(
    scenario: BowlingScenario, limit: int = 200_000
) -> Iterator[BowlingPlan]:
    """Yield every feasible plan by backtracking; guard against blowups."""
    m = len(scenario.slots)
    names = sorted(scenario.bowlers)
    count = 0

    def extend(plan: list[str], used: dict[str, int]) -> Iterator[BowlingPlan]:
        nonlocal count
        if len(plan) == m:
            count += 1
            if count > limit:
                raise CapacityError(f"feasible plan enumeration exceeded {limit} plans")
            yield tuple(plan)
            return
        prev = plan[-1] if plan else scenario.prev_bowler
        for name in names:
            if name == prev or used.get(name, 0) >= scenario.bowlers[name].quota:
                continue
            plan.append(name)
            used[name] = used.get(name, 0) + 1
            yield from extend(plan, used)
            plan.pop()
            used[name] -= 1

    yield from extend([], {})


def plan_counts(scenario: BowlingScenario) -> dict[str, int]:
    """Count quota-valid and fully feasible plans by dynamic programming.

    The ratio reports how much of the quota-valid space the adjacency rules
    remove; it is a report statistic, not a constraint the search needs.
    """
    names = sorted(scenario.bowlers)
    quotas = tuple(scenario.bowlers[n].quota for n in names)
    m = len(scenario.slots)
    prev_idx = names.index(scenario.prev_bowler) if scenario.prev_bowler in names else -1

    @lru_cache(maxsize=None)
    def quota_valid(slot: int, used: tuple[int, ...]) -> int:
        if slot == m:
            return 1
        total = 0
        for j in range(len(names)):
            if used[j] < quotas[j]:
                nxt = used[:j] + (used[j] + 1,) + used[j + 1 :]
                total += quota_valid(slot + 1, nxt)
        return total

    @lru_cache(maxsize=None)
    def feasible(slot: int, used: tuple[int, ...], last: int) -> int:
        if slot == m:
            return 1
        total = 0
        for j in range(len(names)):
            if j != last and used[j] < quotas[j]:
                nxt = used[:j] + (used[j] + 1,) + used[j + 1 :]
                total += feasible(slot + 1, nxt, j)
        return total

    zero = tuple(0 for _ in names)
    valid = quota_valid(0, zero)
    legal = feasible(0, zero, prev_idx)
    quota_valid.cache_clear()
    feasible.cache_clear()
    return {
        "quota_valid": valid,
        "feasible": legal,
        "killed_by_adjacency": valid - legal,
    }
