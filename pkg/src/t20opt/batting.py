"""Batting order search: exhaustive enumeration with two-pass refinement.

Pool sizes in scope stay small enough that every ordering can be screened
cheaply; the top few survivors are re-evaluated at high precision and the
winner reported. Seeds for every evaluation derive from (root seed, pass,
permutation index), so candidate evaluations are order-independent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .engine.mc import BattingScenario, EvalResult, simulate_batting
from .engine.rng import derive_seed
from .errors import CapacityError

MAX_POOL = 8  # 8! = 40,320 orderings is the enumeration guard rail

_PASS1 = 1
_PASS2 = 2
_PASS_AUDIT = 3  # fresh substream for re-evaluating an actual decision


@dataclass(frozen=True)
class BattingSearchConfig:
    """Two-pass search budget: screen everything at n1, refine top k at n2."""

    n1: int = 3_000
    k: int = 10
    n2: int = 20_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n1 < 1:
            raise ValueError(f"n1 must be >= 1, got {self.n1}")
        if self.n2 < self.n1:
            raise ValueError(f"n2 ({self.n2}) must be >= n1 ({self.n1})")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class OrderCandidate:
    """One ordering with its screening result and, if retained, refinement."""

    order: tuple[str, ...]
    pass1: EvalResult
    pass2: Optional[EvalResult] = None

    @property
    def best(self) -> EvalResult:
        return self.pass2 if self.pass2 is not None else self.pass1


def enumerate_orders(pool: Sequence[str]) -> list[tuple[str, ...]]:
    """All |pool|! orderings in lexicographic (input-index) sequence."""
    if not 1 <= len(pool) <= MAX_POOL:
        raise CapacityError(
            f"pool of {len(pool)} exceeds the exhaustive enumeration guard "
            f"({MAX_POOL}, i.e. {math.factorial(MAX_POOL)} orders); heuristic "
            "batting search is out of scope"
        )
    return list(itertools.permutations(pool))


def optimize_batting(
    scenario: BattingScenario, config: BattingSearchConfig
) -> list[OrderCandidate]:
    """Rank every batting order of the scenario pool.

    Returns all candidates: the refined top-k first, ordered by pass-2
    estimate (ties broken lexicographically on the order), then the rest by
    pass-1 estimate with the same tie-break.
    """
    orders = enumerate_orders(scenario.pool_ids)
    screened: list[tuple[int, tuple[str, ...], EvalResult]] = []
    for idx, order in enumerate(orders):
        seed = derive_seed(config.seed, _PASS1, idx)
        screened.append((idx, order, simulate_batting(scenario, order, config.n1, seed)))

    screened.sort(key=lambda item: (-item[2].v_hat, item[1]))
    retained = screened[: config.k]
    rest = screened[config.k :]

    refined: list[OrderCandidate] = []
    for idx, order, pass1 in retained:
        seed = derive_seed(config.seed, _PASS2, idx)
        pass2 = simulate_batting(scenario, order, config.n2, seed)
        refined.append(OrderCandidate(order=order, pass1=pass1, pass2=pass2))
    refined.sort(key=lambda c: (-c.pass2.v_hat, c.order))

    ranked = refined + [OrderCandidate(order=o, pass1=p1) for _, o, p1 in rest]
    return ranked


def evaluate_actual_order(
    scenario: BattingScenario, order: Sequence[str], config: BattingSearchConfig
) -> EvalResult:
    """Re-evaluate a given (actual) order at refinement precision.

    Uses a substream disjoint from both search passes so selection noise in
    the search cannot correlate with, and inflate, the reported gap.
    """
    seed = derive_seed(config.seed, _PASS_AUDIT, 0)
    return simulate_batting(scenario, tuple(order), config.n2, seed)


def delta_runs(delta_balls: float, sr_a: float, sr_b: float) -> float:
    """Expected extra runs from giving delta_balls to a over b: db*(SRa-SRb)/100."""
    if delta_balls < 0:
        raise ValueError(f"delta_balls must be >= 0, got {delta_balls}")
    return delta_balls * (sr_a - sr_b) / 100.0
