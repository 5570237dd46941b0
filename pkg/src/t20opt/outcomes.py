"""Ball outcome vocabulary, innings phases, and outcome probability vectors.

Every legal delivery resolves to one of seven outcomes: a wicket (the
on-strike batsman is dismissed) or a bat-credited run count of 0, 1, 2, 3,
4, or 6. Fives are rare enough that they are not modeled; ingestion drops
them. Probability vectors over this set are the unit of player skill.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

# Canonical outcome order. Index 0 is the wicket, index 1 the dot ball.
OUTCOMES: tuple[str, ...] = ("W", "0", "1", "2", "3", "4", "6")
W_IDX = 0
DOT_IDX = 1
SCORING_IDX = (2, 3, 4, 5, 6)

# Runs credited to the batsman for each outcome, canonical order.
RUNS = np.array([0, 0, 1, 2, 3, 4, 6], dtype=np.int64)

OUTCOME_INDEX: dict[str, int] = {o: i for i, o in enumerate(OUTCOMES)}

_SUM_TOL = 1e-12

BALLS_PER_OVER = 6
OVERS_PER_INNINGS = 20
BALLS_PER_INNINGS = BALLS_PER_OVER * OVERS_PER_INNINGS


class Phase(enum.Enum):
    """Innings phase, assigned from the 0-indexed over number."""

    PP = "PP"  # powerplay, overs 0-5
    MI = "MI"  # middle, overs 6-14
    DE = "DE"  # death, overs 15-19


PHASES: tuple[Phase, ...] = (Phase.PP, Phase.MI, Phase.DE)
PHASE_INDEX: dict[Phase, int] = {p: i for i, p in enumerate(PHASES)}


def phase_of_over(over_idx: int) -> Phase:
    """Map a 0-indexed over number to its phase (PP 0-5, MI 6-14, DE 15-19)."""
    if not 0 <= over_idx <= 19:
        raise ValueError(f"over index {over_idx} outside the T20 range 0..19")
    if over_idx <= 5:
        return Phase.PP
    if over_idx <= 14:
        return Phase.MI
    return Phase.DE


def runs_of(outcome: str) -> int:
    """Runs credited to the batsman for an outcome ('W' scores zero)."""
    return int(RUNS[OUTCOME_INDEX[outcome]])


@dataclass(frozen=True)
class OutcomeVector:
    """A probability distribution over the seven ball outcomes.

    Stored as a tuple in canonical OUTCOMES order so instances are hashable
    and immutable. Entries must be nonnegative and sum to 1 within 1e-12;
    zero entries are allowed (point masses are useful in tests and oracles),
    smoothed profiles are strictly positive by construction.
    """

    p: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.p) != len(OUTCOMES):
            raise ValueError(f"outcome vector needs {len(OUTCOMES)} entries, got {len(self.p)}")
        if any(x < 0.0 for x in self.p):
            raise ValueError(f"outcome vector has a negative entry: {self.p}")
        total = sum(self.p)
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"outcome vector sums to {total!r}, not 1 within {_SUM_TOL}")

    @classmethod
    def from_mapping(cls, m: Mapping[str, float]) -> "OutcomeVector":
        unknown = set(m) - set(OUTCOMES)
        if unknown:
            raise ValueError(f"unknown outcome keys: {sorted(unknown)}")
        return cls(tuple(float(m.get(o, 0.0)) for o in OUTCOMES))

    @classmethod
    def point_mass(cls, outcome: str) -> "OutcomeVector":
        return cls.from_mapping({outcome: 1.0})

    def __getitem__(self, outcome: str) -> float:
        return self.p[OUTCOME_INDEX[outcome]]

    def __iter__(self) -> Iterator[float]:
        return iter(self.p)

    def as_array(self) -> np.ndarray:
        return np.array(self.p, dtype=np.float64)

    def as_dict(self) -> dict[str, float]:
        return {o: self.p[i] for i, o in enumerate(OUTCOMES)}

    def expected_runs(self) -> float:
        """Expected bat-credited runs for a single delivery."""
        return float(np.dot(self.as_array(), RUNS))
