"""Match state triple and per-ball transition rules.

The state is (runs remaining, legal balls remaining, wickets). The ball
position within the over is derived, never stored: with b legal balls left
in a 120-ball innings, 120-b balls have been bowled, so the next delivery
is ball (120-b) mod 6 of absolute over (120-b) div 6.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..outcomes import BALLS_PER_INNINGS, BALLS_PER_OVER, Phase, phase_of_over, runs_of

BATTING = "batting"
BOWLING = "bowling"


@dataclass(frozen=True)
class MatchState:
    """Runs remaining, legal balls remaining, and the wicket counter.

    `w` counts wickets in hand from the batting perspective and additional
    wickets taken from the bowling perspective; the transition direction
    differs accordingly.
    """

    r: int
    b: int
    w: int

    def __post_init__(self) -> None:
        if not 0 <= self.b <= BALLS_PER_INNINGS:
            raise ValueError(f"balls remaining {self.b} outside 0..{BALLS_PER_INNINGS}")
        if self.w < 0:
            raise ValueError(f"wicket counter must be nonnegative, got {self.w}")

    @property
    def balls_bowled(self) -> int:
        return BALLS_PER_INNINGS - self.b

    @property
    def over_ball(self) -> int:
        """0-indexed position of the next delivery within its over."""
        return self.balls_bowled % BALLS_PER_OVER

    @property
    def absolute_over(self) -> int:
        """0-indexed over of the next delivery."""
        return self.balls_bowled // BALLS_PER_OVER

    @property
    def phase(self) -> Phase:
        return phase_of_over(self.absolute_over)


def transition(state: MatchState, outcome: str, perspective: str) -> MatchState:
    """Advance one ball: wickets move the counter, runs reduce the target.

    Must not be called on a state with no balls left.
    """
    if state.b < 1:
        raise ValueError("transition called on a terminal state (no balls remaining)")
    if perspective not in (BATTING, BOWLING):
        raise ValueError(f"perspective must be 'batting' or 'bowling', got {perspective!r}")
    if outcome == "W":
        dw = -1 if perspective == BATTING else 1
        return replace(state, b=state.b - 1, w=state.w + dw)
    return replace(state, r=state.r - runs_of(outcome), b=state.b - 1)


def rotate_strike(
    striker: str, non_striker: str, outcome: str, over_ball: int
) -> tuple[str, str]:
    """Swap the batsmen iff the runs are odd XOR this is the over's last ball.

    Odd runs on the final ball cancel out: the batsmen cross, then ends
    change. Wicket replacement is handled by the simulator, not here.
    """
    if not 0 <= over_ball <= 5:
        raise ValueError(f"over_ball {over_ball} outside 0..5")
    swap = (runs_of(outcome) % 2 == 1) != (over_ball == 5)
    if swap:
        return non_striker, striker
    return striker, non_striker
