"""Phase-specific player profiles: smoothing, shrinkage, and derived stats.

Raw outcome counts per (player, phase) become per-ball outcome
distributions in two steps: add-one smoothing removes zero probabilities,
then each player's smoothed estimate is blended toward the phase's
population average with a data-adaptive weight n/(n+50). Sparse players
collapse to the population average; heavily observed players keep their
own shape.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import FitError
from .ingest import BATSMAN, BOWLER, AttributedOutcome
from .outcomes import (
    DOT_IDX,
    OUTCOMES,
    PHASES,
    RUNS,
    SCORING_IDX,
    W_IDX,
    OutcomeVector,
    Phase,
)

log = logging.getLogger(__name__)

N_MIN = 50  # deliveries at which a player's own estimate gets weight 0.5
N_OUTCOMES = len(OUTCOMES)


@dataclass
class CountTable:
    """Raw outcome counts per (player, phase) cell for one role."""

    role: str
    counts: dict[tuple[str, Phase], dict[str, int]] = field(default_factory=dict)

    def add(self, outcome: AttributedOutcome) -> None:
        cell = self.counts.setdefault((outcome.player, outcome.phase), {})
        cell[outcome.outcome] = cell.get(outcome.outcome, 0) + 1

    def cell(self, player: str, phase: Phase) -> dict[str, int]:
        return dict(self.counts.get((player, phase), {}))

    def n(self, player: str, phase: Phase) -> int:
        return sum(self.counts.get((player, phase), {}).values())

    def players(self) -> list[str]:
        return sorted({player for player, _ in self.counts})


def accumulate(outcomes: Iterable[AttributedOutcome], role: str) -> CountTable:
    """Fold attributed outcomes into a count table, checking the role."""
    if role not in (BATSMAN, BOWLER):
        raise ValueError(f"role must be 'batsman' or 'bowler', got {role!r}")
    table = CountTable(role=role)
    for outcome in outcomes:
        if outcome.role != role:
            raise ValueError(
                f"outcome for {outcome.player!r} has role {outcome.role!r}, expected {role!r}"
            )
        table.add(outcome)
    return table


def laplace_smooth(cell: Mapping[str, int]) -> OutcomeVector:
    """Add-one smoothing: p(o) = (c(o)+1) / (n+7). Strictly positive output."""
    counts = [cell.get(o, 0) for o in OUTCOMES]
    if any(c < 0 for c in counts):
        raise ValueError(f"negative count in cell: {dict(cell)}")
    total = sum(counts) + N_OUTCOMES
    return OutcomeVector(tuple((c + 1) / total for c in counts))


def population_average(table: CountTable, phase: Phase) -> OutcomeVector:
    """Phase-wide average profile: summed smoothed counts over all players.

    Only players with at least one delivery in the phase contribute, so a
    single-player table reproduces that player's smoothed vector.
    """
    sums = [0] * N_OUTCOMES
    contributors = 0
    for (_, cell_phase), cell in table.counts.items():
        if cell_phase != phase or sum(cell.values()) == 0:
            continue
        contributors += 1
        for i, o in enumerate(OUTCOMES):
            sums[i] += cell.get(o, 0) + 1  # smoothed count
    if contributors == 0:
        raise ValueError(f"no player has data in phase {phase.value}")
    total = sum(sums)
    return OutcomeVector(tuple(s / total for s in sums))


def blend_weight(n: int) -> float:
    """Data-adaptive blend weight n / (n + 50); 0 at n=0, 0.5 at n=50."""
    if n < 0:
        raise ValueError(f"delivery count must be nonnegative, got {n}")
    return n / (n + N_MIN)


def blend(individual: OutcomeVector, population: OutcomeVector, lam: float) -> OutcomeVector:
    """Convex combination lam*individual + (1-lam)*population."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"blend weight must be in [0,1], got {lam}")
    return OutcomeVector(
        tuple(lam * a + (1.0 - lam) * b for a, b in zip(individual.p, population.p))
    )


@dataclass(frozen=True)
class DerivedStats:
    sr: float  # strike rate, runs per 100 balls
    er: float  # economy rate, runs per over
    p_w: float  # dismissal probability per ball
    p_dot: float  # dot-ball probability per ball


def derive_stats(vector: OutcomeVector) -> DerivedStats:
    """Summary statistics implied by an outcome vector.

    The strike rate is expected runs per ball times 100; the economy rate is
    the same expectation times 6. er is computed as 0.06*sr so the two are
    bit-identical multiples of each other.
    """
    sr = 100.0 * vector.expected_runs()
    return DerivedStats(sr=sr, er=0.06 * sr, p_w=vector.p[W_IDX], p_dot=vector.p[DOT_IDX])


@dataclass(frozen=True)
class PlayerPhaseProfile:
    """Immutable blended profile for one player in one phase."""

    player: str
    phase: Phase
    n: int
    lam: float
    vector: OutcomeVector
    sr: float
    er: float
    p_w: float
    p_dot: float

    @classmethod
    def build(
        cls, player: str, phase: Phase, n: int, vector: OutcomeVector
    ) -> "PlayerPhaseProfile":
        stats = derive_stats(vector)
        return cls(
            player=player,
            phase=phase,
            n=n,
            lam=blend_weight(n),
            vector=vector,
            sr=stats.sr,
            er=stats.er,
            p_w=stats.p_w,
            p_dot=stats.p_dot,
        )


def build_profiles(table: CountTable) -> dict[tuple[str, Phase], PlayerPhaseProfile]:
    """Blend every (player, phase) cell toward its phase population average.

    Every player in the table gets a profile for all three phases; a phase
    with no data collapses entirely to the population average (lambda 0).
    Phases where nobody in the table has data are skipped.
    """
    profiles: dict[tuple[str, Phase], PlayerPhaseProfile] = {}
    for phase in PHASES:
        try:
            pop = population_average(table, phase)
        except ValueError:
            continue
        for player in table.players():
            n = table.n(player, phase)
            individual = laplace_smooth(table.cell(player, phase))
            blended = blend(individual, pop, blend_weight(n))
            profiles[(player, phase)] = PlayerPhaseProfile.build(player, phase, n, blended)
    return profiles


def fit_profile_from_summary(
    sr_target: float, p_w_target: float, population_shape: OutcomeVector
) -> OutcomeVector:
    """Complete a (strike rate, dismissal probability) summary into a full vector.

    The scoring outcomes 1,2,3,4,6 keep the relative proportions of
    population_shape, scaled so the expected runs hit sr_target; the wicket
    entry is pinned to p_w_target and the dot ball absorbs the residual.
    This is the minimal-assumption completion used for fixture scenarios
    built from published summary tables.
    """
    if not 0.0 <= p_w_target < 1.0:
        raise FitError(f"dismissal probability must be in [0,1), got {p_w_target}")
    if sr_target < 0.0:
        raise FitError(f"strike rate must be nonnegative, got {sr_target}")

    shape = population_shape.as_array()
    scoring_shape = shape[list(SCORING_IDX)]
    scoring_runs = RUNS[list(SCORING_IDX)].astype(np.float64)
    expected_runs_of_shape = float(np.dot(scoring_shape, scoring_runs))
    if sr_target > 0.0 and expected_runs_of_shape <= 0.0:
        raise FitError("population shape has no scoring mass to scale")

    scale = 0.0 if sr_target == 0.0 else (sr_target / 100.0) / expected_runs_of_shape
    scoring = scale * scoring_shape
    scoring_mass = float(scoring.sum())
    dot = 1.0 - p_w_target - scoring_mass
    if dot < -1e-12:
        raise FitError(
            f"infeasible fit: dot mass would be {dot:.6f} < 0 "
            f"(sr={sr_target}, p_w={p_w_target} leave no room for dot balls)"
        )
    dot = max(dot, 0.0)

    p = np.empty(N_OUTCOMES)
    p[W_IDX] = p_w_target
    p[DOT_IDX] = dot
    p[list(SCORING_IDX)] = scoring
    fitted = OutcomeVector(tuple(p))
    residual = derive_stats(fitted).sr - sr_target
    if abs(residual) > 1e-9:
        raise FitError(f"fit residual {residual:.3e} exceeds 1e-9 for sr={sr_target}")
    log.debug("fitted vector: sr=%s p_w=%s residual=%.3e", sr_target, p_w_target, residual)
    return fitted


# ---------------------------------------------------------------------------
# Profile store: one CSV per role plus a JSON sidecar with provenance.

_STORE_COLUMNS = ("player", "phase", "n", "lambda", "pW", "p0", "p1", "p2", "p3", "p4", "p6")
_ROLE_FILES = {BATSMAN: "profiles_batting.csv", BOWLER: "profiles_bowling.csv"}


def _sig12(x: float) -> str:
    return format(x, ".12g")


@dataclass
class ProfileStore:
    """Blended profile sets for both roles, with corpus provenance."""

    batting: dict[tuple[str, Phase], PlayerPhaseProfile]
    bowling: dict[tuple[str, Phase], PlayerPhaseProfile]
    corpus_hash: str
    excluded: tuple[str, ...] = ()
    n_min: int = N_MIN

    def role_profiles(self, role: str) -> dict[tuple[str, Phase], PlayerPhaseProfile]:
        if role == BATSMAN:
            return self.batting
        if role == BOWLER:
            return self.bowling
        raise ValueError(f"unknown role {role!r}")

    def player_phases(self, player: str, role: str) -> dict[Phase, PlayerPhaseProfile]:
        profiles = self.role_profiles(role)
        return {phase: prof for (p, phase), prof in profiles.items() if p == player}

    def save(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for role, filename in _ROLE_FILES.items():
            with open(out / filename, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(_STORE_COLUMNS)
                profiles = self.role_profiles(role)
                for (player, phase) in sorted(profiles, key=lambda k: (k[0], k[1].value)):
                    prof = profiles[(player, phase)]
                    writer.writerow(
                        [player, phase.value, prof.n, _sig12(prof.lam)]
                        + [_sig12(x) for x in prof.vector.p]
                    )
        sidecar = {
            "corpus_hash": self.corpus_hash,
            "excluded": sorted(self.excluded),
            "n_min": self.n_min,
        }
        with open(out / "store.json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, store_dir) -> "ProfileStore":
        root = Path(store_dir)
        with open(root / "store.json", encoding="utf-8") as fh:
            sidecar = json.load(fh)
        tables: dict[str, dict[tuple[str, Phase], PlayerPhaseProfile]] = {}
        for role, filename in _ROLE_FILES.items():
            profiles: dict[tuple[str, Phase], PlayerPhaseProfile] = {}
            with open(root / filename, newline="", encoding="utf-8") as fh:
                for row in csv.DictReader(fh):
                    phase = Phase(row["phase"])
                    # 12-significant-digit storage can leave the sum a few
                    # ulps off 1; renormalize (shifts entries by <= 1e-12)
                    raw = [float(row[c]) for c in ("pW", "p0", "p1", "p2", "p3", "p4", "p6")]
                    total = sum(raw)
                    vector = OutcomeVector(tuple(x / total for x in raw))
                    prof = PlayerPhaseProfile(
                        player=row["player"],
                        phase=phase,
                        n=int(row["n"]),
                        lam=float(row["lambda"]),
                        vector=vector,
                        **derive_stats(vector).__dict__,
                    )
                    profiles[(row["player"], phase)] = prof
            tables[role] = profiles
        return cls(
            batting=tables[BATSMAN],
            bowling=tables[BOWLER],
            corpus_hash=sidecar["corpus_hash"],
            excluded=tuple(sidecar.get("excluded", ())),
            n_min=int(sidecar.get("n_min", N_MIN)),
        )


def hash_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def hash_file(path) -> str:
    return hash_bytes(Path(path).read_bytes())


def build_store(corpus_path, exclude: Iterable[str] = ()) -> ProfileStore:
    """End-to-end: parse a corpus CSV and build both role profile sets."""
    from .ingest import attributed_outcomes, load_corpus

    excluded = tuple(sorted(set(exclude)))
    result = load_corpus(corpus_path, excluded)
    if result.errors:
        log.warning("corpus has %d unparseable rows (kept out of counts)", len(result.errors))
    batting = build_profiles(accumulate(attributed_outcomes(result.deliveries, BATSMAN), BATSMAN))
    bowling = build_profiles(accumulate(attributed_outcomes(result.deliveries, BOWLER), BOWLER))
    return ProfileStore(
        batting=batting,
        bowling=bowling,
        corpus_hash=hash_file(corpus_path),
        excluded=excluded,
    )
