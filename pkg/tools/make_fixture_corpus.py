"""Generate the synthetic ball-by-ball fixture corpus shipped in fixtures/.

The corpus is small (16 matches) but exercises the full ingestion surface:
wides, no-balls, byes, leg-byes, run-outs of both batsmen, a handful of
all-run fives, and phase-dependent scoring. Regeneration is deterministic;
the checked-in CSV is the artifact, this script its provenance.

Usage: python3 tools/make_fixture_corpus.py > fixtures/corpus_small.csv
"""

from __future__ import annotations

import csv
import sys
import zlib

import numpy as np

SEED = 20260809
N_MATCHES = 16

TEAMS = {
    "alpha": [f"A{k:02d}" for k in range(1, 12)],
    "bravo": [f"B{k:02d}" for k in range(1, 12)],
}
# last five of each XI bowl, plus one all-rounder
BOWLERS = {name: players[5:11] for name, players in TEAMS.items()}

# scoring weights for W,0,1,2,3,4,6 by phase
PHASE_WEIGHTS = {
    "PP": [0.040, 0.38, 0.30, 0.055, 0.008, 0.16, 0.057],
    "MI": [0.048, 0.34, 0.40, 0.080, 0.010, 0.09, 0.032],
    "DE": [0.080, 0.28, 0.34, 0.075, 0.010, 0.13, 0.085],
}
OUTCOME_RUNS = [0, 0, 1, 2, 3, 4, 6]

DISMISSALS = ["caught", "bowled", "lbw", "stumped", "other"]


def phase_of(over: int) -> str:
    if over <= 5:
        return "PP"
    if over <= 14:
        return "MI"
    return "DE"


def player_tilt(player: str) -> float:
    """Stable per-player aggression multiplier in [0.75, 1.35]."""
    h = zlib.crc32(player.encode("ascii"))
    return 0.75 + (h % 1000) / 1000 * 0.6


def innings_rows(rng, match_id, innings, batting, bowling):
    rows = []
    order = list(TEAMS[batting])
    striker, non_striker = order[0], order[1]
    next_in = 2
    wickets = 0
    bowlers = list(BOWLERS[bowling])
    prev_bowler = None
    for over in range(20):
        options = [b for b in bowlers if b != prev_bowler]
        bowler = options[int(rng.integers(len(options)))]
        prev_bowler = bowler
        ball = 0
        while ball < 6:
            if wickets >= 10:
                return rows
            weights = np.array(PHASE_WEIGHTS[phase_of(over)])
            tilt = player_tilt(striker)
            weights[5] *= tilt  # fours
            weights[6] *= tilt  # sixes
            weights[0] *= 2.0 - tilt  # aggressive batsmen get out less here
            weights /= weights.sum()

            extra_draw = rng.random()
            base = dict(
                match_id=match_id,
                innings=innings,
                over=over,
                ball=ball,
                batsman=striker,
                non_striker=non_striker,
                bowler=bowler,
                runs_batsman=0,
                extras=0,
                extra_kind="none",
                wicket_player_out="",
                dismissal_type="",
            )
            if extra_draw < 0.035:  # wide: illegal, ball not consumed
                base["extra_kind"] = "wide"
                base["extras"] = 1
                rows.append(base)
                continue
            if extra_draw < 0.040:  # no-ball with runs off the bat
                base["extra_kind"] = "no-ball"
                base["extras"] = 1
                base["runs_batsman"] = int(rng.choice([0, 1, 2, 4]))
                rows.append(base)
                continue
            if extra_draw < 0.055:  # byes / leg-byes: legal, zero to the bat
                base["extra_kind"] = "bye" if extra_draw < 0.045 else "leg-bye"
                base["extras"] = int(rng.choice([1, 2]))
                rows.append(base)
                ball += 1
                if base["extras"] % 2 == 1:
                    striker, non_striker = non_striker, striker
                continue
            if extra_draw < 0.0555 and wickets < 9:  # all-run five, rare
                base["runs_batsman"] = 5
                rows.append(base)
                ball += 1
                striker, non_striker = non_striker, striker
                continue
            if extra_draw < 0.0605 and wickets < 9:  # run out, either end
                out_nonstriker = rng.random() < 0.5
                # striker run-outs complete no runs (out attempting the first);
                # non-striker run-outs may have crossed once already
                runs_completed = int(rng.choice([0, 1])) if out_nonstriker else 0
                base["runs_batsman"] = runs_completed
                base["wicket_player_out"] = non_striker if out_nonstriker else striker
                base["dismissal_type"] = "run out"
                rows.append(base)
                wickets += 1
                if wickets >= 10 or next_in >= len(order):
                    return rows
                incoming = order[next_in]
                next_in += 1
                if out_nonstriker:
                    non_striker = incoming
                else:
                    striker = incoming
                ball += 1
                if runs_completed % 2 == 1:
                    striker, non_striker = non_striker, striker
                continue

            outcome = int(rng.choice(7, p=weights))
            if outcome == 0:  # bowler wicket
                base["wicket_player_out"] = striker
                base["dismissal_type"] = DISMISSALS[int(rng.integers(len(DISMISSALS)))]
                rows.append(base)
                wickets += 1
                if wickets >= 10 or next_in >= len(order):
                    return rows
                striker = order[next_in]
                next_in += 1
                ball += 1
                continue
            runs = OUTCOME_RUNS[outcome]
            base["runs_batsman"] = runs
            rows.append(base)
            ball += 1
            if runs % 2 == 1:
                striker, non_striker = non_striker, striker
        striker, non_striker = non_striker, striker  # over end
    return rows


def main() -> None:
    rng = np.random.Generator(np.random.Philox(key=SEED))
    writer = csv.DictWriter(
        sys.stdout,
        fieldnames=[
            "match_id", "innings", "over", "ball", "batsman", "non_striker",
            "bowler", "runs_batsman", "extras", "extra_kind",
            "wicket_player_out", "dismissal_type",
        ],
    )
    writer.writeheader()
    sides = list(TEAMS)
    for m in range(1, N_MATCHES + 1):
        match_id = f"M{m:03d}"
        first = sides[m % 2]
        second = sides[(m + 1) % 2]
        writer.writerows(innings_rows(rng, match_id, 1, first, second))
        writer.writerows(innings_rows(rng, match_id, 2, second, first))


if __name__ == "__main__":
    main()
