"""Ball-by-ball CSV ingestion: parsing, legality filtering, and attribution.

The ingestion contract: one row per delivery, the documented header names,
empty string meaning "absent" for the optional wicket fields. Rows that fail
validation are collected with their line number instead of being silently
dropped; a missing required column is fatal.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Union

from .errors import SchemaError
from .outcomes import Phase, phase_of_over

REQUIRED_COLUMNS = (
    "match_id",
    "innings",
    "over",
    "ball",
    "batsman",
    "non_striker",
    "bowler",
    "runs_batsman",
    "extras",
    "extra_kind",
    "wicket_player_out",
    "dismissal_type",
)

EXTRA_KINDS = ("none", "wide", "no-ball", "bye", "leg-bye")
ILLEGAL_EXTRA_KINDS = frozenset({"wide", "no-ball"})
DISMISSAL_TYPES = ("bowled", "caught", "lbw", "stumped", "run out", "other")

BATSMAN = "batsman"
BOWLER = "bowler"


@dataclass(frozen=True)
class Delivery:
    """One ball-by-ball record, the unit of ingestion."""

    match_id: str
    innings: int
    over_idx: int
    ball_in_over: int
    batsman: str
    non_striker: str
    bowler: str
    runs_batsman: int
    extras: int
    extra_kind: str
    wicket_player_out: Optional[str] = None
    dismissal_type: Optional[str] = None


@dataclass(frozen=True)
class AttributedOutcome:
    """One outcome credited to one player in one phase under one role."""

    player: str
    role: str  # "batsman" or "bowler"
    phase: Phase
    outcome: str


@dataclass(frozen=True)
class RowError:
    """A row that failed validation, reported with its 1-based line number."""

    line: int
    message: str


@dataclass
class ParseResult:
    deliveries: list[Delivery]
    errors: list[RowError]


def _parse_row(row: dict[str, str], line: int) -> Delivery:
    def intfield(name: str, lo: int, hi: int) -> int:
        raw = row[name].strip()
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{name}={raw!r} is not an integer")
        if not lo <= value <= hi:
            raise ValueError(f"{name}={value} outside {lo}..{hi}")
        return value

    innings = intfield("innings", 1, 2)
    over_idx = intfield("over", 0, 19)
    ball_in_over = intfield("ball", 0, 5)
    runs_batsman = intfield("runs_batsman", 0, 6)
    extras = intfield("extras", 0, 10)

    extra_kind = row["extra_kind"].strip() or "none"
    if extra_kind not in EXTRA_KINDS:
        raise ValueError(f"extra_kind={extra_kind!r} not one of {EXTRA_KINDS}")

    batsman = row["batsman"].strip()
    non_striker = row["non_striker"].strip()
    bowler = row["bowler"].strip()
    if not batsman or not non_striker or not bowler:
        raise ValueError("batsman, non_striker, and bowler must be nonempty")
    if batsman == non_striker:
        raise ValueError(f"batsman and non_striker are both {batsman!r}")

    out = row["wicket_player_out"].strip() or None
    dismissal = row["dismissal_type"].strip() or None
    if (out is None) != (dismissal is None):
        raise ValueError("wicket_player_out and dismissal_type must be present together")
    if dismissal is not None and dismissal not in DISMISSAL_TYPES:
        raise ValueError(f"dismissal_type={dismissal!r} not one of {DISMISSAL_TYPES}")

    return Delivery(
        match_id=row["match_id"].strip(),
        innings=innings,
        over_idx=over_idx,
        ball_in_over=ball_in_over,
        batsman=batsman,
        non_striker=non_striker,
        bowler=bowler,
        runs_batsman=runs_batsman,
        extras=extras,
        extra_kind=extra_kind,
        wicket_player_out=out,
        dismissal_type=dismissal,
    )


def parse_deliveries(source: Union[bytes, str, IO]) -> ParseResult:
    """Parse a ball-by-ball CSV stream into deliveries plus row-level errors.

    Unknown extra columns are ignored; a missing required column raises
    SchemaError. Output order equals input order.
    """
    if isinstance(source, bytes):
        text: IO = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        text = io.StringIO(source)
    else:
        text = source

    reader = csv.DictReader(text)
    if reader.fieldnames is None:
        raise SchemaError("empty input: no header row")
    missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise SchemaError(f"missing required columns: {missing}")

    deliveries: list[Delivery] = []
    errors: list[RowError] = []
    for row in reader:
        line = reader.line_num
        try:
            deliveries.append(_parse_row(row, line))
        except ValueError as exc:
            errors.append(RowError(line=line, message=str(exc)))
    return ParseResult(deliveries=deliveries, errors=errors)


def load_corpus(path, exclude: Iterable[str] = ()) -> ParseResult:
    """Parse a corpus file, dropping every delivery from an excluded match."""
    excluded = set(exclude)
    with open(path, newline="", encoding="utf-8") as fh:
        result = parse_deliveries(fh)
    if excluded:
        result.deliveries = [d for d in result.deliveries if d.match_id not in excluded]
    return result


def is_legal(d: Delivery) -> bool:
    """A delivery counts toward the 120-ball innings unless it is a wide or no-ball."""
    return d.extra_kind not in ILLEGAL_EXTRA_KINDS


def phase_of(d: Delivery) -> Phase:
    return phase_of_over(d.over_idx)


def attribute_batsman(d: Delivery) -> Optional[AttributedOutcome]:
    """Credit the delivery's outcome to the on-strike batsman.

    A wicket is attributed only when the striker is the player dismissed;
    a run-out of the non-striker yields the striker's runs outcome instead.
    Returns None for the unmodeled 5-run rows, which are dropped from
    profile counts.
    """
    if d.wicket_player_out is not None and d.wicket_player_out == d.batsman:
        outcome = "W"
    elif d.runs_batsman == 5:
        return None
    else:
        outcome = str(d.runs_batsman)
    return AttributedOutcome(player=d.batsman, role=BATSMAN, phase=phase_of(d), outcome=outcome)


def attribute_bowler(d: Delivery) -> Optional[AttributedOutcome]:
    """Credit the delivery's outcome to the bowler.

    A wicket is credited iff one fell and the dismissal is not a run-out
    (run-outs reflect fielding, not bowling). Returns None for 5-run rows.
    """
    if d.wicket_player_out is not None and d.dismissal_type != "run out":
        outcome = "W"
    elif d.runs_batsman == 5:
        return None
    else:
        outcome = str(d.runs_batsman)
    return AttributedOutcome(player=d.bowler, role=BOWLER, phase=phase_of(d), outcome=outcome)


def attributed_outcomes(deliveries: Iterable[Delivery], role: str) -> list[AttributedOutcome]:
    """Attribute every legal delivery under one role, in input order."""
    if role == BATSMAN:
        attribute = attribute_batsman
    elif role == BOWLER:
        attribute = attribute_bowler
    else:
        raise ValueError(f"role must be 'batsman' or 'bowler', got {role!r}")
    out: list[AttributedOutcome] = []
    for d in deliveries:
        if not is_legal(d):
            continue
        a = attribute(d)
        if a is not None:
            out.append(a)
    return out
