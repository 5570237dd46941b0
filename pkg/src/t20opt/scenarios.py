"""Scenario files: the JSON contract between fixtures, CLI, service, and UI.

A scenario file pins an intervention point (runs, balls, wickets), the
resources available from it (batting pool / bowler quotas), and player
profiles given one of three ways: an explicit outcome vector per phase, a
(strike-or-economy rate, dismissal probability) summary fitted against the
file's per-phase population shapes, or a reference into a profile store.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Optional

from .engine.mc import (
    BattingScenario,
    BowlerResource,
    BowlingScenario,
    NEW_BATSMAN,
    PhaseProfiles,
)
from .errors import InfeasiblePlanError, ScenarioError
from .ingest import BATSMAN, BOWLER
from .outcomes import OutcomeVector, Phase
from .profiles import ProfileStore, hash_bytes, fit_profile_from_summary

BATTING_KIND = "batting"
BOWLING_KIND = "bowling"


@dataclass(frozen=True)
class LoadedScenario:
    """A validated scenario plus the provenance needed to reproduce results."""

    kind: str
    scenario: Any  # BattingScenario | BowlingScenario
    actual_decision: Optional[tuple[str, ...]]
    path: Optional[str]
    scenario_hash: str
    corpus_hash: str


def _require(data: Mapping, key: str, where: str) -> Any:
    if key not in data:
        raise ScenarioError(f"{where}: missing required field {key!r}")
    return data[key]


def _as_int(value: Any, where: str, lo: int, hi: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ScenarioError(f"{where}: expected an integer, got {value!r}")
    if not lo <= value <= hi:
        raise ScenarioError(f"{where}: {value} outside {lo}..{hi}")
    return value


def _parse_phase(name: str, where: str) -> Phase:
    try:
        return Phase(name)
    except ValueError:
        raise ScenarioError(
            f"{where}: unknown phase {name!r}, expected one of PP, MI, DE"
        ) from None


def _parse_vector(data: Mapping[str, float], where: str) -> OutcomeVector:
    try:
        return OutcomeVector.from_mapping(data)
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _parse_shapes(data: Mapping[str, Any], where: str) -> dict[Phase, OutcomeVector]:
    shapes = {}
    for phase_name, vec in data.items():
        phase = _parse_phase(phase_name, where)
        shapes[phase] = _parse_vector(vec, f"{where}.{phase_name}")
    return shapes


def _fit_summary(
    summary: Mapping[str, Any],
    shapes: Mapping[Phase, OutcomeVector],
    where: str,
) -> dict[Phase, OutcomeVector]:
    vectors: dict[Phase, OutcomeVector] = {}
    for phase_name, row in summary.items():
        phase = _parse_phase(phase_name, where)
        if phase not in shapes:
            raise ScenarioError(
                f"{where}: no population shape for phase {phase_name} to fit against"
            )
        if "sr" in row:
            sr = float(row["sr"])
        elif "er" in row:
            sr = float(row["er"]) / 0.06
        else:
            raise ScenarioError(f"{where}.{phase_name}: summary needs 'sr' or 'er'")
        if "p_w" not in row:
            raise ScenarioError(f"{where}.{phase_name}: summary needs 'p_w'")
        vectors[phase] = fit_profile_from_summary(sr, float(row["p_w"]), shapes[phase])
    return vectors


def _resolve_profile(
    name: str,
    spec: Mapping[str, Any],
    shapes: Mapping[Phase, OutcomeVector],
    store: Optional[ProfileStore],
    role: str,
    where: str,
    used_store: list,
) -> dict[Phase, OutcomeVector]:
    given = [k for k in ("vector", "summary", "ref") if k in spec]
    if len(given) != 1:
        raise ScenarioError(
            f"{where}: profile must give exactly one of vector/summary/ref, got {given}"
        )
    if "vector" in spec:
        return {
            _parse_phase(p, where): _parse_vector(v, f"{where}.{p}")
            for p, v in spec["vector"].items()
        }
    if "summary" in spec:
        return _fit_summary(spec["summary"], shapes, where)
    ref = spec["ref"]
    if store is None:
        raise ScenarioError(
            f"{where}: profile references {ref!r} but no profile store is loaded"
        )
    phases = store.player_phases(str(ref), role)
    if not phases:
        raise ScenarioError(f"{where}: player {ref!r} not found in the profile store")
    used_store.append(where)
    return {phase: prof.vector for phase, prof in phases.items()}


def _check_phases(
    vectors: Mapping[Phase, OutcomeVector], needed: list[Phase], name: str
) -> None:
    missing = [p.value for p in needed if p not in vectors]
    if missing:
        raise ScenarioError(
            f"players.{name}: missing profile for phase(s) {missing} the innings reaches"
        )


def _load_batting(
    data: Mapping[str, Any], store: Optional[ProfileStore], used_store: list
) -> tuple[BattingScenario, Optional[tuple[str, ...]]]:
    iv = _require(data, "intervention", "scenario")
    r0 = _as_int(_require(iv, "runs", "intervention"), "intervention.runs", 1, 400)
    b0 = _as_int(_require(iv, "balls", "intervention"), "intervention.balls", 1, 120)
    wickets = _as_int(_require(iv, "wickets", "intervention"), "intervention.wickets", 1, 10)

    shapes = _parse_shapes(data.get("population_shapes", {}), "population_shapes")
    players = _require(data, "players", "scenario")
    pool_ids = _require(data, "pool", "scenario")
    if not isinstance(pool_ids, list) or not pool_ids:
        raise ScenarioError("pool: must be a nonempty list of player ids")
    ns_id = _require(data, "fixed_non_striker", "scenario")

    def build(name: str) -> PhaseProfiles:
        if name not in players:
            raise ScenarioError(f"players: no profile for {name!r}")
        vectors = _resolve_profile(
            name, players[name], shapes, store, BATSMAN, f"players.{name}", used_store
        )
        return PhaseProfiles(player=name, vectors=vectors)

    pool = tuple(build(name) for name in pool_ids)
    non_striker = build(ns_id)
    scenario = BattingScenario(
        r0=r0,
        b0=b0,
        pool=pool,
        fixed_non_striker=non_striker,
        initial_striker=data.get("initial_striker", NEW_BATSMAN),
        wickets_in_hand=wickets,
    )
    needed = scenario.phases_needed()
    for prof in (*pool, non_striker):
        _check_phases(prof.vectors, needed, prof.player)

    actual = data.get("actual_decision")
    if actual is not None:
        if sorted(actual) != sorted(pool_ids):
            raise ScenarioError(
                "actual_decision: must be a permutation of the pool "
                f"{sorted(pool_ids)}, got {actual}"
            )
        actual = tuple(actual)
    return scenario, actual


def _load_bowling(
    data: Mapping[str, Any], store: Optional[ProfileStore], used_store: list
) -> tuple[BowlingScenario, Optional[tuple[str, ...]]]:
    iv = _require(data, "intervention", "scenario")
    d0 = _as_int(_require(iv, "runs", "intervention"), "intervention.runs", 1, 400)
    b0 = _as_int(_require(iv, "balls", "intervention"), "intervention.balls", 1, 120)
    w_max = _as_int(_require(iv, "wickets", "intervention"), "intervention.wickets", 1, 10)

    shapes = _parse_shapes(data.get("population_shapes", {}), "population_shapes")
    slots = _require(data, "slots", "scenario")
    if not isinstance(slots, list) or not all(isinstance(s, int) for s in slots):
        raise ScenarioError("slots: must be a list of over indices")
    bowlers_data = _require(data, "bowlers", "scenario")
    if not bowlers_data:
        raise ScenarioError("bowlers: must be a nonempty mapping")

    bowlers: dict[str, BowlerResource] = {}
    for name, spec in bowlers_data.items():
        quota = _as_int(_require(spec, "quota", f"bowlers.{name}"), f"bowlers.{name}.quota", 0, 4)
        vectors = _resolve_profile(
            name, spec, shapes, store, BOWLER, f"bowlers.{name}", used_store
        )
        bowlers[name] = BowlerResource(player=name, quota=quota, phases=vectors)

    proxy = data.get("batting_proxy")
    scenario = BowlingScenario(
        d0=d0,
        b0=b0,
        w_max=w_max,
        slots=tuple(slots),
        bowlers=bowlers,
        prev_bowler=data.get("prev_bowler"),
        batting_proxy=_parse_shapes(proxy, "batting_proxy") if proxy else None,
    )
    needed = scenario.phases_needed()
    for res in bowlers.values():
        _check_phases(res.phases, needed, res.player)

    actual = data.get("actual_decision")
    if actual is not None:
        from .engine.mc import plan_violation

        violation = plan_violation(tuple(actual), scenario)
        if violation is not None:
            raise InfeasiblePlanError(f"actual_decision: {violation}")
        actual = tuple(actual)
    return scenario, actual


def canonical_hash(data: Mapping[str, Any]) -> str:
    """Content hash of a scenario mapping, independent of file formatting."""
    return hash_bytes(json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8"))


def parse_scenario(
    data: Mapping[str, Any],
    store: Optional[ProfileStore] = None,
    path: Optional[str] = None,
) -> LoadedScenario:
    """Validate a scenario mapping and resolve all profiles."""
    scenario_hash = canonical_hash(data)
    kind = _require(data, "kind", "scenario")
    used_store: list = []
    if kind == BATTING_KIND:
        scenario, actual = _load_batting(data, store, used_store)
    elif kind == BOWLING_KIND:
        scenario, actual = _load_bowling(data, store, used_store)
    else:
        raise ScenarioError(f"kind: must be 'batting' or 'bowling', got {kind!r}")
    # profile provenance: the store's corpus if any profile resolved through
    # it, otherwise the scenario content itself (fully inline scenarios)
    corpus_hash = store.corpus_hash if (store is not None and used_store) else scenario_hash
    return LoadedScenario(
        kind=kind,
        scenario=scenario,
        actual_decision=actual,
        path=path,
        scenario_hash=scenario_hash,
        corpus_hash=corpus_hash,
    )


def load_scenario(path, store: Optional[ProfileStore] = None) -> LoadedScenario:
    """Load and validate a scenario JSON file."""
    p = Path(path)
    if not p.exists():
        raise ScenarioError(f"scenario file not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{p}: not valid JSON ({exc})") from None
    return parse_scenario(data, store=store, path=str(p))
