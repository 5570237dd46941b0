import csv
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from t20opt.errors import FitError
from t20opt.ingest import AttributedOutcome, attributed_outcomes
from t20opt.outcomes import OUTCOMES, OutcomeVector, Phase
from t20opt.profiles import (
    ProfileStore,
    accumulate,
    blend,
    blend_weight,
    build_profiles,
    build_store,
    derive_stats,
    fit_profile_from_summary,
    laplace_smooth,
    population_average,
)

from conftest import CORPUS, vec


def ao(player, phase, outcome, role="batsman"):
    return AttributedOutcome(player=player, role=role, phase=phase, outcome=outcome)


# --- accumulate ----------------------------------------------------------------


def test_accumulate_empty():
    table = accumulate([], "batsman")
    assert table.counts == {}


def test_accumulate_small_example():
    outcomes = [ao("A", Phase.MI, "0"), ao("A", Phase.MI, "0"), ao("A", Phase.MI, "4")]
    table = accumulate(outcomes, "batsman")
    assert table.cell("A", Phase.MI) == {"0": 2, "4": 1}
    assert table.n("A", Phase.MI) == 3


def test_accumulate_rejects_role_mismatch():
    with pytest.raises(ValueError, match="role"):
        accumulate([ao("A", Phase.MI, "0", role="bowler")], "batsman")


def test_accumulate_corpus_matches_line_count_oracle(corpus_result):
    """Cell totals equal a from-scratch recount over the raw CSV."""
    outcomes = attributed_outcomes(corpus_result.deliveries, "bowler")
    table = accumulate(outcomes, "bowler")

    oracle: Counter = Counter()
    with open(CORPUS, newline="") as fh:
        for r in csv.DictReader(fh):
            if r["extra_kind"] in ("wide", "no-ball"):
                continue
            over = int(r["over"])
            phase = Phase.PP if over <= 5 else Phase.MI if over <= 14 else Phase.DE
            if r["wicket_player_out"] and r["dismissal_type"] != "run out":
                out = "W"
            elif r["runs_batsman"] == "5":
                continue
            else:
                out = r["runs_batsman"]
            oracle[(r["bowler"], phase, out)] += 1

    assert sum(oracle.values()) == sum(sum(c.values()) for c in table.counts.values())
    for (player, phase), cell in table.counts.items():
        for outcome, count in cell.items():
            assert oracle[(player, phase, outcome)] == count


# --- laplace -------------------------------------------------------------------


def test_laplace_all_zero_is_uniform():
    v = laplace_smooth({})
    assert all(abs(p - 1 / 7) < 1e-15 for p in v.p)


def test_laplace_93_dots():
    v = laplace_smooth({"0": 93})
    assert v["0"] == pytest.approx(94 / 100, abs=1e-15)
    for o in OUTCOMES:
        if o != "0":
            assert v[o] == pytest.approx(1 / 100, abs=1e-15)


@given(
    st.lists(st.integers(min_value=0, max_value=500), min_size=7, max_size=7).filter(
        lambda c: sum(c) >= 1
    )
)
def test_laplace_distortion_bounded_by_7_over_n(counts):
    cell = dict(zip(OUTCOMES, counts))
    n = sum(counts)
    smoothed = laplace_smooth(cell)
    for o, c in cell.items():
        assert abs(smoothed[o] - c / n) <= 7 / n + 1e-12


def test_laplace_distortion_at_n_700():
    cell = {"0": 400, "1": 250, "4": 50}  # n = 700
    smoothed = laplace_smooth(cell)
    for o in OUTCOMES:
        raw = cell.get(o, 0) / 700
        assert abs(smoothed[o] - raw) <= 7 / 700


@given(st.lists(st.integers(min_value=0, max_value=10_000), min_size=7, max_size=7))
def test_laplace_output_strictly_positive_and_normalized(counts):
    v = laplace_smooth(dict(zip(OUTCOMES, counts)))
    assert all(p > 0 for p in v.p)
    assert abs(sum(v.p) - 1.0) <= 1e-12


# --- population average ---------------------------------------------------------


def test_population_average_single_player_equals_smoothed():
    table = accumulate([ao("A", Phase.MI, "0"), ao("A", Phase.MI, "4")], "batsman")
    pop = population_average(table, Phase.MI)
    assert pop.p == laplace_smooth({"0": 1, "4": 1}).p


def test_population_average_two_identical_players():
    outcomes = [ao(p, Phase.DE, o) for p in ("A", "B") for o in ("0", "4", "6")]
    table = accumulate(outcomes, "batsman")
    pop = population_average(table, Phase.DE)
    single = laplace_smooth({"0": 1, "4": 1, "6": 1})
    assert np.allclose(pop.as_array(), single.as_array(), atol=1e-15)


def test_population_average_empty_phase_raises():
    table = accumulate([ao("A", Phase.MI, "0")], "batsman")
    with pytest.raises(ValueError, match="PP"):
        population_average(table, Phase.PP)


def test_population_average_corpus_brute_force(corpus_result):
    outcomes = attributed_outcomes(corpus_result.deliveries, "batsman")
    table = accumulate(outcomes, "batsman")
    pop = population_average(table, Phase.MI)

    # independent recomputation straight from the outcome list
    totals = Counter()
    players = set()
    for a in outcomes:
        if a.phase is Phase.MI:
            players.add(a.player)
            totals[a.outcome] += 1
    smoothed = {o: totals[o] + len(players) for o in OUTCOMES}
    denom = sum(smoothed.values())
    for o in OUTCOMES:
        assert pop[o] == pytest.approx(smoothed[o] / denom, abs=1e-12)


# --- blending -------------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(0, 0.0), (50, 0.5), (150, 0.75)])
def test_blend_weight_examples(n, expected):
    assert blend_weight(n) == pytest.approx(expected, abs=1e-15)


@given(st.integers(min_value=0, max_value=100_000))
def test_blend_weight_in_range_and_monotone(n):
    lam = blend_weight(n)
    assert 0.0 <= lam < 1.0
    assert blend_weight(n + 1) > lam


def test_blend_endpoints_and_midpoint():
    a = vec(W=0.1, d=0.4, s1=0.5)
    b = vec(W=0.05, d=0.45, s1=0.5)
    assert blend(a, b, 1.0).p == a.p
    assert blend(a, b, 0.0).p == b.p
    assert blend(a, b, 0.5)["W"] == pytest.approx(0.075, abs=1e-15)


# --- derived stats ---------------------------------------------------------------


def test_derive_stats_uniform():
    stats = derive_stats(OutcomeVector(tuple([1 / 7] * 7)))
    assert stats.sr == pytest.approx(1600 / 7, abs=1e-9)
    assert stats.er == pytest.approx(96 / 7, abs=1e-9)


def test_derive_stats_point_masses():
    w = derive_stats(OutcomeVector.point_mass("W"))
    assert (w.sr, w.er, w.p_w) == (0.0, 0.0, 1.0)
    six = derive_stats(OutcomeVector.point_mass("6"))
    assert six.sr == pytest.approx(600.0)
    assert six.er == pytest.approx(36.0)


def random_vectors(count, seed):
    rng = np.random.Generator(np.random.Philox(key=seed))
    for _ in range(count):
        raw = rng.dirichlet(np.ones(7))
        yield OutcomeVector(tuple(raw / raw.sum()))


def test_er_is_exactly_006_times_sr_on_1000_random_vectors():
    for v in random_vectors(1000, seed=11):
        stats = derive_stats(v)
        assert stats.er == 0.06 * stats.sr  # bitwise


def test_sr_linear_under_blend():
    rng = np.random.Generator(np.random.Philox(key=5))
    vs = list(random_vectors(40, seed=17))
    for a, b in zip(vs[::2], vs[1::2]):
        lam = float(rng.random())
        blended = blend(a, b, lam)
        expected = lam * derive_stats(a).sr + (1 - lam) * derive_stats(b).sr
        assert derive_stats(blended).sr == pytest.approx(expected, abs=1e-9)


def test_blended_profiles_normalized(corpus_result):
    outcomes = attributed_outcomes(corpus_result.deliveries, "batsman")
    profiles = build_profiles(accumulate(outcomes, "batsman"))
    assert profiles
    for prof in profiles.values():
        assert abs(sum(prof.vector.p) - 1.0) <= 1e-12
        assert all(0.0 < p < 1.0 for p in prof.vector.p)
        assert prof.lam == blend_weight(prof.n)


# --- summary fitting --------------------------------------------------------------


def test_fit_fixed_point_returns_population_shape():
    shape = vec(W=0.05, d=0.35, s1=0.32, s2=0.08, s3=0.01, s4=0.12, s6=0.07)
    stats = derive_stats(shape)
    fitted = fit_profile_from_summary(stats.sr, stats.p_w, shape)
    assert np.allclose(fitted.as_array(), shape.as_array(), atol=1e-12)


def test_fit_zero_strike_rate_puts_everything_on_dot():
    shape = vec(W=0.05, d=0.35, s1=0.32, s2=0.08, s3=0.01, s4=0.12, s6=0.07)
    fitted = fit_profile_from_summary(0.0, 0.2, shape)
    assert fitted["0"] == pytest.approx(0.8, abs=1e-15)
    assert all(fitted[o] == 0.0 for o in ("1", "2", "3", "4", "6"))


def test_fit_reproduces_economy_within_1e9():
    # the scarce best bowler's death-over row: er 8.40 -> sr 140.0, p_w 0.075
    shape = vec(W=0.08, d=0.30, s1=0.31, s2=0.0806, s3=0.0093, s4=0.1178, s6=0.1023)
    fitted = fit_profile_from_summary(8.40 / 0.06, 0.075, shape)
    stats = derive_stats(fitted)
    assert stats.er == pytest.approx(8.40, abs=1e-9)
    assert stats.p_w == 0.075


def test_fit_infeasible_dot_mass_names_bound():
    shape = vec(W=0.05, d=0.35, s1=0.55, s2=0.02, s3=0.0, s4=0.02, s6=0.01)
    with pytest.raises(FitError, match="dot mass"):
        fit_profile_from_summary(250.0, 0.2, shape)


def test_fit_rejects_bad_probabilities():
    shape = vec(W=0.05, d=0.35, s1=0.32, s2=0.08, s3=0.01, s4=0.12, s6=0.07)
    with pytest.raises(FitError, match="dismissal"):
        fit_profile_from_summary(100.0, 1.0, shape)
    with pytest.raises(FitError, match="strike rate"):
        fit_profile_from_summary(-1.0, 0.1, shape)


# --- store round trip ---------------------------------------------------------------


def test_store_round_trip(tmp_path):
    store = build_store(CORPUS, exclude=["M003"])
    store.save(tmp_path / "store")
    loaded = ProfileStore.load(tmp_path / "store")
    assert loaded.corpus_hash == store.corpus_hash
    assert loaded.excluded == ("M003",)
    assert loaded.n_min == 50
    assert set(loaded.batting) == set(store.batting)
    for key, prof in store.batting.items():
        other = loaded.batting[key]
        assert other.n == prof.n
        assert math.isclose(other.lam, prof.lam, abs_tol=1e-11)
        for a, b in zip(other.vector.p, prof.vector.p):
            assert math.isclose(a, b, abs_tol=1e-11)


def test_store_excluded_matches_absent():
    store = build_store(CORPUS, exclude=["M001"])
    full = build_store(CORPUS)
    total_excl = sum(p.n for (pl, ph), p in store.batting.items())
    total_full = sum(p.n for (pl, ph), p in full.batting.items())
    assert total_excl < total_full
