import math

import pytest
from hypothesis import given, strategies as st

from t20opt.engine.mc import (
    EvalResult,
    PhaseProfiles,
    plan_violation,
    simulate_batting,
    simulate_bowling,
    standard_error,
)
from t20opt.engine.mc import _run_batting
from t20opt.errors import InfeasiblePlanError, InfeasibleScenarioError, ScenarioError
from t20opt.outcomes import OutcomeVector, Phase

from conftest import batting_toy, bowling_toy, vec


def test_point_mass_six_single_ball_always_wins():
    scenario = batting_toy(6, 1, [OutcomeVector.point_mass("6")], OutcomeVector.point_mass("0"))
    result = simulate_batting(scenario, ("B0",), 200, seed=1)
    assert result.v_hat == 1.0


def test_point_mass_wicket_never_wins():
    w = OutcomeVector.point_mass("W")
    scenario = batting_toy(5, 10, [w, w], w)
    result = simulate_batting(scenario, ("B0", "B1"), 200, seed=1)
    assert result.v_hat == 0.0


@pytest.mark.parametrize("q", [0.1, 0.3, 0.7])
def test_single_ball_bernoulli_matches_analytic(q):
    profile = vec(d=1 - q, s6=q)
    scenario = batting_toy(6, 1, [profile], vec(d=1.0))
    result = simulate_batting(scenario, ("B0",), 50_000, seed=42)
    assert abs(result.v_hat - q) <= 3 * standard_error(q, 50_000) + 1e-12


def test_batting_deterministic_bit_identical():
    profile = vec(W=0.05, d=0.3, s1=0.35, s2=0.1, s4=0.13, s6=0.07)
    scenario = batting_toy(30, 18, [profile, profile], profile)
    a = simulate_batting(scenario, ("B0", "B1"), 20_000, seed=9)
    b = simulate_batting(scenario, ("B0", "B1"), 20_000, seed=9)
    assert a == b
    c = simulate_batting(scenario, ("B0", "B1"), 20_000, seed=10)
    assert c.v_hat != a.v_hat or c.seed != a.seed


def test_order_must_be_permutation():
    profile = vec(d=1.0)
    scenario = batting_toy(10, 6, [profile, profile], profile)
    with pytest.raises(ScenarioError, match="permutation"):
        simulate_batting(scenario, ("B0", "B0"), 10, seed=0)


def test_simulated_runs_converge_to_profile_strike_rate():
    """Every ball from one profile, single phase: mean runs per ball within
    2% of the profile expectation at n=100k."""
    profile = vec(d=0.25, s1=0.35, s2=0.10, s3=0.01, s4=0.17, s6=0.12)  # no wickets
    scenario = batting_toy(4000, 12, [profile], profile)  # overs 18-19, death only
    won, scored = _run_batting(scenario, ("B0",), 100_000, seed=3)
    mean_per_ball = scored.mean() / 12
    expected = profile.expected_runs()
    assert abs(mean_per_ball - expected) / expected <= 0.02
    assert not won.any()


def test_crease_survivor_bats_alone_after_pool_spends():
    """One-man pool: the survivor keeps batting after the first wicket."""
    hitter = vec(W=0.5, s6=0.5)
    scenario = batting_toy(12, 6, [hitter], vec(d=1.0))
    # two sixes anywhere among the six balls win; two wickets end it.
    result = simulate_batting(scenario, ("B0",), 50_000, seed=5)
    # NS is all-dot: after B0 falls, NS bats alone and can never score.
    # Win prob = P(second six before second wicket among B0's balls).
    # B0 faces balls until his first W; NS alone after that scores nothing.
    # Analytic: need two 6s from B0 before his 2nd... B0 out once -> NS alone
    # (dead, all dots). So win iff first two B0 deliveries are 6,6? No: after
    # one 6 (even runs, keeps strike) B0 keeps facing. Win iff B0 hits two 6s
    # before his first W: P = P(6)^... sequence of iid {W:.5, 6:.5}: first two
    # outcomes 6,6 -> prob 0.25 (within 6 balls; other patterns impossible
    # since a W ends B0's innings into the dead NS).
    assert abs(result.v_hat - 0.25) <= 3 * result.se


def test_eval_result_se_formula_and_bound():
    r = EvalResult.from_wins(19_550, 50_000, seed=1)
    assert r.se == math.sqrt(r.v_hat * (1 - r.v_hat) / 50_000)
    assert r.se <= 1 / (2 * math.sqrt(50_000))


@given(st.integers(min_value=0, max_value=1000), st.integers(min_value=1, max_value=1000))
def test_se_bound_holds_generally(wins, n):
    wins = min(wins, n)
    r = EvalResult.from_wins(wins, n, seed=0)
    assert r.se <= 1 / (2 * math.sqrt(n)) + 1e-15


def test_standard_error_examples():
    assert standard_error(0.5, 50_000) == pytest.approx(0.0022360679, abs=1e-9)
    assert standard_error(0.0, 123) == 0.0
    assert standard_error(0.391, 50_000) == pytest.approx(
        math.sqrt(0.391 * 0.609 / 50_000), abs=1e-12
    )


# --- bowling ------------------------------------------------------------------


def test_bowling_all_wickets_defends_when_wmax_one():
    w = OutcomeVector.point_mass("W")
    scenario = bowling_toy(10, 2, {"J": 2, "K": 2}, {"J": w, "K": w}, w_max=1)
    result = simulate_bowling(scenario, ("J", "K"), 500, seed=2)
    assert result.v_hat == 1.0


def test_bowling_all_sixes_never_defends():
    six = OutcomeVector.point_mass("6")
    scenario = bowling_toy(70, 2, {"J": 2, "K": 2}, {"J": six, "K": six}, w_max=5)
    result = simulate_bowling(scenario, ("J", "K"), 500, seed=2)
    assert result.v_hat == 0.0  # 12 sixes = 72 >= 70


def test_bowling_ball_exhaustion_defends():
    dot = OutcomeVector.point_mass("0")
    scenario = bowling_toy(5, 1, {"J": 1, "K": 1}, {"J": dot, "K": dot}, w_max=5)
    assert simulate_bowling(scenario, ("J",), 100, seed=0).v_hat == 1.0


def test_infeasible_plan_rejected_before_simulation():
    p = vec(d=1.0)
    scenario = bowling_toy(30, 3, {"J": 2, "K": 2}, {"J": p, "K": p})
    with pytest.raises(InfeasiblePlanError, match="adjacency"):
        simulate_bowling(scenario, ("J", "J", "K"), 100, seed=0)
    with pytest.raises(InfeasiblePlanError, match="quota"):
        simulate_bowling(
            bowling_toy(30, 3, {"J": 1, "K": 2}, {"J": p, "K": p}),
            ("J", "K", "J"),
            100,
            seed=0,
        )


def test_prev_bowler_constraint():
    p = vec(d=1.0)
    scenario = bowling_toy(30, 2, {"J": 2, "K": 2}, {"J": p, "K": p}, prev_bowler="J")
    assert plan_violation(("J", "K"), scenario) is not None
    assert plan_violation(("K", "J"), scenario) is None


def test_bowling_deterministic_and_block_cache_neutral():
    p1 = vec(W=0.05, d=0.35, s1=0.38, s2=0.08, s4=0.1, s6=0.04)
    p2 = vec(W=0.08, d=0.30, s1=0.35, s2=0.08, s4=0.12, s6=0.07)
    scenario = bowling_toy(40, 3, {"J": 2, "K": 2}, {"J": p1, "K": p2})
    plan = ("J", "K", "J")
    a = simulate_bowling(scenario, plan, 20_000, seed=4)
    b = simulate_bowling(scenario, plan, 20_000, seed=4)
    cache: dict = {}
    c = simulate_bowling(scenario, plan, 20_000, seed=4, block_cache=cache)
    d = simulate_bowling(scenario, plan, 20_000, seed=4, block_cache=cache)
    assert a == b == c == d
    assert cache  # blocks were stored


def test_quota_sum_must_cover_slots():
    p = vec(d=1.0)
    with pytest.raises(InfeasibleScenarioError, match="quota"):
        bowling_toy(30, 3, {"J": 1, "K": 1}, {"J": p, "K": p})


def test_batting_scenario_validation():
    p = vec(d=1.0)
    with pytest.raises(ScenarioError, match="pool"):
        batting_toy(10, 6, [], p)
    with pytest.raises(ScenarioError, match="r0"):
        batting_toy(0, 6, [p], p)
    with pytest.raises(ScenarioError, match="b0"):
        batting_toy(10, 121, [p], p)
    with pytest.raises(ScenarioError, match="initial_striker"):
        batting_toy(10, 6, [p], p, initial_striker="bogus")


def test_missing_phase_profile_detected():
    only_de = PhaseProfiles("B0", {Phase.DE: vec(d=1.0)})
    from t20opt.engine.mc import BattingScenario

    scenario = BattingScenario(
        r0=10, b0=40, pool=(only_de,), fixed_non_striker=PhaseProfiles("NS", {Phase.DE: vec(d=1.0)})
    )
    with pytest.raises(ScenarioError, match="MI"):
        simulate_batting(scenario, ("B0",), 10, seed=0)
