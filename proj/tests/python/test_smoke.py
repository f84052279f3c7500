"""Smoke tests for the compiled module: construction, planning, bounds and a
tiny end-to-end experiment. The heavy numerical checks live in the C++ suites.
"""

import math
import xml.etree.ElementTree as ET

import pytest

import ucbvi_lab as lab


def test_riverswim_shape_and_optimal_value():
    river = lab.riverswim(5, 10)
    assert river.num_states == 5
    assert river.num_actions == 2
    river.validate()
    values, policy = lab.exact_value_iteration(river)
    assert 0.0 < values.value(0, 0) <= 10.0
    assert policy.at(0, 0) == 1  # swimming is optimal at the start
    gap = values.action_value(0, 0, 1) - values.action_value(0, 0, 0)
    assert 0.03 <= gap <= 0.3


def test_random_mdp_is_seed_deterministic():
    a = lab.random_mdp(3, 2, 4, seed=7)
    b = lab.random_mdp(3, 2, 4, seed=7)
    assert a.transition == b.transition
    assert a.reward == b.reward
    c = lab.random_mdp(3, 2, 4, seed=8)
    assert a.transition != c.transition


def test_policy_evaluation_is_consistent_with_value_iteration():
    mdp = lab.random_mdp(4, 3, 6, seed=123)
    values, policy = lab.exact_value_iteration(mdp)
    achieved = lab.evaluate_policy(mdp, policy)
    for x in range(mdp.num_states):
        assert achieved.value(0, x) == pytest.approx(values.value(0, x), abs=1e-12)


def test_mdp_round_trip(tmp_path):
    mdp = lab.random_mdp(3, 2, 5, seed=99)
    path = str(tmp_path / "env.tabmdp")
    lab.save_mdp(mdp, path)
    loaded = lab.load_mdp(path)
    assert loaded.transition == mdp.transition
    assert loaded.reward == mdp.reward


def test_bounds_and_ratios():
    T = 100000 * 5
    t1 = lab.theorem1_bound(5, 3, 3, T, 0.05)
    t2 = lab.theorem2_bound(5, 3, 3, T, 0.05)
    assert t1 > 0 and t2 > 0
    L = lab.log_term(5, 3, 3, T, 0.05)
    assert L == pytest.approx(math.log(5 * 5 * 3 * 3 * T / 0.05), abs=1e-12)
    ratios = lab.ratio_table()
    assert ratios["ch_bonus"] == pytest.approx(3.5, abs=1e-12)
    assert ratios["ch_regret"] == pytest.approx(2.0, abs=1e-12)
    assert ratios["bf_bonus"] == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert ratios["bf_regret"] == pytest.approx(1.25, abs=1e-12)


def test_bonus_and_bernstein_helpers():
    b0 = lab.bonus_ch(0, "refined", 5, 3, 3, 1000, 0.05)
    b4 = lab.bonus_ch(4, "refined", 5, 3, 3, 1000, 0.05)
    assert b0 == pytest.approx(2 * b4)
    assert lab.bonus_ch(4, "original", 5, 3, 3, 1000, 0.05) == pytest.approx(
        3.5 * b4
    )
    assert lab.bernstein_bernoulli_bound(0.5, 50, 0.05) > 0
    assert lab.empirical_next_value_variance([0.5, 0.5], [0.0, 2.0]) == 1.0


def test_small_experiment_end_to_end(tmp_path):
    out_dir = tmp_path / "out"
    summary = lab.run_experiment(
        env_kind="random",
        num_states=3,
        num_actions=3,
        horizon=5,
        env_seed=1,
        agents=["bf-refined", "mvp"],
        episodes=150,
        runs=2,
        master_seed=11,
        parallelism=2,
        out_dir=str(out_dir),
    )
    assert set(summary.keys()) == {"bf-refined", "mvp"}
    trace = summary["bf-refined"]
    assert len(trace["episodes"]) == 150
    cum = trace["mean_cum_regret"]
    assert all(b >= a - 1e-9 for a, b in zip(cum, cum[1:]))
    assert cum[-1] <= 150 * 5

    # Emitted files exist and the chart is well-formed XML.
    assert (out_dir / "summary.csv").exists()
    assert (out_dir / "meta.txt").exists()
    root = ET.parse(out_dir / "regret.svg").getroot()
    assert root.tag.endswith("svg")


def test_rng_identifier_exposed():
    assert "mt19937_64" in lab.rng_algorithm_id
