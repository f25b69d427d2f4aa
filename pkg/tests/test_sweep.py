import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlsuite import sweep
from rlsuite.results import load_results, results_path

EXPECTED_COUNTS = {
    "bandit": 20, "mnist": 20, "catch": 20, "cartpole": 20, "mountain_car": 20,
    "bandit_noise": 20, "mnist_noise": 20, "catch_noise": 20, "cartpole_noise": 20, "mountain_car_noise": 20,
    "bandit_scale": 20, "mnist_scale": 20, "catch_scale": 20, "cartpole_scale": 20, "mountain_car_scale": 20,
    "deep_sea": 21, "deep_sea_stochastic": 21, "cartpole_swingup": 20,
    "umbrella_length": 22, "umbrella_features": 22, "discounting_chain": 5,
    "memory_len": 22, "memory_bits": 22,
}


def test_sweep_counts_match_registry_arithmetic():
    for name, count in EXPECTED_COUNTS.items():
        assert len(sweep.sweep_ids(name)) == count
    ids = sweep.sweep_ids()
    assert len(ids) == sum(EXPECTED_COUNTS.values()) == 455
    assert len(set(ids)) == len(ids)
    assert ids == sweep.sweep_ids()


def test_log_sweep_values():
    assert len(sweep.LOG_SWEEP) == 22 and sweep.LOG_SWEEP[0] == 1 and sweep.LOG_SWEEP[-1] == 100
    assert list(sweep.LOG_SWEEP) == sorted(set(sweep.LOG_SWEEP))


def test_deep_sea_config():
    c = sweep.env_config("deep_sea/0")
    assert c.env_kwargs["size"] == 10 and c.episode_budget == 10_000 and c.tags == {"exploration"}
    assert sweep.env_config("deep_sea/20").env_kwargs["size"] == 50


def test_tags_and_budgets():
    assert sweep.env_config("mnist/0").tags == {"basic", "generalization"}
    u = sweep.env_config("umbrella_length/0")
    assert u.episode_budget == 1000 and u.tags == {"credit_assignment", "noise"}
    assert sweep.env_config("bandit_noise/3").tags == {"noise"}
    assert sweep.env_config("deep_sea_stochastic/0").tags == {"exploration", "noise"}
    for name in ("cartpole_swingup", "umbrella_features", "discounting_chain", "memory_len", "memory_bits"):
        assert sweep.EXPERIMENTS[name].budget == 1000
    for name in ("bandit", "mnist_noise", "catch_scale", "deep_sea", "deep_sea_stochastic"):
        assert sweep.EXPERIMENTS[name].budget == 10_000


def test_every_tag_is_a_capability():
    for exp in sweep.EXPERIMENTS.values():
        assert exp.tags <= set(sweep.CAPABILITIES)


def test_noise_and_scale_levels():
    assert [sweep.env_config(f"bandit_noise/{i}").noise_sigma for i in range(0, 20, 4)] == list(sweep.NOISE_LEVELS)
    c = sweep.env_config("catch_scale/19")
    assert c.reward_scale == sweep.SCALE_LEVELS[4]
    base = sweep.env_config("catch/19")
    assert c.optimal_return == pytest.approx(base.optimal_return * c.reward_scale)
    assert c.random_regret == pytest.approx(base.random_regret * c.reward_scale)


def test_every_config_has_positive_random_regret():
    for bid in sweep.sweep_ids():
        assert sweep.env_config(bid).random_regret > 0, bid


@given(st.sampled_from(list(EXPECTED_COUNTS)), st.integers(0, 200))
def test_bsuite_id_round_trip(name, index):
    bid = sweep.BsuiteId(name, index)
    assert sweep.BsuiteId.parse(str(bid)) == bid


@pytest.mark.parametrize("bad", ["bandit", "bandit/", "bandit/x", "bandit/-1", "bandit/01"])
def test_bsuite_id_malformed(bad):
    with pytest.raises(ValueError):
        sweep.BsuiteId.parse(bad)


def test_unknown_experiment_lists_valid_names():
    with pytest.raises(KeyError, match="deep_sea"):
        sweep.env_config("nope/0")
    with pytest.raises(KeyError):
        sweep.env_config("bandit/20")


def test_every_id_builds(mnist_dir):
    for bid in sweep.sweep_ids():
        env = sweep.load(bid, mnist_dir=mnist_dir)
        ts = env.reset()
        assert ts.observation.shape == (env.observation_size,)
        assert env.step(0).reward is not None


def test_load_and_record_logs_each_episode(tmp_path):
    env = sweep.load_and_record("bandit/0", tmp_path)
    for _ in range(10):
        env.reset()
        env.step(0)
    env.close()
    rows = load_results(tmp_path).records["bandit/0"]
    assert len(rows) == 10 and all(r.bsuite_id == "bandit/0" for r in rows)
    assert rows[0].regret == pytest.approx(1.0 - env.unwrapped().arm_rewards[0])


def test_load_and_record_oracle_regret_zero_on_deep_sea(tmp_path):
    env = sweep.load_and_record("deep_sea/0", tmp_path)
    ts = env.reset()
    while not ts.last():
        ts = env.step(env.right_action())
    assert env.last_record.regret == pytest.approx(0.0, abs=1e-12)
    assert env.last_record.raw_return == pytest.approx(0.99)


def test_load_and_record_existing_file(tmp_path):
    env = sweep.load_and_record("bandit/1", tmp_path)
    env.reset(), env.step(0), env.close()
    with pytest.raises(FileExistsError):
        sweep.load_and_record("bandit/1", tmp_path)
    env = sweep.load_and_record("bandit/1", tmp_path, overwrite=True)
    env.close()
    assert not results_path(tmp_path, "bandit/1").exists()


def test_load_and_record_unwritable(tmp_path):
    target = tmp_path / "file"
    target.write_text("")
    with pytest.raises(OSError):
        sweep.load_and_record("bandit/0", target / "sub")


def test_noise_regret_uses_clean_return(tmp_path):
    env = sweep.load_and_record("bandit_noise/19", tmp_path)
    env.reset()
    env.step(env.best_action())
    assert env.last_record.regret == pytest.approx(0.0, abs=1e-12)
    assert env.last_record.raw_return != 1.0


def test_scale_regret_in_scaled_units(tmp_path):
    env = sweep.load_and_record("bandit_scale/19", tmp_path)
    env.reset()
    worst = int(np.argmin(env.unwrapped().arm_rewards))
    env.step(worst)
    assert env.last_record.regret == pytest.approx(env.config.reward_scale)


@pytest.mark.parametrize("scale,expected", [(1.0, 10_000), (0.01, 100), (0.1, 1000), (1e-9, 1)])
def test_scaled_budget(scale, expected):
    assert sweep.scaled_budget(sweep.env_config("bandit/0"), scale) == expected


@pytest.mark.parametrize("scale", [0.0, -0.5, 1.5])
def test_scaled_budget_range(scale):
    with pytest.raises(ValueError):
        sweep.scaled_budget(sweep.env_config("bandit/0"), scale)


@given(st.floats(1e-4, 1.0))
def test_scaled_budget_is_ceiling(scale):
    b = sweep.scaled_budget(sweep.env_config("memory_len/0"), scale)
    assert b == max(1, math.ceil(1000 * scale - 1e-9))
