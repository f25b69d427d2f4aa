import math
import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlsuite.envs import Bandit, Cartpole, Catch, MnistBandit, MnistDataset, MountainCar
from rlsuite.envs import catch as catch_mod
from rlsuite.envs import mountain_car as mc
from rlsuite.envs.idx import IdxParseError, encode_idx, parse_idx, write_idx_dataset

from conftest import rollout

# --- bandit -----------------------------------------------------------------


def test_bandit_arms_are_a_permutation_of_the_grid():
    assert sorted(Bandit(3).arm_rewards) == pytest.approx([i / 10 for i in range(11)])


def test_bandit_best_arm_pays_one():
    env = Bandit(5)
    env.reset()
    ts = env.step(env.best_action())
    assert ts.reward == 1.0 and ts.last()


def test_bandit_uniform_expected_reward_is_half():
    # uniform policy expected regret 0.5, the score's lower anchor
    assert Bandit(0).arm_rewards.mean() == pytest.approx(0.5)


def test_bandit_seeds_differ():
    assert not np.array_equal(Bandit(0).arm_rewards, Bandit(1).arm_rewards)


# --- IDX / MNIST ------------------------------------------------------------


def test_idx_round_trip_images_and_labels():
    rng = np.random.default_rng(0)
    images = rng.integers(0, 256, (7, 28, 28), dtype=np.uint8)
    labels = rng.integers(0, 10, 7, dtype=np.uint8)
    parsed = parse_idx(encode_idx(images))
    assert parsed.shape == (7, 784) and parsed.dtype == np.float64
    assert np.array_equal(parsed, images.reshape(7, -1) / 255.0)
    assert np.array_equal(parse_idx(encode_idx(labels)), labels.astype(np.int64))


def test_idx_header_bytes_by_hand():
    data = bytes([0, 0, 8, 1, 0, 0, 0, 3, 4, 0, 9])
    assert parse_idx(data).tolist() == [4, 0, 9]


def test_idx_bad_magic_reports_offset_zero():
    with pytest.raises(IdxParseError) as err:
        parse_idx(struct.pack(">I", 0x12345678) + b"\0" * 8)
    assert err.value.offset == 0


def test_idx_truncated_payload():
    data = encode_idx(np.zeros((2, 28, 28), dtype=np.uint8))[:-5]
    with pytest.raises(IdxParseError):
        parse_idx(data)


def test_idx_trailing_bytes():
    with pytest.raises(IdxParseError):
        parse_idx(encode_idx(np.zeros(3, dtype=np.uint8)) + b"\x00")


def test_idx_label_out_of_range():
    with pytest.raises(IdxParseError):
        parse_idx(encode_idx(np.array([1, 10], dtype=np.uint8)))


@given(st.binary(max_size=64))
def test_idx_fuzz_never_crashes_unexpectedly(data):
    try:
        parse_idx(data)
    except IdxParseError:
        pass


def test_mnist_dataset_load(tmp_path):
    rng = np.random.default_rng(1)
    write_idx_dataset(tmp_path, rng.integers(0, 256, (5, 28, 28)), np.arange(5))
    ds = MnistDataset.load(tmp_path)
    assert len(ds) == 5 and ds.images.shape == (5, 784)
    with pytest.raises(ValueError):
        ds.images[0, 0] = 1.0


def test_mnist_bandit_rewards(mnist_dir):
    env = MnistBandit(MnistDataset.load(mnist_dir), seed=0)
    for _ in range(20):
        ts = env.reset()
        assert ts.observation.shape == (784,)
        label = env.label
        assert env.step(label).reward == 1.0
        env.reset()
        assert env.step((env.label + 1) % 10).reward == -1.0


def test_mnist_bandit_empty_dataset():
    with pytest.raises(ValueError):
        MnistBandit(MnistDataset(np.zeros((0, 784)), np.zeros(0, dtype=np.int64)))


# --- catch ------------------------------------------------------------------


def catch_reference(ball_col, actions):
    """Straight-line catch: paddle starts mid, ball falls one row per step."""
    paddle, row = 2, 0
    for a in actions:
        paddle = min(max(paddle + a - 1, 0), 4)
        row += 1
        if row == 9:
            return 1.0 if paddle == ball_col else -1.0
    raise AssertionError("episode longer than 9 steps")


@given(st.integers(0, 2**31), st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_catch_matches_reference(seed, actions):
    env = Catch(seed)
    ts = env.reset()
    ball = env.ball_col
    assert ts.observation.reshape(10, 5)[0, ball] == 1.0
    steps = [env.step(a) for a in actions]
    rewards = [t.reward for t in steps]
    assert steps[-1].last() and not any(t.last() for t in steps[:-1])
    assert rewards[:-1] == [0.0] * 8
    assert rewards[-1] == catch_reference(ball, actions)


def test_catch_random_return_by_monte_carlo():
    rng = np.random.default_rng(0)
    env = Catch(0)
    returns = [sum(rollout(env, lambda ts: int(rng.integers(3)))[0][0]) for _ in range(20_000)]
    # s.e. of the mean is about 0.0057
    assert np.mean(returns) == pytest.approx(catch_mod.random_policy_return(), abs=0.025)
    assert catch_mod.random_policy_return() == pytest.approx(-0.6, abs=0.02)


# --- cartpole ---------------------------------------------------------------


def cartpole_reference(state, force):
    x, x_dot, theta, theta_dot = state
    cos, sin = math.cos(theta), math.sin(theta)
    temp = (force + 0.05 * theta_dot**2 * sin) / 1.1
    theta_acc = (9.8 * sin - cos * temp) / (0.5 * (4 / 3 - 0.1 * cos**2 / 1.1))
    x_acc = temp - 0.05 * theta_acc * cos / 1.1
    return (x + 0.02 * x_dot, x_dot + 0.02 * x_acc, theta + 0.02 * theta_dot, theta_dot + 0.02 * theta_acc)


@given(st.integers(0, 2**31), st.lists(st.integers(0, 2), min_size=1, max_size=60))
def test_cartpole_matches_reference(seed, actions):
    env = Cartpole(seed)
    env.reset()
    s = env.state
    ref = (s.x, s.x_dot, s.theta, s.theta_dot)
    for a in actions:
        ts = env.step(a)
        ref = cartpole_reference(ref, 10.0 * (a - 1))
        s = env.state
        assert np.allclose((s.x, s.x_dot, s.theta, s.theta_dot), ref, rtol=0, atol=1e-12)
        failed = abs(ref[2]) > 12 * math.pi / 180 or abs(ref[0]) > 2.4
        assert ts.reward == (0.0 if failed else 1.0)
        if ts.last():
            assert failed
            break


def test_cartpole_start_within_range():
    env = Cartpole(9)
    for _ in range(50):
        env.reset()
        s = env.state
        assert max(abs(s.x), abs(s.x_dot), abs(s.theta), abs(s.theta_dot)) <= 0.05


def test_cartpole_episode_cap():
    env = Cartpole(0, max_steps=20)
    rewards, steps = rollout(env, lambda ts: 1 if ts.observation[4] == 0 else (2 if ts.observation[3] > 0 else 0))[0]
    assert len(rewards) <= 20


# --- mountain car -----------------------------------------------------------


def mountain_car_reference(p, v, push):
    v = v + 0.001 * push - 0.0025 * math.cos(3 * p)
    v = min(max(v, -0.07), 0.07)
    p = min(max(p + v, -1.2), 0.6)
    if p == -1.2 and v < 0:
        v = 0.0
    return p, v


@given(st.integers(0, 2**31), st.lists(st.integers(0, 2), min_size=1, max_size=200))
def test_mountain_car_matches_reference(seed, actions):
    env = MountainCar(seed)
    env.reset()
    p, v = env.position, env.velocity
    assert -0.6 <= p <= -0.4 and v == 0.0
    for a in actions:
        ts = env.step(a)
        p, v = mountain_car_reference(p, v, a - 1)
        assert abs(env.position - p) <= 1e-12 and abs(env.velocity - v) <= 1e-12
        assert ts.reward == -1.0
        if ts.last():
            break


def test_mountain_car_left_wall_stops_car():
    p, v = mc.mountain_car_update(-1.19, -0.05, -1)
    assert p == -1.2 and v == 0.0


def test_mountain_car_oracle_reaches_goal():
    env = MountainCar(0)
    rewards, _ = rollout(env, lambda ts: mc.energy_pumping_action(ts.observation[1]))[0]
    assert len(rewards) < 200


def test_mountain_car_random_never_solves_quickly():
    rng = np.random.default_rng(0)
    env = MountainCar(0)
    lengths = [len(rollout(env, lambda ts: int(rng.integers(3)))[0][0]) for _ in range(20)]
    assert min(lengths) == 1000
