import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlsuite.env_core import (ContractError, Environment, NoiseWrapper, ScaleWrapper, StepType,
                              wrap_reward_noise, wrap_reward_scale)
from rlsuite.envs import Bandit, Catch, MemoryChain

from conftest import rollout


class Counter(Environment):
    """Three-step episodes with rewards 1, 2, 3."""

    observation_size = 1
    num_actions = 2

    def _reset(self):
        self.t = 0
        return np.zeros(1)

    def _step(self, action):
        self.t += 1
        return np.full(1, self.t), float(self.t), self.t == 3


def test_first_mid_last_protocol():
    env = Counter()
    ts = env.reset()
    assert ts.step_type is StepType.FIRST and ts.reward == 0.0 and ts.discount == 1.0
    types = [env.step(0).step_type for _ in range(3)]
    assert types == [StepType.MID, StepType.MID, StepType.LAST]


def test_last_has_zero_discount():
    env = Counter()
    env.reset()
    env.step(0), env.step(0)
    assert env.step(0).discount == 0.0


def test_step_before_reset_is_contract_error():
    with pytest.raises(ContractError):
        Counter().step(0)


def test_step_after_last_is_contract_error():
    env = Counter()
    rollout(env, lambda ts: 0)
    with pytest.raises(ContractError):
        env.step(0)


def test_action_out_of_range():
    env = Counter()
    env.reset()
    with pytest.raises(ValueError):
        env.step(2)


def test_spec_reports_sizes():
    spec = Catch().spec()
    assert (spec.observation_size, spec.num_actions, spec.episode_budget) == (50, 3, 10_000)


def test_scale_wrapper_exact():
    env = wrap_reward_scale(Counter(), 0.1)
    rewards, _ = rollout(env, lambda ts: 0)[0]
    assert rewards == [0.1 * 1.0, 0.1 * 2.0, 0.1 * 3.0]


@given(st.floats(0.01, 100.0), st.integers(0, 2**31))
def test_scale_wrapper_multiplies_every_reward(scale, seed):
    plain = rollout(Catch(seed), lambda ts: 1, episodes=2)
    scaled = rollout(ScaleWrapper(Catch(seed), scale), lambda ts: 1, episodes=2)
    for (r0, _), (r1, _) in zip(plain, scaled):
        assert r1 == [scale * r for r in r0]


def test_scale_wrapper_rejects_nonpositive():
    with pytest.raises(ValueError):
        ScaleWrapper(Counter(), 0.0)


def test_noise_sigma_zero_is_identity():
    env = NoiseWrapper(Counter(), 0.0, seed=3)
    assert rollout(env, lambda ts: 0)[0][0] == [1.0, 2.0, 3.0]


def test_noise_rejects_negative_sigma():
    with pytest.raises(ValueError):
        NoiseWrapper(Counter(), -1.0)


def test_noise_statistics():
    env = wrap_reward_noise(Bandit(0), 1.0, seed=7)
    base = Bandit(0).arm_rewards[0]
    draws = np.empty(100_000)
    for i in range(draws.size):
        env.reset()
        draws[i] = env.step(0).reward - base
    assert abs(draws.mean()) < 0.02
    assert abs(draws.std() - 1.0) < 0.02


def test_noise_is_seeded():
    a = rollout(NoiseWrapper(Counter(), 1.0, seed=1), lambda ts: 0, episodes=3)
    b = rollout(NoiseWrapper(Counter(), 1.0, seed=1), lambda ts: 0, episodes=3)
    c = rollout(NoiseWrapper(Counter(), 1.0, seed=2), lambda ts: 0, episodes=3)
    assert [r for r, _ in a] == [r for r, _ in b] != [r for r, _ in c]


def test_noise_keeps_clean_reward():
    env = NoiseWrapper(Counter(), 1.0, seed=1)
    env.reset()
    ts = env.step(0)
    assert env.clean_reward == 1.0 and ts.reward != 1.0


def test_noise_leaves_first_step_reward_zero():
    env = NoiseWrapper(MemoryChain(3), 1.0)
    assert env.reset().reward == 0.0


def test_wrapper_forwards_attributes():
    env = ScaleWrapper(NoiseWrapper(Bandit(4), 0.5), 2.0)
    assert env.best_action() == Bandit(4).best_action()
    assert isinstance(env.unwrapped(), Bandit)
    env.episode_budget = 123
    assert env.unwrapped().episode_budget == 123 and env.spec().episode_budget == 123
