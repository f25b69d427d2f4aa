"""Finite-armed bandit with deterministic rewards 0.0, 0.1, ..., 1.0."""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import Environment

ARM_VALUES = np.linspace(0.0, 1.0, 11)


class Bandit(Environment):
    observation_size = 1
    num_actions = 11

    def __init__(self, seed: int = 0):
        super().__init__()
        rng = np.random.default_rng(seed)
        self.arm_rewards = rng.permutation(ARM_VALUES)
        self._obs = np.ones(1)

    def best_action(self) -> int:
        return int(np.argmax(self.arm_rewards))

    def _reset(self):
        return self._obs

    def _step(self, action):
        return self._obs, float(self.arm_rewards[action]), True


def make_bandit(seed: int = 0) -> Bandit:
    return Bandit(seed)
