"""Discounting chain: the first action picks one of five chains whose single
reward arrives after 1, 3, 10, 30 or 100 steps. One seed-chosen chain pays
1.1, the others 1.0."""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import Environment

HORIZONS = (1, 3, 10, 30, 100)
EPISODE_LENGTH = 100
BONUS = 0.1


class DiscountingChain(Environment):
    num_actions = len(HORIZONS)
    observation_size = len(HORIZONS) + 1

    def __init__(self, seed: int = 0):
        super().__init__()
        self.optimal_chain = seed % len(HORIZONS)
        self.rewards = np.ones(len(HORIZONS))
        self.rewards[self.optimal_chain] += BONUS
        self.chosen = None
        self.t = 0

    def _observation(self):
        obs = np.zeros(self.observation_size)
        if self.chosen is not None:
            obs[self.chosen] = 1.0
        obs[-1] = self.t / EPISODE_LENGTH
        return obs

    def _reset(self):
        self.chosen = None
        self.t = 0
        return self._observation()

    def _step(self, action):
        if self.t == 0:
            self.chosen = action
        self.t += 1
        reward = float(self.rewards[self.chosen]) if self.t == HORIZONS[self.chosen] else 0.0
        return self._observation(), reward, self.t == EPISODE_LENGTH


def make_discounting_chain(seed: int = 0) -> DiscountingChain:
    return DiscountingChain(seed)
