"""Deep sea: an N x N grid where only the all-right trajectory pays off.

The agent starts top-left and descends one row per step. In every cell a
seed-fixed bit decides which of the two actions means "right". Moving right
costs 0.01 / N; moving right on all N steps earns a +1 bonus at the end.
"""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import Environment


class DeepSea(Environment):
    num_actions = 2

    def __init__(self, size: int, stochastic: bool = False, seed: int = 0):
        super().__init__()
        if size < 2:
            raise ValueError(f"deep sea size must be >= 2, got {size}")
        self.size = size
        self.stochastic = stochastic
        self.observation_size = size * size
        rng = np.random.default_rng(seed)
        self.action_map = rng.integers(0, 2, size=(size, size), dtype=np.int8)
        self._rng = np.random.default_rng([seed, 1])
        self.move_cost = 0.01 / size
        self.flip_prob = 1.0 / size if stochastic else 0.0
        self.row = 0
        self.col = 0
        self._all_right = True

    def right_action(self, row: int | None = None, col: int | None = None) -> int:
        row = self.row if row is None else row
        col = self.col if col is None else col
        return int(self.action_map[row, col])

    def _observation(self):
        obs = np.zeros(self.observation_size)
        if self.row < self.size:
            obs[self.row * self.size + self.col] = 1.0
        return obs

    def _reset(self):
        self.row = 0
        self.col = 0
        self._all_right = True
        return self._observation()

    def _step(self, action):
        go_right = action == self.action_map[self.row, self.col]
        if self.stochastic and self._rng.random() < self.flip_prob:
            go_right = not go_right
        if go_right:
            reward = -self.move_cost
            self.col = min(self.col + 1, self.size - 1)
        else:
            reward = 0.0
            self._all_right = False
            self.col = max(self.col - 1, 0)
        self.row += 1
        last = self.row == self.size
        if last and self._all_right:
            reward += 1.0
        if self.stochastic:
            self.clean_reward = reward
            reward += self._rng.standard_normal()
        return self._observation(), reward, last

    def optimal_return(self) -> float:
        """Expected clean return of always choosing "right"."""
        p = 1.0 - self.flip_prob
        return p**self.size - 0.01 * p

    def random_return(self) -> float:
        """Expected clean return of the uniform policy (moves are fair coins
        whether or not transitions are flipped)."""
        return 0.5**self.size - 0.01 * 0.5


def make_deep_sea(size: int, stochastic: bool = False, seed: int = 0) -> DeepSea:
    return DeepSea(size, stochastic, seed)
