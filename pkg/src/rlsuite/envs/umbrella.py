"""Umbrella chain: only the first action matters, the rest is confounding noise."""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import Environment


class Umbrella(Environment):
    """Observation ``[need (t=1 only), have, t / T, distractors...]``.

    The first action sets ``have``; the final reward is +1 when it matches
    ``need`` and -1 otherwise. Every earlier step pays an independent fair
    +/-1 coin flip. The flips average out, so the clean reward used for
    regret counts only the final payoff.
    """

    num_actions = 2

    def __init__(self, chain_length: int, n_distractors: int = 20, seed: int = 0):
        super().__init__()
        if chain_length < 1 or n_distractors < 0:
            raise ValueError(f"need chain_length >= 1 and n_distractors >= 0")
        self.chain_length = chain_length
        self.n_distractors = n_distractors
        self.observation_size = 3 + n_distractors
        self._rng = np.random.default_rng(seed)
        self.need = 1.0
        self.have = 0.0
        self.t = 1

    def _observation(self):
        obs = np.empty(self.observation_size)
        obs[0] = self.need if self.t == 1 else 0.0
        obs[1] = self.have
        obs[2] = self.t / self.chain_length
        obs[3:] = self._rng.choice([-1.0, 1.0], size=self.n_distractors)
        return obs

    def _reset(self):
        self.need = 1.0 if self._rng.random() < 0.5 else -1.0
        self.have = 0.0
        self.t = 1
        return self._observation()

    def _step(self, action):
        if self.t == 1:
            self.have = 1.0 if action == 1 else -1.0
        if self.t == self.chain_length:
            reward = 1.0 if self.have == self.need else -1.0
            return np.zeros(self.observation_size), reward, True
        self.t += 1
        self.clean_reward = 0.0
        return self._observation(), 1.0 if self._rng.random() < 0.5 else -1.0, False


def make_umbrella(chain_length: int, n_distractors: int = 20, seed: int = 0) -> Umbrella:
    return Umbrella(chain_length, n_distractors, seed)
