"""T-maze memory chain: remember a context bit (or one of several bits)
shown at the start until the final step.

Actions 0 and 1 stand for -1 and +1. The observation is ``[c, t / N]`` for a
single bit and ``[c_1..c_B, query, t / N]`` otherwise; context is shown only
on the first step and the query (index / num_bits) only on the last
decision step.
"""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import Environment


class MemoryChain(Environment):
    num_actions = 2

    def __init__(self, length: int, num_bits: int = 1, seed: int = 0):
        super().__init__()
        if length < 1 or num_bits < 1:
            raise ValueError(f"need length >= 1 and num_bits >= 1, got {length}, {num_bits}")
        self.length = length
        self.num_bits = num_bits
        # the query slot only exists when there is more than one bit to ask about
        self.observation_size = num_bits + 1 + (num_bits > 1)
        self._rng = np.random.default_rng(seed)
        self.context = np.zeros(num_bits)
        self.query = 0
        self.t = 0

    def correct_action(self) -> int:
        return int(self.context[self.query] > 0)

    def _observation(self):
        obs = np.zeros(self.observation_size)
        if self.t == 1:
            obs[: self.num_bits] = self.context
        if self.t == self.length and self.num_bits > 1:
            obs[self.num_bits] = self.query / self.num_bits
        obs[-1] = self.t / self.length
        return obs

    def _reset(self):
        self.context = self._rng.choice([-1.0, 1.0], size=self.num_bits)
        self.query = int(self._rng.integers(self.num_bits))
        self.t = 1
        return self._observation()

    def _step(self, action):
        if self.t < self.length:
            self.t += 1
            return self._observation(), 0.0, False
        reward = 1.0 if action == self.correct_action() else -1.0
        return np.zeros(self.observation_size), reward, True


def make_memory_chain(length: int, num_bits: int = 1, seed: int = 0) -> MemoryChain:
    return MemoryChain(length, num_bits, seed)
