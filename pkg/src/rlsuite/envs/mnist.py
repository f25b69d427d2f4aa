"""Contextual bandit: classify an MNIST digit, +1 if right, -1 if wrong."""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import Environment
from rlsuite.envs.idx import MnistDataset


class MnistBandit(Environment):
    observation_size = 784
    num_actions = 10

    def __init__(self, dataset: MnistDataset, seed: int = 0):
        super().__init__()
        if len(dataset) == 0:
            raise ValueError("MNIST bandit needs a nonempty dataset")
        self.dataset = dataset
        self._rng = np.random.default_rng(seed)
        self._index = 0

    @property
    def label(self) -> int:
        return int(self.dataset.labels[self._index])

    def _reset(self):
        self._index = int(self._rng.integers(len(self.dataset)))
        return self.dataset.images[self._index]

    def _step(self, action):
        reward = 1.0 if action == self.label else -1.0
        return self.dataset.images[self._index], reward, True


def make_mnist_bandit(dataset: MnistDataset, seed: int = 0) -> MnistBandit:
    return MnistBandit(dataset, seed)
