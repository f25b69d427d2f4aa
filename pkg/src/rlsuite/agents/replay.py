"""Fixed-capacity ring buffer with uniform sampling."""

from __future__ import annotations

import numpy as np


class ReplayBuffer:
    """Stores named fields in preallocated arrays; ``add`` overwrites the
    oldest item once ``capacity`` is reached."""

    def __init__(self, capacity: int, shapes: dict[str, tuple], dtypes: dict[str, type] | None = None):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        dtypes = dtypes or {}
        self.capacity = capacity
        self._data = {k: np.zeros((capacity,) + tuple(s), dtype=dtypes.get(k, np.float64))
                      for k, s in shapes.items()}
        self._next = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def add(self, **items) -> None:
        i = self._next
        for k, v in items.items():
            self._data[k][i] = v
        self._next = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
        if self.size == 0:
            raise ValueError("cannot sample from an empty buffer")
        idx = rng.integers(self.size, size=batch_size)
        return {k: v[idx] for k, v in self._data.items()}
