"""Catch: a ball falls down a 10x5 board; move the paddle to meet it."""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import Environment

ROWS = 10
COLS = 5


class Catch(Environment):
    observation_size = ROWS * COLS
    num_actions = 3  # left, stay, right

    def __init__(self, seed: int = 0):
        super().__init__()
        self._rng = np.random.default_rng(seed)
        self.ball_row = 0
        self.ball_col = 0
        self.paddle_col = COLS // 2

    def _observation(self):
        board = np.zeros(ROWS * COLS)
        board[self.ball_row * COLS + self.ball_col] = 1.0
        board[(ROWS - 1) * COLS + self.paddle_col] = 1.0
        return board

    def _reset(self):
        self.ball_row = 0
        self.ball_col = int(self._rng.integers(COLS))
        self.paddle_col = COLS // 2
        return self._observation()

    def _step(self, action):
        self.paddle_col = min(max(self.paddle_col + action - 1, 0), COLS - 1)
        self.ball_row += 1
        if self.ball_row == ROWS - 1:
            reward = 1.0 if self.paddle_col == self.ball_col else -1.0
            return self._observation(), reward, True
        return self._observation(), 0.0, False


def make_catch(seed: int = 0) -> Catch:
    return Catch(seed)


def random_policy_return() -> float:
    """Exact expected return of the uniform policy, by dynamic programming
    over the paddle's clamped random walk."""
    dist = np.zeros(COLS)
    dist[COLS // 2] = 1.0
    for _ in range(ROWS - 1):
        nxt = np.zeros(COLS)
        for col, p in enumerate(dist):
            for move in (-1, 0, 1):
                nxt[min(max(col + move, 0), COLS - 1)] += p / 3
        dist = nxt
    # ball column is uniform and independent of the paddle walk
    p_catch = dist.sum() / COLS
    return 2 * p_catch - 1
