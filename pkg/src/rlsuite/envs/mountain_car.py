"""Mountain car (Moore, 1990): drive an underpowered car up a hill."""

from __future__ import annotations

import math

import numpy as np

from rlsuite.env_core import Environment

MIN_POS, MAX_POS = -1.2, 0.6
MAX_SPEED = 0.07
GOAL_POS = 0.5
POWER = 0.001
GRAVITY = 0.0025


def mountain_car_update(position: float, velocity: float, push: int) -> tuple[float, float]:
    """``push`` in {-1, 0, 1}. The car stops dead on hitting the left wall."""
    velocity += POWER * push - GRAVITY * math.cos(3 * position)
    velocity = min(max(velocity, -MAX_SPEED), MAX_SPEED)
    position += velocity
    position = min(max(position, MIN_POS), MAX_POS)
    if position == MIN_POS and velocity < 0:
        velocity = 0.0
    return position, velocity


class MountainCar(Environment):
    observation_size = 3
    num_actions = 3  # push left, coast, push right

    def __init__(self, seed: int = 0, max_steps: int = 1000):
        super().__init__()
        self.max_steps = max_steps
        self._rng = np.random.default_rng(seed)
        self.position = -0.5
        self.velocity = 0.0
        self.time = 0

    def _obs(self):
        return np.array([self.position, self.velocity, self.time / self.max_steps])

    def _reset(self):
        self.position = float(self._rng.uniform(-0.6, -0.4))
        self.velocity = 0.0
        self.time = 0
        return self._obs()

    def _step(self, action):
        self.position, self.velocity = mountain_car_update(self.position, self.velocity, action - 1)
        self.time += 1
        last = self.position >= GOAL_POS or self.time >= self.max_steps
        return self._obs(), -1.0, last


def make_mountain_car(seed: int = 0) -> MountainCar:
    return MountainCar(seed)


def energy_pumping_action(velocity: float) -> int:
    """Push in the direction of motion (right when at rest)."""
    return 0 if velocity < 0 else 2


def oracle_return(start: float, max_steps: int = 1000) -> float:
    position, velocity = start, 0.0
    for t in range(1, max_steps + 1):
        position, velocity = mountain_car_update(position, velocity, energy_pumping_action(velocity) - 1)
        if position >= GOAL_POS:
            return -float(t)
    return -float(max_steps)


def oracle_expected_return(num_starts: int = 201) -> float:
    """Energy-pumping return averaged over an even grid on the start interval."""
    starts = np.linspace(-0.6, -0.4, num_starts)
    return float(np.mean([oracle_return(float(s)) for s in starts]))
