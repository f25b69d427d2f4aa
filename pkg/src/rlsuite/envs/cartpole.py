"""Cart-pole balancing with the classic Barto, Sutton & Anderson constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rlsuite.env_core import Environment

GRAVITY = 9.8
CART_MASS = 1.0
POLE_MASS = 0.1
TOTAL_MASS = CART_MASS + POLE_MASS
HALF_LENGTH = 0.5
POLE_MASS_LENGTH = POLE_MASS * HALF_LENGTH
FORCE_MAG = 10.0
DT = 0.02
THETA_LIMIT = 12 * 2 * math.pi / 360
X_LIMIT = 2.4


@dataclass
class CartpoleState:
    x: float = 0.0
    x_dot: float = 0.0
    theta: float = 0.0
    theta_dot: float = 0.0
    time: int = 0


def step_cartpole(state: CartpoleState, action: int) -> None:
    """One explicit-Euler step in place; ``action`` in {0, 1, 2} -> force
    {-F, 0, +F}."""
    force = (action - 1) * FORCE_MAG
    cos = math.cos(state.theta)
    sin = math.sin(state.theta)
    temp = (force + POLE_MASS_LENGTH * state.theta_dot**2 * sin) / TOTAL_MASS
    theta_acc = (GRAVITY * sin - cos * temp) / (
        HALF_LENGTH * (4.0 / 3.0 - POLE_MASS * cos**2 / TOTAL_MASS)
    )
    x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos / TOTAL_MASS

    state.x += DT * state.x_dot
    state.x_dot += DT * x_acc
    state.theta += DT * state.theta_dot
    state.theta_dot += DT * theta_acc
    state.time += 1


def cartpole_observation(state: CartpoleState, max_steps: int) -> np.ndarray:
    return np.array([
        state.x,
        state.x_dot,
        math.cos(state.theta),
        math.sin(state.theta),
        state.theta_dot,
        state.time / max_steps,
    ])


class Cartpole(Environment):
    """Reward +1 for each step the pole stays up; the failing step pays 0."""

    observation_size = 6
    num_actions = 3

    def __init__(self, seed: int = 0, max_steps: int = 1000, init_range: float = 0.05):
        super().__init__()
        self.max_steps = max_steps
        self.init_range = init_range
        self._rng = np.random.default_rng(seed)
        self.state = CartpoleState()

    def _reset(self):
        x, x_dot, theta, theta_dot = self._rng.uniform(-self.init_range, self.init_range, 4)
        self.state = CartpoleState(float(x), float(x_dot), float(theta), float(theta_dot))
        return cartpole_observation(self.state, self.max_steps)

    def _step(self, action):
        s = self.state
        step_cartpole(s, action)
        failed = abs(s.theta) > THETA_LIMIT or abs(s.x) > X_LIMIT
        last = failed or s.time >= self.max_steps
        return cartpole_observation(s, self.max_steps), 0.0 if failed else 1.0, last


def make_cartpole(seed: int = 0) -> Cartpole:
    return Cartpole(seed)
