"""Cart-pole swing-up with a sparse height reward and a cost for moving.

The pole starts hanging straight down and may rotate freely: only the
angle failure of the balancing task is dropped, so leaving the track
(|x| > 2.4) still ends the episode early. Each step pays +1 while
``cos(theta) > k`` and ``|x| < 1``, minus 0.05 for any push.
"""

from __future__ import annotations

import math

from rlsuite.env_core import Environment
from rlsuite.envs.cartpole import X_LIMIT, CartpoleState, cartpole_observation, step_cartpole

MOVE_COST = 0.05


class CartpoleSwingup(Environment):
    observation_size = 6
    num_actions = 3
    default_budget = 1000

    def __init__(self, height_threshold: float = 0.5, seed: int = 0, max_steps: int = 1000):
        super().__init__()
        if not 0.0 <= height_threshold < 1.0:
            raise ValueError(f"height threshold must lie in [0, 1), got {height_threshold}")
        self.height_threshold = height_threshold
        self.seed = seed
        self.max_steps = max_steps
        self.state = CartpoleState(theta=math.pi)

    def _reset(self):
        self.state = CartpoleState(theta=math.pi)
        return cartpole_observation(self.state, self.max_steps)

    def _step(self, action):
        s = self.state
        step_cartpole(s, action)
        off_track = abs(s.x) > X_LIMIT
        reward = 1.0 if (math.cos(s.theta) > self.height_threshold and abs(s.x) < 1.0) else 0.0
        if action != 1:
            reward -= MOVE_COST
        return cartpole_observation(s, self.max_steps), reward, off_track or s.time >= self.max_steps


def make_cartpole_swingup(height_threshold: float = 0.5, seed: int = 0) -> CartpoleSwingup:
    return CartpoleSwingup(height_threshold, seed)


def swingup_oracle_action(obs) -> int:
    """Energy-shaping swing-up with cart centering, then a linear balance
    rule once the pole is near the top.

    Works directly on the 6-dim observation so it can drive the environment
    like any agent.
    """
    x, x_dot, cos, sin, theta_dot, _ = obs
    if cos > 0.8:
        theta = math.atan2(sin, cos)
        u = 10.0 * theta + 2.0 * theta_dot + 0.1 * x + 1.0 * x_dot
        deadzone = 0.05
    else:
        # energy relative to upright (pole length 1, unit mass scale)
        energy = theta_dot**2 / 6.0 + 4.9 * (cos - 1.0)
        pump = 1.0 if theta_dot * cos < 0 else -1.0
        u = -0.5 * energy * pump - 3.0 * x - 1.0 * x_dot
        deadzone = 0.1
    if abs(u) < deadzone:
        return 1
    return 2 if u > 0 else 0
