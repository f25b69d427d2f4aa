"""The act/update contract shared by every agent, and the uniform random agent."""

from __future__ import annotations

import numpy as np

from rlsuite.env_core import EnvSpec, TimeStep


class Agent:
    """``act`` picks an action for a timestep; ``update`` learns from the
    transition ``(timestep, action, new_timestep)``."""

    spec: EnvSpec

    def act(self, timestep: TimeStep) -> int:
        raise NotImplementedError

    def update(self, timestep: TimeStep, action: int, new_timestep: TimeStep) -> None:
        pass

    def _check_observation(self, observation: np.ndarray) -> None:
        if observation.shape != (self.spec.observation_size,):
            raise ValueError(
                f"observation shape {observation.shape} does not match spec size {self.spec.observation_size}")


def agent_seeds(seed: int, count: int = 5) -> list[np.random.Generator]:
    """Independent generators for init, acting, replay, masks and priors."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


class RandomAgent(Agent):
    """Selects an action uniformly at random each timestep."""

    _block = 4096

    def __init__(self, spec: EnvSpec, seed: int = 0):
        self.spec = spec
        self._rng = np.random.default_rng(seed)
        self._actions: list[int] = []

    def act(self, timestep: TimeStep) -> int:
        if not self._actions:
            self._actions = self._rng.integers(self.spec.num_actions, size=self._block).tolist()
        return self._actions.pop()


def make_random(spec: EnvSpec, seed: int = 0) -> RandomAgent:
    return RandomAgent(spec, seed)
