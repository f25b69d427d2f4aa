"""Episodic environment contract and the reward noise / reward scale wrappers."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class StepType(enum.IntEnum):
    FIRST = 0
    MID = 1
    LAST = 2


class TimeStep(NamedTuple):
    # a tuple rather than a frozen dataclass: one is built per env step
    step_type: StepType
    observation: np.ndarray
    reward: float
    discount: float

    def first(self) -> bool:
        return self.step_type is StepType.FIRST

    def last(self) -> bool:
        return self.step_type is StepType.LAST


@dataclass(frozen=True)
class EnvSpec:
    observation_size: int
    num_actions: int
    episode_budget: int


class ContractError(RuntimeError):
    """Raised when the FIRST MID* LAST interaction protocol is violated."""


class Environment:
    """Base class for every episodic environment in the suite.

    Subclasses implement ``_reset`` (returning the first observation) and
    ``_step`` (returning ``(observation, reward, last)``). A subclass may also
    assign ``self.clean_reward`` inside ``_step`` when part of the emitted
    reward is zero-mean noise; regret bookkeeping uses the clean value.
    """

    observation_size: int
    num_actions: int
    default_budget: int = 10_000

    def __init__(self) -> None:
        self.episode_budget = self.default_budget
        self.clean_reward = 0.0
        self._needs_reset = True

    def spec(self) -> EnvSpec:
        return EnvSpec(self.observation_size, self.num_actions, self.episode_budget)

    def reset(self) -> TimeStep:
        self._needs_reset = False
        self.clean_reward = 0.0
        obs = self._reset()
        return TimeStep(StepType.FIRST, obs, 0.0, 1.0)

    def step(self, action: int) -> TimeStep:
        if self._needs_reset:
            raise ContractError(f"{type(self).__name__}: step() called before reset() or after LAST")
        if not 0 <= action < self.num_actions:
            raise ValueError(f"action {action} outside [0, {self.num_actions})")
        self.clean_reward = None
        obs, reward, last = self._step(int(action))
        if self.clean_reward is None:
            self.clean_reward = reward
        if last:
            self._needs_reset = True
            return TimeStep(StepType.LAST, obs, reward, 0.0)
        return TimeStep(StepType.MID, obs, reward, 1.0)

    def _reset(self) -> np.ndarray:
        raise NotImplementedError

    def _step(self, action: int) -> tuple[np.ndarray, float, bool]:
        raise NotImplementedError


class Wrapper(Environment):
    """Forwards everything to ``inner``; subclasses adjust rewards."""

    def __init__(self, inner: Environment):
        self.inner = inner
        self.observation_size = inner.observation_size
        self.num_actions = inner.num_actions
        self.clean_reward = 0.0

    @property
    def episode_budget(self) -> int:
        return self.inner.episode_budget

    @episode_budget.setter
    def episode_budget(self, value: int) -> None:
        self.inner.episode_budget = value

    def unwrapped(self) -> Environment:
        env = self.inner
        while isinstance(env, Wrapper):
            env = env.inner
        return env

    def reset(self) -> TimeStep:
        ts = self.inner.reset()
        self.clean_reward = 0.0
        return ts

    def step(self, action: int) -> TimeStep:
        ts = self.inner.step(action)
        self.clean_reward = self.inner.clean_reward
        return ts

    def __getattr__(self, name):
        # only reached for attributes not found on the wrapper itself
        if name == "inner":
            raise AttributeError(name)
        return getattr(self.inner, name)


NOISE_SALT = 0x6E6F
SCALE_SALT = 0x7363


class NoiseWrapper(Wrapper):
    """Adds Normal(0, sigma^2) noise to every non-FIRST reward."""

    def __init__(self, inner: Environment, sigma: float, seed: int = 0):
        if not sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {sigma}")
        super().__init__(inner)
        self.sigma = float(sigma)
        self._rng = np.random.default_rng([seed, NOISE_SALT])
        self._noise: list[float] = []

    def step(self, action: int) -> TimeStep:
        ts = self.inner.step(action)
        self.clean_reward = self.inner.clean_reward
        if self.sigma == 0.0:
            return ts
        if not self._noise:
            # drawn in blocks; the stream is the same as one draw per step
            self._noise = self._rng.standard_normal(4096)[::-1].tolist()
        reward = ts.reward + self.sigma * self._noise.pop()
        return TimeStep(ts.step_type, ts.observation, reward, ts.discount)


class ScaleWrapper(Wrapper):
    """Multiplies every reward by a fixed positive factor."""

    def __init__(self, inner: Environment, scale: float):
        if not scale > 0:
            raise ValueError(f"reward scale must be > 0, got {scale}")
        super().__init__(inner)
        self.scale = float(scale)

    def step(self, action: int) -> TimeStep:
        ts = self.inner.step(action)
        self.clean_reward = self.scale * self.inner.clean_reward
        return TimeStep(ts.step_type, ts.observation, self.scale * ts.reward, ts.discount)


def wrap_reward_noise(env: Environment, sigma: float, seed: int = 0) -> NoiseWrapper:
    return NoiseWrapper(env, sigma, seed)


def wrap_reward_scale(env: Environment, scale: float) -> ScaleWrapper:
    return ScaleWrapper(env, scale)
