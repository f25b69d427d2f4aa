"""The experiment registry: every bsuite_id, its environment recipe, budget,
capability tags and regret references."""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from rlsuite import envs
from rlsuite.env_core import Environment, NoiseWrapper, ScaleWrapper, StepType, TimeStep, Wrapper
from rlsuite.envs import cartpole_swingup, catch, mountain_car
from rlsuite.results import EpisodeRecord, ResultsWriter, results_path

CAPABILITIES = (
    "basic",
    "exploration",
    "credit_assignment",
    "memory",
    "generalization",
    "noise",
    "scale",
)
TAG_ALIASES = {"stochasticity": "noise", "credit assignment": "credit_assignment"}

NOISE_LEVELS = (0.1, 0.3, 1.0, 3.0, 10.0)
SCALE_LEVELS = (0.01, 0.1, 1.0, 10.0, 100.0)
SEEDS_PER_LEVEL = 4
BASIC_SEEDS = 20
DEEP_SEA_SIZES = tuple(range(10, 51, 2))
SWINGUP_THRESHOLDS = tuple(round(0.05 * i, 2) for i in range(20))
UMBRELLA_DISTRACTORS = 20
UMBRELLA_FEATURES_LENGTH = 20
MEMORY_BITS_LENGTH = 2
DISCOUNTING_SETTINGS = 5

# Reference returns computed once by scripted policies.
# Uniform policy on cartpole: 20k episodes over seeds 0..19, mean 23.36 (s.e. 0.09).
CARTPOLE_RANDOM_RETURN = 23.36
# Uniform policy on mountain car never reached the goal in 300 episodes of 1000 steps.
MOUNTAIN_CAR_RANDOM_RETURN = -1000.0
# Uniform policy on swing-up, 300 episodes at each of the 20 thresholds:
# mean -4.41 (-1.5 at k=0.1 down to -6.4 at k=0.95). Only used for logged regret.
SWINGUP_RANDOM_RETURN = -4.41


def log_sweep(lo: int = 1, hi: int = 100, count: int = 22) -> tuple[int, ...]:
    """``count`` distinct integers spread geometrically over [lo, hi].

    Rounding a geometric sequence merges its low end, so the sequence is
    lengthened until exactly ``count`` distinct values survive.
    """
    for n in range(count, 10 * count):
        values = np.unique(np.round(np.geomspace(lo, hi, n)).astype(int))
        if len(values) == count:
            return tuple(int(v) for v in values)
        if len(values) > count:
            break
    raise ValueError(f"no geometric sweep of {lo}..{hi} rounds to {count} distinct integers")


LOG_SWEEP = log_sweep()


@dataclass(frozen=True, order=True)
class BsuiteId:
    experiment: str
    index: int

    def __str__(self) -> str:
        return f"{self.experiment}/{self.index}"

    @classmethod
    def parse(cls, text: str | BsuiteId) -> BsuiteId:
        if isinstance(text, BsuiteId):
            return text
        name, sep, index = text.partition("/")
        if not sep or not index.isdigit() or str(int(index)) != index:
            raise ValueError(f"malformed bsuite_id {text!r}; expected '<experiment>/<index>'")
        return cls(name, int(index))


@dataclass(frozen=True)
class ExperimentConfig:
    bsuite_id: str
    experiment: str
    index: int
    env_name: str
    env_kwargs: dict[str, Any]
    seed: int
    episode_budget: int
    tags: frozenset[str]
    optimal_return: float
    random_return: float
    noise_sigma: float | None = None
    reward_scale: float | None = None
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def random_regret(self) -> float:
        return self.optimal_return - self.random_return


@dataclass(frozen=True)
class Experiment:
    name: str
    num_settings: int
    budget: int
    tags: frozenset[str]
    score_rule: str  # "regret", "deep_sea", "memory" or "swingup"


def _tags(*names: str) -> frozenset[str]:
    return frozenset(TAG_ALIASES.get(n, n) for n in names)


BASIC = {
    "bandit": _tags("basic"),
    "mnist": _tags("basic", "generalization"),
    "catch": _tags("basic", "credit_assignment"),
    "cartpole": _tags("basic", "credit_assignment", "generalization"),
    "mountain_car": _tags("basic", "credit_assignment", "generalization"),
}


def _build_registry() -> dict[str, Experiment]:
    reg: dict[str, Experiment] = {}
    for name, tags in BASIC.items():
        reg[name] = Experiment(name, BASIC_SEEDS, 10_000, tags, "regret")
    for name in BASIC:
        reg[f"{name}_noise"] = Experiment(
            f"{name}_noise", len(NOISE_LEVELS) * SEEDS_PER_LEVEL, 10_000, _tags("stochasticity"), "regret")
    for name in BASIC:
        reg[f"{name}_scale"] = Experiment(
            f"{name}_scale", len(SCALE_LEVELS) * SEEDS_PER_LEVEL, 10_000, _tags("scale"), "regret")
    reg["deep_sea"] = Experiment("deep_sea", len(DEEP_SEA_SIZES), 10_000, _tags("exploration"), "deep_sea")
    reg["deep_sea_stochastic"] = Experiment(
        "deep_sea_stochastic", len(DEEP_SEA_SIZES), 10_000, _tags("exploration", "stochasticity"), "deep_sea")
    reg["cartpole_swingup"] = Experiment(
        "cartpole_swingup", len(SWINGUP_THRESHOLDS), 1000, _tags("exploration", "generalization"), "swingup")
    reg["umbrella_length"] = Experiment(
        "umbrella_length", len(LOG_SWEEP), 1000, _tags("credit assignment", "stochasticity"), "regret")
    reg["umbrella_features"] = Experiment(
        "umbrella_features", len(LOG_SWEEP), 1000, _tags("credit assignment", "stochasticity"), "regret")
    reg["discounting_chain"] = Experiment(
        "discounting_chain", DISCOUNTING_SETTINGS, 1000, _tags("credit assignment"), "regret")
    reg["memory_len"] = Experiment("memory_len", len(LOG_SWEEP), 1000, _tags("memory"), "memory")
    reg["memory_bits"] = Experiment("memory_bits", len(LOG_SWEEP), 1000, _tags("memory"), "memory")
    return reg


EXPERIMENTS: dict[str, Experiment] = _build_registry()


def sweep_ids(experiment: str | None = None) -> list[str]:
    """All bsuite_ids in registry order, optionally for a single experiment."""
    if experiment is not None and experiment not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {experiment!r}; valid: {', '.join(EXPERIMENTS)}")
    names = [experiment] if experiment else list(EXPERIMENTS)
    return [f"{name}/{i}" for name in names for i in range(EXPERIMENTS[name].num_settings)]


@functools.cache
def swingup_oracle_return(height_threshold: float) -> float:
    env = envs.CartpoleSwingup(height_threshold)
    ts = env.reset()
    total = 0.0
    while not ts.last():
        ts = env.step(cartpole_swingup.swingup_oracle_action(ts.observation))
        total += ts.reward
    return total


@functools.cache
def mountain_car_oracle_return() -> float:
    return mountain_car.oracle_expected_return()


def _basic_recipe(name: str, seed: int) -> tuple[dict, float, float]:
    if name == "bandit":
        return {}, 1.0, 0.5
    if name == "mnist":
        return {}, 1.0, -0.8
    if name == "catch":
        return {}, 1.0, catch.random_policy_return()
    if name == "cartpole":
        return {}, 1000.0, CARTPOLE_RANDOM_RETURN
    if name == "mountain_car":
        return {}, mountain_car_oracle_return(), MOUNTAIN_CAR_RANDOM_RETURN
    raise KeyError(name)


def env_config(bsuite_id: str | BsuiteId) -> ExperimentConfig:
    bid = BsuiteId.parse(bsuite_id)
    name, index = bid.experiment, bid.index
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; valid experiments: {', '.join(EXPERIMENTS)}")
    exp = EXPERIMENTS[name]
    if not 0 <= index < exp.num_settings:
        raise KeyError(f"{name} has settings 0..{exp.num_settings - 1}, got {index}")

    seed = index
    sigma = scale = None
    kwargs: dict[str, Any]
    if name in BASIC or name.endswith(("_noise", "_scale")):
        env_name = name.rsplit("_", 1)[0] if name not in BASIC else name
        kwargs, optimal, random = _basic_recipe(env_name, seed)
        level = index // SEEDS_PER_LEVEL
        if name.endswith("_noise"):
            sigma = NOISE_LEVELS[level]
        elif name.endswith("_scale"):
            scale = SCALE_LEVELS[level]
            optimal, random = optimal * scale, random * scale
    elif name in ("deep_sea", "deep_sea_stochastic"):
        env_name = "deep_sea"
        stochastic = name == "deep_sea_stochastic"
        size = DEEP_SEA_SIZES[index]
        kwargs = {"size": size, "stochastic": stochastic}
        probe = envs.DeepSea(size, stochastic, seed)
        optimal, random = probe.optimal_return(), probe.random_return()
    elif name == "cartpole_swingup":
        env_name = name
        k = SWINGUP_THRESHOLDS[index]
        kwargs = {"height_threshold": k}
        optimal, random = swingup_oracle_return(k), SWINGUP_RANDOM_RETURN
    elif name == "umbrella_length":
        env_name = "umbrella"
        kwargs = {"chain_length": LOG_SWEEP[index], "n_distractors": UMBRELLA_DISTRACTORS}
        optimal, random = 1.0, 0.0
    elif name == "umbrella_features":
        env_name = "umbrella"
        kwargs = {"chain_length": UMBRELLA_FEATURES_LENGTH, "n_distractors": LOG_SWEEP[index]}
        optimal, random = 1.0, 0.0
    elif name == "discounting_chain":
        env_name = name
        kwargs = {}
        optimal = 1.0 + envs.discounting_chain.BONUS
        random = 1.0 + envs.discounting_chain.BONUS / len(envs.discounting_chain.HORIZONS)
    elif name == "memory_len":
        env_name = "memory_chain"
        kwargs = {"length": LOG_SWEEP[index], "num_bits": 1}
        optimal, random = 1.0, 0.0
    elif name == "memory_bits":
        env_name = "memory_chain"
        kwargs = {"length": MEMORY_BITS_LENGTH, "num_bits": LOG_SWEEP[index]}
        optimal, random = 1.0, 0.0
    else:  # pragma: no cover - registry and recipes are kept in sync
        raise KeyError(name)

    return ExperimentConfig(
        bsuite_id=str(bid),
        experiment=name,
        index=index,
        env_name=env_name,
        env_kwargs=kwargs,
        seed=seed,
        episode_budget=exp.budget,
        tags=exp.tags,
        optimal_return=float(optimal),
        random_return=float(random),
        noise_sigma=sigma,
        reward_scale=scale,
    )


_mnist_cache: dict[str, envs.MnistDataset] = {}


def _mnist(mnist_dir: str | os.PathLike | None) -> envs.MnistDataset:
    mnist_dir = mnist_dir or os.environ.get("RLSUITE_MNIST_DIR")
    if not mnist_dir:
        raise FileNotFoundError("mnist experiments need --mnist-dir or RLSUITE_MNIST_DIR")
    key = str(Path(mnist_dir).resolve())
    if key not in _mnist_cache:
        _mnist_cache[key] = envs.MnistDataset.load(key)
    return _mnist_cache[key]


def build_environment(config: ExperimentConfig, mnist_dir=None) -> Environment:
    seed = config.seed
    kw = config.env_kwargs
    name = config.env_name
    if name == "bandit":
        env: Environment = envs.Bandit(seed)
    elif name == "mnist":
        env = envs.MnistBandit(_mnist(mnist_dir), seed)
    elif name == "catch":
        env = envs.Catch(seed)
    elif name == "cartpole":
        env = envs.Cartpole(seed)
    elif name == "mountain_car":
        env = envs.MountainCar(seed)
    elif name == "deep_sea":
        env = envs.DeepSea(kw["size"], kw["stochastic"], seed)
    elif name == "cartpole_swingup":
        env = envs.CartpoleSwingup(kw["height_threshold"], seed)
    elif name == "umbrella":
        env = envs.Umbrella(kw["chain_length"], kw["n_distractors"], seed)
    elif name == "discounting_chain":
        env = envs.DiscountingChain(seed)
    elif name == "memory_chain":
        env = envs.MemoryChain(kw["length"], kw["num_bits"], seed)
    else:
        raise KeyError(name)
    if config.noise_sigma is not None:
        env = NoiseWrapper(env, config.noise_sigma, seed)
    if config.reward_scale is not None:
        env = ScaleWrapper(env, config.reward_scale)
    env.episode_budget = config.episode_budget
    return env


def load(bsuite_id: str, mnist_dir=None) -> Environment:
    return build_environment(env_config(bsuite_id), mnist_dir)


class RecordingEnvironment(Wrapper):
    """Appends one EpisodeRecord per completed episode to the results store."""

    def __init__(self, inner: Environment, config: ExperimentConfig, writer: ResultsWriter):
        super().__init__(inner)
        self.config = config
        self.writer = writer
        self.episode = 0
        self.total_regret = 0.0
        self.last_record: EpisodeRecord | None = None
        self._return = 0.0
        self._clean_return = 0.0
        self._steps = 0

    def reset(self) -> TimeStep:
        self._return = 0.0
        self._clean_return = 0.0
        self._steps = 0
        return super().reset()

    def step(self, action: int) -> TimeStep:
        ts = self.inner.step(action)
        self.clean_reward = self.inner.clean_reward
        self._return += ts.reward
        self._clean_return += self.clean_reward
        self._steps += 1
        if ts.step_type is StepType.LAST:
            self.episode += 1
            regret = self.config.optimal_return - self._clean_return
            self.total_regret += regret
            self.last_record = EpisodeRecord(
                bsuite_id=self.config.bsuite_id,
                episode=self.episode,
                raw_return=self._return,
                regret=regret,
                steps=self._steps,
            )
            self.writer.append(self.last_record)
        return ts

    def mean_regret(self) -> float:
        return self.total_regret / self.episode if self.episode else float("nan")

    def close(self) -> None:
        self.writer.close()


def load_and_record(bsuite_id: str, results_dir: str | os.PathLike, overwrite: bool = False,
                    mnist_dir=None) -> RecordingEnvironment:
    """Environment for ``bsuite_id`` that logs every finished episode."""
    config = env_config(bsuite_id)
    results_dir = Path(results_dir)
    results_dir.mkdir(parents=True, exist_ok=True)
    if not os.access(results_dir, os.W_OK):
        raise PermissionError(f"results directory {results_dir} is not writable")
    path = results_path(results_dir, config.bsuite_id)
    if path.exists():
        if not overwrite:
            raise FileExistsError(f"{path} already exists; pass overwrite=True to replace it")
        path.unlink()
    env = build_environment(config, mnist_dir)
    return RecordingEnvironment(env, config, ResultsWriter(results_dir, config.bsuite_id))


def reference_steps_per_episode(config: ExperimentConfig) -> int:
    """Upper bound on episode length, for runtime budgeting."""
    kw = config.env_kwargs
    return {
        "bandit": 1,
        "mnist": 1,
        "catch": catch.ROWS - 1,
        "cartpole": 1000,
        "mountain_car": 1000,
        "deep_sea": kw.get("size", 0),
        "cartpole_swingup": 1000,
        "umbrella": kw.get("chain_length", 0),
        "discounting_chain": envs.discounting_chain.EPISODE_LENGTH,
        "memory_chain": kw.get("length", 0),
    }[config.env_name]


def scaled_budget(config: ExperimentConfig, budget_scale: float) -> int:
    if not 0 < budget_scale <= 1:
        raise ValueError(f"budget_scale must lie in (0, 1], got {budget_scale}")
    return max(1, math.ceil(config.episode_budget * budget_scale - 1e-9))
