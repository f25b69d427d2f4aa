"""Run loop, single-id runs and parallel sweeps."""

from __future__ import annotations

import hashlib
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from rlsuite import sweep
from rlsuite.agents import Agent, make_agent
from rlsuite.env_core import Environment, EnvSpec

logger = logging.getLogger(__name__)


@dataclass
class RunSummary:
    bsuite_id: str
    episodes: int = 0
    wall_time: float = 0.0
    mean_regret: float = float("nan")
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class AgentFactory:
    """Picklable recipe for a fresh agent: ``factory(spec, seed) -> Agent``."""

    name: str
    seed: int = 0
    optimizer: str | None = None
    ensemble_size: int | None = None
    overrides: dict[str, Any] = field(default_factory=dict)

    def __call__(self, spec: EnvSpec, seed: int) -> Agent:
        return make_agent(self.name, spec, seed, optimizer=self.optimizer,
                          ensemble_size=self.ensemble_size, **self.overrides)

    def describe(self) -> dict[str, Any]:
        info = {"agent": self.name, "seed": self.seed, "optimizer": self.optimizer,
                "ensemble_size": self.ensemble_size, **self.overrides}
        return {k: v for k, v in info.items() if v is not None}


def derive_seed(agent_seed: int, bsuite_id: str) -> int:
    """Stable across processes (unlike ``hash``)."""
    digest = hashlib.sha256(f"{agent_seed}:{bsuite_id}".encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def run_episode(agent: Agent, env: Environment) -> tuple[float, int]:
    """Reset, then act/step/update until LAST. Returns (return, steps)."""
    timestep = env.reset()
    total = 0.0
    steps = 0
    while True:
        action = agent.act(timestep)
        new_timestep = env.step(action)
        agent.update(timestep, action, new_timestep)
        total += new_timestep.reward
        steps += 1
        if new_timestep.last():
            return total, steps
        timestep = new_timestep


def run_bsuite_id(agent_factory: Callable[[EnvSpec, int], Agent], bsuite_id: str,
                  results_dir: str | os.PathLike, budget_scale: float = 1.0, overwrite: bool = False,
                  mnist_dir=None, seed: int | None = None) -> RunSummary:
    """Train a fresh agent on one id for ceil(budget * budget_scale) episodes."""
    config = sweep.env_config(bsuite_id)
    episodes = sweep.scaled_budget(config, budget_scale)
    if seed is None:
        seed = getattr(agent_factory, "seed", 0)
    env = sweep.load_and_record(config.bsuite_id, results_dir, overwrite=overwrite, mnist_dir=mnist_dir)
    agent = agent_factory(env.spec(), derive_seed(seed, config.bsuite_id))
    start = time.perf_counter()
    try:
        for _ in range(episodes):
            run_episode(agent, env)
    finally:
        env.close()
    wall = time.perf_counter() - start
    return RunSummary(config.bsuite_id, env.episode, wall, env.mean_regret())


def _run_one(args) -> RunSummary:
    agent_factory, bsuite_id, results_dir, budget_scale, overwrite, mnist_dir = args
    start = time.perf_counter()
    try:
        return run_bsuite_id(agent_factory, bsuite_id, results_dir, budget_scale, overwrite, mnist_dir)
    except Exception as exc:  # one failed id must not abort the sweep
        logger.error("%s failed: %s", bsuite_id, exc)
        return RunSummary(str(bsuite_id), wall_time=time.perf_counter() - start,
                          error=f"{type(exc).__name__}: {exc}")


def run_sweep(agent_factory: Callable[[EnvSpec, int], Agent], ids, results_dir: str | os.PathLike,
              workers: int = 1, budget_scale: float = 1.0, overwrite: bool = False,
              mnist_dir=None) -> list[RunSummary]:
    """Run every id with at most ``workers`` concurrent processes.

    Summaries come back in the order of ``ids``; failures are recorded in
    ``RunSummary.error`` rather than raised.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    results_dir = Path(results_dir)
    results_dir.mkdir(parents=True, exist_ok=True)
    if not os.access(results_dir, os.W_OK):
        raise PermissionError(f"results directory {results_dir} is not writable")
    jobs = [(agent_factory, str(i), str(results_dir), budget_scale, overwrite, mnist_dir) for i in ids]
    if workers == 1 or len(jobs) <= 1:
        return [_run_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs, chunksize=1))


def summarize(summaries: list[RunSummary]) -> dict[str, Any]:
    failed = [s for s in summaries if not s.ok]
    return {
        "runs": len(summaries),
        "failed": len(failed),
        "episodes": int(sum(s.episodes for s in summaries)),
        "wall_time": float(np.sum([s.wall_time for s in summaries])),
        "failures": {s.bsuite_id: s.error for s in failed},
    }
