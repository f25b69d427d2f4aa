"""Baseline agents: random, dqn, boot_dqn and actor_critic_rnn."""

from __future__ import annotations

from rlsuite.agents.a2c import A2cConfig, ActorCriticRNN, make_a2c_rnn
from rlsuite.agents.base import Agent, RandomAgent, make_random
from rlsuite.agents.boot_dqn import ENSEMBLE_SWEEP, BootDqnConfig, BootstrappedDQN, make_boot_dqn
from rlsuite.agents.dqn import DQN, DqnConfig, make_dqn
from rlsuite.agents.replay import ReplayBuffer

AGENT_NAMES = ("random", "dqn", "boot_dqn", "actor_critic_rnn")


def make_agent(name: str, spec, seed: int = 0, optimizer: str | None = None,
               ensemble_size: int | None = None, **overrides) -> Agent:
    """Build an agent by its command-line name."""
    if name == "random":
        return make_random(spec, seed)
    opt = {} if optimizer is None else {"optimizer": optimizer, "learning_rate": None}
    if name == "dqn":
        return make_dqn(DqnConfig(**opt, **overrides), spec, seed)
    if name == "boot_dqn":
        if ensemble_size is not None:
            overrides["ensemble_size"] = ensemble_size
        return make_boot_dqn(BootDqnConfig(**opt, **overrides), spec, seed)
    if name == "actor_critic_rnn":
        return make_a2c_rnn(A2cConfig(**opt, **overrides), spec, seed)
    raise ValueError(f"unknown agent {name!r}; expected one of {AGENT_NAMES}")


__all__ = [
    "A2cConfig", "AGENT_NAMES", "ActorCriticRNN", "Agent", "BootDqnConfig", "BootstrappedDQN", "DQN",
    "DqnConfig", "ENSEMBLE_SWEEP", "RandomAgent", "ReplayBuffer", "make_a2c_rnn", "make_agent",
    "make_boot_dqn", "make_dqn", "make_random",
]
