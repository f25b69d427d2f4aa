"""Deep Q-network with experience replay, a periodically copied target
network and epsilon-greedy exploration (Mnih et al., 2015). No double-Q."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rlsuite.agents.base import Agent, agent_seeds
from rlsuite.agents.replay import ReplayBuffer
from rlsuite.env_core import EnvSpec, TimeStep
from rlsuite.nn import MLP
from rlsuite.optim import make_optimizer, optimizer_step


@dataclass
class DqnConfig:
    epsilon: float = 0.05
    optimizer: str = "adam"
    learning_rate: float | None = None  # None -> the optimizer's preset
    buffer_capacity: int = 10_000
    batch_size: int = 32
    target_update_period: int = 4
    target_update_unit: str = "episodes"  # or "steps" (SGD steps)
    discount: float = 0.99
    min_replay_size: int = 128
    hidden_sizes: tuple[int, ...] = (64, 64)

    def validate(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0.0 <= self.discount <= 1.0:
            raise ValueError(f"discount must lie in [0, 1], got {self.discount}")
        for name in ("buffer_capacity", "batch_size", "target_update_period"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.min_replay_size < 1:
            raise ValueError("min_replay_size must be >= 1")
        if self.target_update_unit not in ("episodes", "steps"):
            raise ValueError(f"target_update_unit must be 'episodes' or 'steps', got {self.target_update_unit!r}")


def target_update_due(config: DqnConfig, num_updates: int, num_episodes: int,
                      stepped: bool, episode_ended: bool) -> bool:
    """Whether to copy the online network into the target after this step.

    In "episodes" units the copy happens at the end of every
    ``target_update_period``-th episode, i.e. every few episodes' worth of
    steps whatever the episode length; in "steps" units after every
    ``target_update_period``-th SGD step.
    """
    if config.target_update_unit == "steps":
        return stepped and num_updates % config.target_update_period == 0
    return episode_ended and num_updates > 0 and num_episodes % config.target_update_period == 0


def td_errors(q: np.ndarray, actions: np.ndarray, rewards: np.ndarray, discounts: np.ndarray,
              q_next_target: np.ndarray, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """One-step TD errors ``Q(s, a) - (r + gamma * d * max_a' Q_target(s', a'))``.

    Works on ``(B, A)`` arrays or ensembles ``(K, B, A)``; returns the errors
    and the one-hot mask of taken actions with the same shape as ``q``.
    """
    onehot = np.zeros(q.shape[-2:])
    onehot[np.arange(q.shape[-2]), actions] = 1.0
    q_taken = (q * onehot).sum(axis=-1)
    target = rewards + gamma * discounts * q_next_target.max(axis=-1)
    return q_taken - target, onehot


class DQN(Agent):
    def __init__(self, spec: EnvSpec, config: DqnConfig | None = None, seed: int = 0):
        self.spec = spec
        self.config = config = config or DqnConfig()
        config.validate()
        self.network = MLP((spec.observation_size, *config.hidden_sizes, spec.num_actions))
        rng_init, self._rng_act, self._rng_replay, _, _ = agent_seeds(seed)
        self.params = self.network.init(rng_init)
        self.target_params = [p.copy() for p in self.params]
        self.optimizer = make_optimizer(config.optimizer, config.learning_rate)
        self.replay = ReplayBuffer(
            config.buffer_capacity,
            {"obs": (spec.observation_size,), "action": (), "reward": (), "discount": (),
             "next_obs": (spec.observation_size,)},
            {"action": np.int64},
        )
        self.num_updates = 0
        self.num_episodes = 0
        self.last_loss: float | None = None

    def q_values(self, observation: np.ndarray) -> np.ndarray:
        return self.network.forward(self.params, observation)

    def act(self, timestep: TimeStep) -> int:
        self._check_observation(timestep.observation)
        eps = self.config.epsilon
        if eps > 0 and self._rng_act.random() < eps:
            return int(self._rng_act.integers(self.spec.num_actions))
        return int(np.argmax(self.q_values(timestep.observation)))

    def update(self, timestep: TimeStep, action: int, new_timestep: TimeStep) -> None:
        self.replay.add(obs=timestep.observation, action=action, reward=new_timestep.reward,
                        discount=new_timestep.discount, next_obs=new_timestep.observation)
        stepped = len(self.replay) >= self.config.min_replay_size
        if stepped:
            self._sgd_step(self.replay.sample(self.config.batch_size, self._rng_replay))
        ended = new_timestep.last()
        self.num_episodes += ended
        if target_update_due(self.config, self.num_updates, self.num_episodes, stepped, ended):
            self.target_params = [p.copy() for p in self.params]

    def _sgd_step(self, batch) -> None:
        cfg = self.config
        q, cache = self.network.forward_cache(self.params, batch["obs"])
        q_next = self.network.forward(self.target_params, batch["next_obs"])
        err, onehot = td_errors(q, batch["action"], batch["reward"], batch["discount"], q_next, cfg.discount)
        n = err.shape[-1]
        loss = 0.5 * float(np.sum(err * err)) / n
        if not np.isfinite(loss):
            raise FloatingPointError(
                f"non-finite DQN loss after {self.num_updates} updates (max |Q| {np.abs(q).max():.3g})")
        grads = self.network.backward(self.params, cache, onehot * (err / n)[..., None])
        optimizer_step(self.optimizer, self.params, grads)
        self.last_loss = loss
        self.num_updates += 1


def make_dqn(config: DqnConfig | None, spec: EnvSpec, seed: int = 0) -> DQN:
    return DQN(spec, config, seed)
