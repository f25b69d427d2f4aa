"""Bootstrapped DQN with randomized prior functions.

Each of K members values actions with ``f_k(s) + prior_scale * p_k(s)``
where ``p_k`` is a frozen random network. Every transition carries a
Bernoulli(mask_prob) bootstrap mask per member, and one member, resampled at
the start of each episode, acts greedily for the whole episode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rlsuite.agents.base import Agent, agent_seeds
from rlsuite.agents.dqn import DqnConfig, target_update_due, td_errors
from rlsuite.agents.replay import ReplayBuffer
from rlsuite.env_core import EnvSpec, TimeStep
from rlsuite.nn import MLP, stack_params
from rlsuite.optim import make_optimizer, optimizer_step

ENSEMBLE_SWEEP = (1, 3, 10, 30)


@dataclass
class BootDqnConfig(DqnConfig):
    ensemble_size: int = 10
    prior_scale: float = 3.0
    mask_prob: float = 0.5
    epsilon: float = 0.0

    def validate(self) -> None:
        super().validate()
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if self.prior_scale < 0:
            raise ValueError("prior_scale must be >= 0")
        if not 0.0 < self.mask_prob <= 1.0:
            raise ValueError(f"mask_prob must lie in (0, 1], got {self.mask_prob}")


class BootstrappedDQN(Agent):
    def __init__(self, spec: EnvSpec, config: BootDqnConfig | None = None, seed: int = 0):
        self.spec = spec
        self.config = config = config or BootDqnConfig()
        config.validate()
        K = config.ensemble_size
        self.network = MLP((spec.observation_size, *config.hidden_sizes, spec.num_actions))
        rng_init, self._rng_act, self._rng_replay, self._rng_mask, rng_prior = agent_seeds(seed)
        self.params = stack_params([self.network.init(rng_init) for _ in range(K)])
        self.prior_params = stack_params([self.network.init(rng_prior) for _ in range(K)])
        for p in self.prior_params:
            p.flags.writeable = False
        self.target_params = [p.copy() for p in self.params]
        self.optimizer = make_optimizer(config.optimizer, config.learning_rate)
        A = spec.num_actions
        self.replay = ReplayBuffer(
            config.buffer_capacity,
            {"obs": (spec.observation_size,), "action": (), "reward": (), "discount": (),
             "next_obs": (spec.observation_size,), "mask": (K,),
             "prior": (K, A), "next_prior": (K, A)},
            {"action": np.int64},
        )
        self.active_member = 0
        self._cached_prior = (None, None)
        self.num_updates = 0
        self.num_episodes = 0
        self.last_loss: float | None = None

    def _prior(self, observation: np.ndarray) -> np.ndarray:
        """Scaled prior values of one observation for every member, shape (K, A)."""
        if self.config.prior_scale == 0.0:
            return np.zeros((self.config.ensemble_size, self.spec.num_actions))
        if observation is self._cached_prior[0]:
            return self._cached_prior[1]
        value = self.config.prior_scale * self.network.forward(self.prior_params, observation[None, None])[:, 0]
        self._cached_prior = (observation, value)
        return value

    def member_q_values(self, observation: np.ndarray, member: int) -> np.ndarray:
        params = [p[member] for p in self.params]
        q = self.network.forward(params, observation).reshape(-1)
        if self.config.prior_scale:
            prior = [p[member] for p in self.prior_params]
            q = q + self.config.prior_scale * self.network.forward(prior, observation).reshape(-1)
        return q

    def act(self, timestep: TimeStep) -> int:
        self._check_observation(timestep.observation)
        if timestep.first():
            self.active_member = int(self._rng_act.integers(self.config.ensemble_size))
        eps = self.config.epsilon
        if eps > 0 and self._rng_act.random() < eps:
            return int(self._rng_act.integers(self.spec.num_actions))
        return int(np.argmax(self.member_q_values(timestep.observation, self.active_member)))

    def update(self, timestep: TimeStep, action: int, new_timestep: TimeStep) -> None:
        cfg = self.config
        mask = (self._rng_mask.random(cfg.ensemble_size) < cfg.mask_prob).astype(np.float64)
        self.replay.add(
            obs=timestep.observation, action=action, reward=new_timestep.reward,
            discount=new_timestep.discount, next_obs=new_timestep.observation, mask=mask,
            prior=self._prior(timestep.observation), next_prior=self._prior(new_timestep.observation),
        )
        stepped = len(self.replay) >= cfg.min_replay_size
        if stepped:
            self._sgd_step(self.replay.sample(cfg.batch_size, self._rng_replay))
        ended = new_timestep.last()
        self.num_episodes += ended
        if target_update_due(cfg, self.num_updates, self.num_episodes, stepped, ended):
            self.target_params = [p.copy() for p in self.params]

    def _sgd_step(self, batch) -> None:
        cfg = self.config
        obs = batch["obs"][None]
        next_obs = batch["next_obs"][None]
        prior = np.swapaxes(batch["prior"], 0, 1)  # (K, B, A)
        next_prior = np.swapaxes(batch["next_prior"], 0, 1)
        f, cache = self.network.forward_cache(self.params, obs)
        q = f + prior
        q_next = self.network.forward(self.target_params, next_obs) + next_prior
        err, onehot = td_errors(q, batch["action"], batch["reward"], batch["discount"], q_next, cfg.discount)
        err = err * batch["mask"].T
        n = err.shape[-1]
        loss = 0.5 * float(np.sum(err * err)) / n
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite bootstrapped DQN loss after {self.num_updates} updates")
        grads = self.network.backward(self.params, cache, onehot * (err / n)[..., None])
        optimizer_step(self.optimizer, self.params, grads)
        self.last_loss = loss
        self.num_updates += 1


def make_boot_dqn(config: BootDqnConfig | None, spec: EnvSpec, seed: int = 0) -> BootstrappedDQN:
    return BootstrappedDQN(spec, config, seed)
