"""Advantage actor-critic on a recurrent (LSTM) torso.

The agent gathers up to ``unroll_length`` steps, then replays them through
the LSTM from the state it had at the start of the window and applies the
n-step actor-critic loss. Gradients never cross a window boundary, so the
window length is the BPTT truncation horizon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rlsuite.agents.base import Agent, agent_seeds
from rlsuite.env_core import EnvSpec, TimeStep
from rlsuite.nn import LSTM
from rlsuite.optim import make_optimizer, optimizer_step


@dataclass
class A2cConfig:
    unroll_length: int = 30
    discount: float = 0.99
    entropy_cost: float = 0.01
    value_cost: float = 0.5
    optimizer: str = "adam"
    learning_rate: float | None = 3e-3
    hidden_size: int = 32
    max_grad_norm: float = 10.0

    def validate(self) -> None:
        if self.unroll_length < 1:
            raise ValueError("unroll_length must be >= 1")
        if not 0.0 <= self.discount <= 1.0:
            raise ValueError(f"discount must lie in [0, 1], got {self.discount}")
        if self.hidden_size < 1:
            raise ValueError("hidden_size must be >= 1")


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def actor_critic_loss(outputs: np.ndarray, actions: np.ndarray, returns: np.ndarray,
                      value_cost: float, entropy_cost: float):
    """Loss and its gradient w.r.t. the network outputs ``[logits..., value]``.

    ``returns`` are the n-step bootstrapped targets (constants).
    """
    T, width = outputs.shape
    logits, values = outputs[:, :-1], outputs[:, -1]
    probs = softmax(logits)
    logp = np.log(np.maximum(probs, 1e-300))
    advantages = returns - values
    taken = np.zeros_like(probs)
    taken[np.arange(T), actions] = 1.0
    entropy = -(probs * logp).sum(axis=-1)

    policy_loss = -(logp[np.arange(T), actions] * advantages).sum()
    value_loss = 0.5 * (advantages**2).sum()
    loss = (policy_loss + value_cost * value_loss - entropy_cost * entropy.sum()) / T

    d = np.zeros_like(outputs)
    # d(-A log pi(a)) / d logits = -A (onehot - pi)
    d[:, :-1] = -advantages[:, None] * (taken - probs)
    # d(-H) / d logits_j = pi_j (log pi_j + H)
    d[:, :-1] += entropy_cost * probs * (logp + entropy[:, None])
    d[:, -1] = -value_cost * advantages
    return float(loss), d / T


class ActorCriticRNN(Agent):
    def __init__(self, spec: EnvSpec, config: A2cConfig | None = None, seed: int = 0):
        self.spec = spec
        self.config = config = config or A2cConfig()
        config.validate()
        self.network = LSTM(spec.observation_size, config.hidden_size, spec.num_actions + 1)
        rng_init, self._rng_act, _, _, _ = agent_seeds(seed)
        self.params = self.network.init(rng_init)
        self.optimizer = make_optimizer(config.optimizer, config.learning_rate)
        self._state = self.network.initial_state()
        self._window_state = self._state
        self._last_output = None
        self._obs: list[np.ndarray] = []
        self._actions: list[int] = []
        self._rewards: list[float] = []
        self._discounts: list[float] = []
        self.num_updates = 0
        self.last_loss: float | None = None

    def policy(self, timestep: TimeStep) -> np.ndarray:
        """Advance the recurrent state on this observation and return pi(.|history)."""
        self._check_observation(timestep.observation)
        if timestep.first():
            self._state = self.network.initial_state()
        if not self._obs:
            self._window_state = self._state
        out, self._state = self.network.cell(self.params, timestep.observation, self._state)
        self._last_output = out
        return softmax(out[:-1])

    def act(self, timestep: TimeStep) -> int:
        probs = self.policy(timestep)
        action = int(np.searchsorted(np.cumsum(probs), self._rng_act.random(), side="right"))
        return min(action, len(probs) - 1)

    def update(self, timestep: TimeStep, action: int, new_timestep: TimeStep) -> None:
        self._obs.append(timestep.observation)
        self._actions.append(action)
        self._rewards.append(new_timestep.reward)
        self._discounts.append(new_timestep.discount)
        if new_timestep.last() or len(self._obs) == self.config.unroll_length:
            if new_timestep.last():
                bootstrap = 0.0
            else:
                # value of the next observation under the current parameters
                out, _ = self.network.cell(self.params, new_timestep.observation, self._state)
                bootstrap = float(out[-1])
            self._learn(bootstrap)

    def _learn(self, bootstrap: float) -> None:
        cfg = self.config
        xs = np.asarray(self._obs)
        returns = np.empty(len(xs))
        g = bootstrap
        for t in range(len(xs) - 1, -1, -1):
            g = self._rewards[t] + cfg.discount * self._discounts[t] * g
            returns[t] = g
        actions = np.asarray(self._actions)

        outputs, cache, _ = self.network.unroll(self.params, xs, self._window_state)
        loss, d_out = actor_critic_loss(outputs, actions, returns, cfg.value_cost, cfg.entropy_cost)
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite actor-critic loss after {self.num_updates} updates")
        grads = self.network.backward(self.params, cache, d_out)
        norm = np.sqrt(sum(float(np.sum(g * g)) for g in grads))
        if norm > cfg.max_grad_norm:
            grads = [g * (cfg.max_grad_norm / norm) for g in grads]
        optimizer_step(self.optimizer, self.params, grads)
        self.last_loss = loss
        self.num_updates += 1
        self._obs.clear()
        self._actions.clear()
        self._rewards.clear()
        self._discounts.clear()


def make_a2c_rnn(config: A2cConfig | None, spec: EnvSpec, seed: int = 0) -> ActorCriticRNN:
    return ActorCriticRNN(spec, config, seed)
