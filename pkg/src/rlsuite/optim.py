"""SGD, RMSProp and Adam over lists of parameter arrays."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

KINDS = ("sgd", "rmsprop", "adam")

# learning rates tuned per optimizer on the basic tasks
PRESET_LEARNING_RATES = {"sgd": 1e-2, "rmsprop": 1e-3, "adam": 1e-3}

RMSPROP_DECAY = 0.9
RMSPROP_EPS = 1e-10
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class OptimState:
    kind: str
    learning_rate: float
    moments: list = field(default_factory=list)  # per-parameter tuples of accumulators
    step: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown optimizer {self.kind!r}; expected one of {KINDS}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")


def make_optimizer(kind: str, learning_rate: float | None = None) -> OptimState:
    lr = PRESET_LEARNING_RATES[kind] if learning_rate is None and kind in PRESET_LEARNING_RATES else learning_rate
    return OptimState(kind, lr)


def optimizer_step(state: OptimState, params: list, grads: list) -> list:
    """Apply one update in place; returns ``params`` for convenience."""
    if len(params) != len(grads):
        raise ValueError(f"{len(params)} parameter arrays but {len(grads)} gradients")
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        if not np.all(np.isfinite(g)):
            raise FloatingPointError("non-finite gradient")
    if not state.moments:
        n_acc = {"sgd": 0, "rmsprop": 1, "adam": 2}[state.kind]
        state.moments = [tuple(np.zeros_like(p) for _ in range(n_acc)) for p in params]
    state.step += 1
    lr = state.learning_rate

    if state.kind == "sgd":
        for p, g in zip(params, grads):
            p -= lr * g
    elif state.kind == "rmsprop":
        for p, g, (v,) in zip(params, grads, state.moments):
            v *= RMSPROP_DECAY
            v += (1.0 - RMSPROP_DECAY) * g * g
            p -= lr * g / np.sqrt(v + RMSPROP_EPS)
    else:
        c1 = 1.0 - ADAM_BETA1**state.step
        c2 = 1.0 - ADAM_BETA2**state.step
        for p, g, (m, v) in zip(params, grads, state.moments):
            m *= ADAM_BETA1
            m += (1.0 - ADAM_BETA1) * g
            v *= ADAM_BETA2
            v += (1.0 - ADAM_BETA2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + ADAM_EPS)
    return params
