"""Small dense networks with hand-written reverse-mode gradients.

Parameters are plain lists of float64 arrays. Every network also accepts a
leading ensemble axis: stack K members' parameters (weights ``(K, in, out)``,
biases ``(K, 1, out)``) and feed inputs of shape ``(K, B, in)``; ``matmul``
broadcasting does the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Params = list  # list[np.ndarray]


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def _t(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, -1, -2)


def _bias_grad(d: np.ndarray, bias: np.ndarray) -> np.ndarray:
    # sum over every batch axis that the bias was broadcast along
    axes = tuple(range(d.ndim - 1)) if bias.ndim == 1 else (-2,)
    return d.sum(axis=axes).reshape(bias.shape)


def stack_params(members: Sequence[Params]) -> Params:
    """Stack per-member parameter lists along a new leading ensemble axis."""
    stacked = []
    for arrays in zip(*members):
        if arrays[0].ndim == 1:
            stacked.append(np.stack([a[None, :] for a in arrays]))
        else:
            stacked.append(np.stack(arrays))
    return stacked


class MLP:
    """Affine layers with ReLU between them and a linear output layer."""

    def __init__(self, sizes: Sequence[int]):
        if len(sizes) < 2 or any(s < 1 for s in sizes):
            raise ValueError(f"bad layer sizes {sizes}")
        self.sizes = tuple(int(s) for s in sizes)

    def init(self, rng: np.random.Generator) -> Params:
        params = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            params.append(glorot_uniform(rng, fan_in, fan_out))
            params.append(np.zeros(fan_out))
        return params

    def _check(self, params: Params, x: np.ndarray) -> None:
        if len(params) != 2 * (len(self.sizes) - 1):
            raise ValueError(f"expected {2 * (len(self.sizes) - 1)} parameter arrays, got {len(params)}")
        if x.shape[-1] != self.sizes[0]:
            raise ValueError(f"input width {x.shape[-1]} != first layer size {self.sizes[0]}")

    def forward(self, params: Params, x: np.ndarray) -> np.ndarray:
        self._check(params, x)
        h = x
        last = len(params) - 2
        for i in range(0, len(params), 2):
            h = h @ params[i] + params[i + 1]
            if i < last:
                h = np.maximum(h, 0.0)
        return h

    def forward_cache(self, params: Params, x: np.ndarray):
        self._check(params, x)
        inputs = []
        h = x
        last = len(params) - 2
        for i in range(0, len(params), 2):
            inputs.append(h)
            h = h @ params[i] + params[i + 1]
            if i < last:
                h = np.maximum(h, 0.0)
        return h, inputs

    def backward(self, params: Params, cache, d_out: np.ndarray) -> Params:
        inputs = cache
        grads: Params = [None] * len(params)
        d = d_out
        for i in range(len(params) - 2, -1, -2):
            x = inputs[i // 2]
            grads[i] = _t(x) @ d if x.ndim > 1 else np.outer(x, d)
            grads[i + 1] = _bias_grad(d, params[i + 1])
            if i > 0:
                d = (d @ _t(params[i])) * (x > 0)
        return grads


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


@dataclass
class LSTMCache:
    xs: np.ndarray
    hs: np.ndarray  # h_0 .. h_T
    cs: np.ndarray  # c_0 .. c_T
    gates: np.ndarray  # (T, ..., 4H) post-activation i, f, g, o


class LSTM:
    """Single-layer LSTM followed by a linear readout applied at every step.

    Parameters: ``[W_x (in, 4H), W_h (H, 4H), b (4H), W_y (H, out), b_y (out)]``
    with gate order input, forget, cell, output. The forget-gate bias starts
    at 1.
    """

    def __init__(self, input_size: int, hidden_size: int, output_size: int):
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.output_size = output_size

    def init(self, rng: np.random.Generator) -> Params:
        H = self.hidden_size
        b = np.zeros(4 * H)
        b[H:2 * H] = 1.0
        return [
            glorot_uniform(rng, self.input_size, 4 * H),
            glorot_uniform(rng, H, 4 * H),
            b,
            glorot_uniform(rng, H, self.output_size),
            np.zeros(self.output_size),
        ]

    def initial_state(self, batch_shape: tuple = ()) -> tuple[np.ndarray, np.ndarray]:
        shape = batch_shape + (self.hidden_size,)
        return np.zeros(shape), np.zeros(shape)

    def cell(self, params: Params, x: np.ndarray, state):
        """One step without caching; returns (output, new_state)."""
        Wx, Wh, b, Wy, by = params
        h, c = state
        z = x @ Wx + h @ Wh + b
        H = self.hidden_size
        i = _sigmoid(z[..., :H])
        f = _sigmoid(z[..., H:2 * H])
        g = np.tanh(z[..., 2 * H:3 * H])
        o = _sigmoid(z[..., 3 * H:])
        c = f * c + i * g
        h = o * np.tanh(c)
        return h @ Wy + by, (h, c)

    def unroll(self, params: Params, xs: np.ndarray, state=None):
        """Run over ``xs`` of shape ``(T, ..., in)``.

        Returns ``(outputs, cache, final_state)``.
        """
        if xs.shape[-1] != self.input_size:
            raise ValueError(f"input width {xs.shape[-1]} != {self.input_size}")
        Wx, Wh, b, Wy, by = params
        T = xs.shape[0]
        H = self.hidden_size
        if state is None:
            state = self.initial_state(xs.shape[1:-1])
        h, c = state
        hs = np.empty((T + 1,) + h.shape)
        cs = np.empty((T + 1,) + c.shape)
        gates = np.empty((T,) + h.shape[:-1] + (4 * H,))
        hs[0], cs[0] = h, c
        zx = xs @ Wx + b
        for t in range(T):
            z = zx[t] + hs[t] @ Wh
            gt = gates[t]
            gt[..., :2 * H] = _sigmoid(z[..., :2 * H])
            gt[..., 2 * H:3 * H] = np.tanh(z[..., 2 * H:3 * H])
            gt[..., 3 * H:] = _sigmoid(z[..., 3 * H:])
            cs[t + 1] = gt[..., H:2 * H] * cs[t] + gt[..., :H] * gt[..., 2 * H:3 * H]
            hs[t + 1] = gt[..., 3 * H:] * np.tanh(cs[t + 1])
        outputs = hs[1:] @ Wy + by
        return outputs, LSTMCache(xs, hs, cs, gates), (hs[T].copy(), cs[T].copy())

    def backward(self, params: Params, cache: LSTMCache, d_outputs: np.ndarray,
                 truncation: int | None = None) -> Params:
        """Backpropagation through time.

        With ``truncation=k`` the sequence is cut into consecutive windows of
        k steps and no gradient crosses a window boundary; ``None`` means
        full BPTT.
        """
        Wx, Wh, b, Wy, by = params
        H = self.hidden_size
        xs, hs, cs, gates = cache.xs, cache.hs, cache.cs, cache.gates
        T = xs.shape[0]
        if truncation is not None and truncation < 1:
            raise ValueError("truncation must be >= 1")
        k = T if truncation is None else truncation

        hs_out = hs[1:]
        dWy = np.tensordot(hs_out, d_outputs, axes=(tuple(range(hs_out.ndim - 1)),) * 2)
        dby = d_outputs.reshape(-1, self.output_size).sum(axis=0)
        dh_from_out = d_outputs @ Wy.T

        dz = np.empty_like(gates)
        dh_next = np.zeros_like(hs[0])
        dc_next = np.zeros_like(cs[0])
        for t in range(T - 1, -1, -1):
            if (t + 1) % k == 0 and t + 1 < T:
                # window boundary: state entering step t+1 is treated as a constant
                dh_next = np.zeros_like(dh_next)
                dc_next = np.zeros_like(dc_next)
            gt = gates[t]
            i, f, g, o = gt[..., :H], gt[..., H:2 * H], gt[..., 2 * H:3 * H], gt[..., 3 * H:]
            tanh_c = np.tanh(cs[t + 1])
            dh = dh_from_out[t] + dh_next
            dc = dc_next + dh * o * (1.0 - tanh_c**2)
            dzt = dz[t]
            dzt[..., :H] = dc * g * i * (1.0 - i)
            dzt[..., H:2 * H] = dc * cs[t] * f * (1.0 - f)
            dzt[..., 2 * H:3 * H] = dc * i * (1.0 - g**2)
            dzt[..., 3 * H:] = dh * tanh_c * o * (1.0 - o)
            dh_next = dzt @ Wh.T
            dc_next = dc * f

        lead = tuple(range(xs.ndim - 1))
        dWx = np.tensordot(xs, dz, axes=(lead, lead))
        dWh = np.tensordot(hs[:-1], dz, axes=(lead, lead))
        db = dz.reshape(-1, 4 * H).sum(axis=0)
        return [dWx, dWh, db, dWy, dby]


def grad(model, params: Params, loss_fn: Callable, inputs: np.ndarray, **kwargs):
    """Analytic gradient of ``loss_fn(model_output) -> (loss, d_output)``.

    For an ``LSTM`` model, ``kwargs`` may carry ``state`` (initial state) and
    ``truncation``. Returns ``(loss, grads)``.
    """
    if isinstance(model, LSTM):
        out, cache, _ = model.unroll(params, inputs, kwargs.get("state"))
        loss, d_out = loss_fn(out)
        _check_loss(loss)
        return loss, model.backward(params, cache, d_out, kwargs.get("truncation"))
    out, cache = model.forward_cache(params, inputs)
    loss, d_out = loss_fn(out)
    _check_loss(loss)
    return loss, model.backward(params, cache, d_out)


def _check_loss(loss) -> None:
    if not np.isfinite(loss):
        raise FloatingPointError(f"non-finite loss {loss}")


def forward(model, params: Params, inputs: np.ndarray, state=None) -> np.ndarray:
    if isinstance(model, LSTM):
        return model.unroll(params, inputs, state)[0]
    return model.forward(params, inputs)


def squared_error(targets: np.ndarray):
    """``0.5 * sum((y - target)^2)`` as a loss_fn."""
    def loss_fn(y):
        diff = y - targets
        return 0.5 * float(np.sum(diff * diff)), diff
    return loss_fn


@dataclass
class GradCheckReport:
    max_relative_error: float
    tolerance: float
    checked: int

    @property
    def passed(self) -> bool:
        return self.max_relative_error < self.tolerance


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> np.ndarray:
    return np.abs(analytic - numeric) / np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)


def grad_check(model, tolerance: float = 1e-4, seed: int = 0, batch_size: int = 4, horizon: int = 30,
               h: float = 1e-5, max_coords: int | None = None, grad_fn: Callable | None = None) -> GradCheckReport:
    """Compare analytic gradients against central finite differences.

    Draws random parameters, inputs and regression targets from ``seed``.
    ``grad_fn(model, params, loss_fn, inputs)`` overrides the analytic path
    (for mutation tests). ``max_coords`` subsamples parameter coordinates.
    """
    rng = np.random.default_rng(seed)
    params = model.init(rng)
    # perturb biases too so no coordinate sits at a trivial value
    params = [p + 0.1 * rng.standard_normal(p.shape) for p in params]
    if isinstance(model, LSTM):
        inputs = rng.standard_normal((horizon, batch_size, model.input_size))
        targets = rng.standard_normal((horizon, batch_size, model.output_size))
    else:
        inputs = rng.standard_normal((batch_size, model.sizes[0]))
        targets = rng.standard_normal((batch_size, model.sizes[-1]))
    loss_fn = squared_error(targets)
    grad_fn = grad_fn or grad
    _, analytic = grad_fn(model, params, loss_fn, inputs)

    def loss_at(ps):
        return loss_fn(forward(model, ps, inputs))[0]

    coords = [(i, j) for i, p in enumerate(params) for j in range(p.size)]
    if max_coords is not None and len(coords) > max_coords:
        picks = rng.choice(len(coords), size=max_coords, replace=False)
        coords = [coords[c] for c in sorted(picks)]
    worst = 0.0
    for i, j in coords:
        flat = params[i].reshape(-1)
        old = flat[j]
        flat[j] = old + h
        up = loss_at(params)
        flat[j] = old - h
        down = loss_at(params)
        flat[j] = old
        numeric = (up - down) / (2 * h)
        err = float(relative_error(np.asarray(analytic[i]).reshape(-1)[j], numeric))
        worst = max(worst, err)
    return GradCheckReport(worst, tolerance, len(coords))
