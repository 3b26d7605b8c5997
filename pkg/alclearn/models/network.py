"""Convolutional Q-network scoring (parent, child) state transitions.

Architecture: one input channel (the 4 x d state matrix), 32 filters of
size 3 x 3 with stride 1 and same padding, ReLU, flatten, affine ``(W, b1)``,
ReLU, affine ``(H, b2)`` to a scalar. Forward and backward passes are
written out on numpy arrays in float64.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from alclearn.embeddings import STATE_ROWS
from alclearn.errors import ShapeMismatchError

CHANNELS = 32
KERNEL = 3
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class QNetworkParams:
    """Parameters ``[omega, W, H, b1, b2]``; also used as the container for gradients."""

    omega: np.ndarray  # (CHANNELS, 1, KERNEL, KERNEL)
    W: np.ndarray  # (CHANNELS * STATE_ROWS * d, hidden)
    b1: np.ndarray  # (hidden,)
    H: np.ndarray  # (hidden, 1)
    b2: np.ndarray  # (1,)

    def __post_init__(self) -> None:
        if self.omega.shape != (CHANNELS, 1, KERNEL, KERNEL):
            raise ShapeMismatchError(f"omega has shape {self.omega.shape}")
        hidden = self.b1.shape[0] if self.b1.ndim == 1 else -1
        if self.W.ndim != 2 or self.W.shape[1] != hidden or self.W.shape[0] % (CHANNELS * STATE_ROWS):
            raise ShapeMismatchError(f"W has shape {self.W.shape} for hidden width {hidden}")
        if self.H.shape != (hidden, 1) or self.b2.shape != (1,):
            raise ShapeMismatchError(f"H/b2 have shapes {self.H.shape}/{self.b2.shape}")

    @property
    def d(self) -> int:
        return self.W.shape[0] // (CHANNELS * STATE_ROWS)

    @property
    def hidden(self) -> int:
        return self.W.shape[1]

    @property
    def input_shape(self) -> tuple[int, int]:
        return (STATE_ROWS, self.d)

    def tensors(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def map(self, fn) -> QNetworkParams:
        return QNetworkParams(**{name: fn(value) for name, value in self.tensors().items()})

    def zip_map(self, other: QNetworkParams, fn) -> QNetworkParams:
        theirs = other.tensors()
        return QNetworkParams(**{name: fn(value, theirs[name]) for name, value in self.tensors().items()})


def parameter_count(params: QNetworkParams) -> int:
    return sum(int(value.size) for value in params.tensors().values())


def _glorot(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_network(d: int, hidden: int = 256, seed: int = 0) -> QNetworkParams:
    """Glorot-uniform weights and zero biases, deterministic under ``seed``."""
    if d < 2:
        raise ShapeMismatchError(f"state dimension must be >= 2, got {d}")
    if hidden < 1:
        raise ShapeMismatchError(f"hidden width must be positive, got {hidden}")
    rng = np.random.default_rng(seed)
    flat = CHANNELS * STATE_ROWS * d
    receptive = KERNEL * KERNEL
    return QNetworkParams(
        omega=_glorot(rng, (CHANNELS, 1, KERNEL, KERNEL), receptive, CHANNELS * receptive),
        W=_glorot(rng, (flat, hidden), flat, hidden),
        b1=np.zeros(hidden),
        H=_glorot(rng, (hidden, 1), hidden, 1),
        b2=np.zeros(1),
    )


def _as_batch(params: QNetworkParams, states: np.ndarray) -> np.ndarray:
    batch = np.asarray(states, dtype=np.float64)
    if batch.ndim == 2:
        batch = batch[None]
    if batch.ndim != 3 or batch.shape[1:] != params.input_shape:
        raise ShapeMismatchError(f"expected states of shape (*, {STATE_ROWS}, {params.d}), got {np.shape(states)}")
    return batch


def _windows(batch: np.ndarray) -> np.ndarray:
    """3 x 3 neighbourhoods of every cell under zero ("same") padding: (B, 4, d, 3, 3)."""
    pad = KERNEL // 2
    padded = np.pad(batch, ((0, 0), (pad, pad), (pad, pad)))
    return sliding_window_view(padded, (KERNEL, KERNEL), axis=(1, 2))


def _forward(params: QNetworkParams, batch: np.ndarray) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    windows = _windows(batch)
    # (B, 4, d, C) -> (B, C, 4, d)
    z1 = np.tensordot(windows, params.omega[:, 0], axes=([3, 4], [1, 2])).transpose(0, 3, 1, 2)
    a1 = np.maximum(z1, 0.0)
    flat = a1.reshape(batch.shape[0], -1)
    z2 = flat @ params.W + params.b1
    a2 = np.maximum(z2, 0.0)
    out = (a2 @ params.H)[:, 0] + params.b2[0]
    return out, {"windows": windows, "z1": z1, "flat": flat, "z2": z2, "a2": a2}


def forward_batch(params: QNetworkParams, states: np.ndarray) -> np.ndarray:
    """Q-values of a stack of state matrices, shape (B,)."""
    out, _ = _forward(params, _as_batch(params, states))
    return out


def forward(params: QNetworkParams, m: np.ndarray) -> float:
    m = np.asarray(m, dtype=np.float64)
    if m.shape != params.input_shape:
        raise ShapeMismatchError(f"expected a state of shape {params.input_shape}, got {m.shape}")
    return float(forward_batch(params, m[None])[0])


def loss_and_gradients(
    params: QNetworkParams,
    states: np.ndarray,
    targets: np.ndarray,
) -> tuple[float, QNetworkParams]:
    """Mean squared error against precomputed targets and its exact gradients."""
    batch = _as_batch(params, states)
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if batch.shape[0] == 0:
        raise ShapeMismatchError("empty batch")
    if targets.shape[0] != batch.shape[0]:
        raise ShapeMismatchError(f"{batch.shape[0]} states but {targets.shape[0]} targets")

    size = batch.shape[0]
    out, cache = _forward(params, batch)
    residual = out - targets
    loss = float(np.mean(residual**2))

    d_out = 2.0 * residual / size  # (B,)
    d_H = cache["a2"].T @ d_out[:, None]
    d_b2 = np.array([d_out.sum()])
    d_z2 = (d_out[:, None] @ params.H.T) * (cache["z2"] > 0)
    d_W = cache["flat"].T @ d_z2
    d_b1 = d_z2.sum(axis=0)
    d_z1 = (d_z2 @ params.W.T).reshape(cache["z1"].shape) * (cache["z1"] > 0)
    # (B, 4, d, 3, 3) x (B, C, 4, d) -> (C, 3, 3)
    d_omega = np.tensordot(d_z1, cache["windows"], axes=([0, 2, 3], [0, 1, 2]))[:, None]

    grads = QNetworkParams(omega=d_omega, W=d_W, b1=d_b1, H=d_H, b2=d_b2)
    return loss, grads


@dataclass(frozen=True)
class AdamState:
    first: QNetworkParams
    second: QNetworkParams
    step: int = 0

    @classmethod
    def zeros_like(cls, params: QNetworkParams) -> AdamState:
        zeros = params.map(np.zeros_like)
        return cls(first=zeros, second=zeros, step=0)


def adam_step(
    params: QNetworkParams,
    grads: QNetworkParams,
    state: AdamState,
    learning_rate: float,
) -> tuple[QNetworkParams, AdamState]:
    """One bias-corrected ADAM update; inputs are left untouched."""
    for name, value in params.tensors().items():
        if grads.tensors()[name].shape != value.shape:
            raise ShapeMismatchError(f"gradient for {name} has shape {grads.tensors()[name].shape}")
    step = state.step + 1
    first = state.first.zip_map(grads, lambda m, g: ADAM_BETA1 * m + (1 - ADAM_BETA1) * g)
    second = state.second.zip_map(grads, lambda v, g: ADAM_BETA2 * v + (1 - ADAM_BETA2) * g * g)
    correction1 = 1 - ADAM_BETA1**step
    correction2 = 1 - ADAM_BETA2**step
    moments = first.zip_map(second, lambda m, v: (m / correction1) / (np.sqrt(v / correction2) + ADAM_EPS))
    updated = params.zip_map(moments, lambda p, u: p - learning_rate * u)
    return updated, AdamState(first=first, second=second, step=step)
