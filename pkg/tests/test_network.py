"""Tests for the Q-network, its optimizer and checkpoints."""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np
import pytest

from alclearn.errors import CheckpointError, InputFileError, ShapeMismatchError
from alclearn.models import load_checkpoint, save_checkpoint
from alclearn.models.network import (
    AdamState,
    QNetworkParams,
    adam_step,
    forward,
    forward_batch,
    init_network,
    loss_and_gradients,
    parameter_count,
)


def _numeric_gradient(params: QNetworkParams, states: np.ndarray, targets: np.ndarray, name: str, index: tuple) -> float:
    eps = 1e-6
    plus = params.map(np.copy)
    plus.tensors()[name][index] += eps
    minus = params.map(np.copy)
    minus.tensors()[name][index] -= eps
    loss_plus, _ = loss_and_gradients(plus, states, targets)
    loss_minus, _ = loss_and_gradients(minus, states, targets)
    return (loss_plus - loss_minus) / (2 * eps)


def test_initial_shapes_and_biases() -> None:
    """d=32, hidden=256 gives a 4096 x 256 hidden layer and zero biases."""
    params = init_network(32, hidden=256, seed=0)
    assert params.omega.shape == (32, 1, 3, 3)
    assert params.W.shape == (4096, 256)
    assert params.H.shape == (256, 1)
    assert not params.b1.any() and not params.b2.any()
    assert parameter_count(params) == 32 * 9 + 4096 * 256 + 256 + 256 + 1
    assert params.d == 32 and params.hidden == 256


def test_initialization_is_seeded() -> None:
    first = init_network(8, hidden=16, seed=3)
    second = init_network(8, hidden=16, seed=3)
    for name, value in first.tensors().items():
        np.testing.assert_array_equal(value, second.tensors()[name])


def test_zero_state_outputs_the_bias_path() -> None:
    """With a zero input only the biases reach the output."""
    params = init_network(4, hidden=8, seed=0)
    b1 = np.linspace(-1.0, 1.0, 8)
    shifted = QNetworkParams(omega=params.omega, W=params.W, b1=b1, H=params.H, b2=np.array([0.7]))
    expected = float(np.maximum(b1, 0.0) @ params.H[:, 0] + 0.7)
    assert forward(shifted, np.zeros((4, 4))) == pytest.approx(expected, abs=1e-12)
    assert forward(params, np.zeros((4, 4))) == 0.0


def test_positive_scaling_of_a_bias_free_network() -> None:
    """Without biases the network is positively homogeneous."""
    params = init_network(6, hidden=16, seed=2)
    state = np.random.default_rng(0).standard_normal((4, 6))
    assert forward(params, 3.0 * state) == pytest.approx(3.0 * forward(params, state), rel=1e-9)


def test_batched_and_single_forward_agree() -> None:
    params = init_network(5, hidden=12, seed=1)
    states = np.random.default_rng(1).standard_normal((7, 4, 5))
    batched = forward_batch(params, states)
    singles = np.array([forward(params, state) for state in states])
    np.testing.assert_allclose(batched, singles, rtol=1e-12, atol=1e-12)


def test_shape_mismatch_is_rejected() -> None:
    params = init_network(4, hidden=8, seed=0)
    with pytest.raises(ShapeMismatchError):
        forward(params, np.zeros((4, 5)))
    with pytest.raises(ShapeMismatchError):
        loss_and_gradients(params, np.zeros((2, 4, 4)), np.zeros(3))


def test_loss_is_zero_at_the_network_output() -> None:
    """Targets equal to the predictions give zero loss and zero gradients."""
    params = init_network(4, hidden=8, seed=0)
    states = np.random.default_rng(2).standard_normal((5, 4, 4))
    loss, grads = loss_and_gradients(params, states, forward_batch(params, states))
    assert loss == 0.0
    for value in grads.tensors().values():
        assert not value.any()


def test_gradients_match_finite_differences() -> None:
    """Analytic gradients agree with central differences on random draws."""
    for draw in range(10):
        rng = np.random.default_rng(100 + draw)
        params = init_network(32, hidden=256, seed=draw)
        params = QNetworkParams(
            omega=params.omega,
            W=params.W,
            b1=rng.normal(scale=0.1, size=256),
            H=params.H,
            b2=rng.normal(scale=0.1, size=1),
        )
        states = rng.standard_normal((3, 4, 32))
        targets = rng.standard_normal(3)
        _, grads = loss_and_gradients(params, states, targets)
        for name, analytic in grads.tensors().items():
            picks = [np.unravel_index(int(np.argmax(np.abs(analytic))), analytic.shape)]
            picks += [tuple(int(rng.integers(size)) for size in analytic.shape) for _ in range(2)]
            for index in picks:
                numeric = _numeric_gradient(params, states, targets, name, index)
                exact = float(analytic[index])
                error = abs(numeric - exact) / max(1e-5, abs(numeric) + abs(exact))
                assert error < 1e-4, (draw, name, index, numeric, exact)


def test_duplicated_batches_give_the_same_update() -> None:
    """Mean-reduced loss is invariant to repeating every sample."""
    params = init_network(4, hidden=8, seed=0)
    rng = np.random.default_rng(5)
    states = rng.standard_normal((3, 4, 4))
    targets = rng.standard_normal(3)
    loss, grads = loss_and_gradients(params, states, targets)
    loss2, grads2 = loss_and_gradients(params, np.concatenate([states, states]), np.concatenate([targets, targets]))
    assert loss2 == pytest.approx(loss, rel=1e-12)
    for name, value in grads.tensors().items():
        np.testing.assert_allclose(grads2.tensors()[name], value, rtol=1e-10, atol=1e-14)


def test_adam_ignores_zero_gradients() -> None:
    params = init_network(4, hidden=8, seed=0)
    zeros = params.map(np.zeros_like)
    updated, state = adam_step(params, zeros, AdamState.zeros_like(params), 0.01)
    assert state.step == 1
    for name, value in params.tensors().items():
        np.testing.assert_array_equal(updated.tensors()[name], value)


def test_first_adam_step_moves_by_the_learning_rate() -> None:
    """After bias correction the first update is about lr * sign(g)."""
    params = init_network(4, hidden=8, seed=0)
    rng = np.random.default_rng(0)
    grads = params.map(lambda value: np.where(rng.random(value.shape) < 0.5, -0.05, 0.05))
    updated, _ = adam_step(params, grads, AdamState.zeros_like(params), 0.01)
    for name, value in params.tensors().items():
        expected = value - 0.01 * np.sign(grads.tensors()[name])
        np.testing.assert_allclose(updated.tensors()[name], expected, atol=1e-8)


def test_forward_throughput() -> None:
    """A thousand states score in well under a second."""
    params = init_network(32, hidden=256, seed=0)
    states = np.random.default_rng(0).standard_normal((1000, 4, 32))
    forward_batch(params, states[:10])
    started = time.perf_counter()
    forward_batch(params, states)
    assert time.perf_counter() - started < 1.0


def test_checkpoint_round_trip(tmp_path: Path) -> None:
    """Saved tensors load back bit-for-bit."""
    params = init_network(4, hidden=8, seed=9)
    path = tmp_path / "models" / "q.json"
    save_checkpoint(params, path)
    assert json.loads(path.read_text(encoding="utf-8"))["schema"] == "alclearn.qnet/1"
    loaded = load_checkpoint(path, d=4, hidden=8)
    for name, value in params.tensors().items():
        np.testing.assert_array_equal(loaded.tensors()[name], value)


def test_checkpoint_validation(tmp_path: Path) -> None:
    """Wrong schema, wrong shapes, dimension mismatches and missing files are reported."""
    params = init_network(4, hidden=8, seed=0)
    path = tmp_path / "q.json"
    save_checkpoint(params, path)
    with pytest.raises(CheckpointError):
        load_checkpoint(path, d=5)

    document = json.loads(path.read_text(encoding="utf-8"))
    document["schema"] = "alclearn.qnet/0"
    bad_schema = tmp_path / "schema.json"
    bad_schema.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_checkpoint(bad_schema)

    document = json.loads(path.read_text(encoding="utf-8"))
    for record in document["tensors"]:
        if record["name"] == "b1":
            record["shape"] = [4, 2]
    bad_shape = tmp_path / "shape.json"
    bad_shape.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_checkpoint(bad_shape)

    with pytest.raises(InputFileError):
        load_checkpoint(tmp_path / "absent.json")

    binary = tmp_path / "binary.json"
    binary.write_bytes(b"\xff\xfe{}")
    with pytest.raises(CheckpointError):
        load_checkpoint(binary)
