"""Fully connected beam classifier trained from scratch.

Architecture: 2 inputs (normalized, quantized coordinates), three
rectified hidden layers of 256 units, a linear output layer of M
logits. Optimized with Adam on softmax cross-entropy, a multi-step
learning-rate schedule, and best-validation-epoch model selection.
Everything runs in float64 on a single thread so that results are
bit-reproducible for a fixed seed and finite-difference gradient
checks are tight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, InvalidConfigError, InvalidInputError
from .preprocess import NormParams, quantize_position, scenario_points
from .types import BeamDistribution, NormalizedPosition, Scenario


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 32
    lr: float = 1e-2
    decay_epochs: tuple[int, ...] = (20, 40)
    decay_factor: float = 0.2
    epochs: int = 60
    seed: int = 0
    input_bins: int = 200
    hidden_dims: tuple[int, ...] = (256, 256, 256)

    def __post_init__(self):
        if self.batch_size < 1 or self.epochs < 1 or self.input_bins < 1:
            raise InvalidConfigError("batch_size, epochs and input_bins must be positive")
        if self.lr <= 0 or self.decay_factor <= 0:
            raise InvalidConfigError("learning rate and decay factor must be positive")
        if any(e >= self.epochs for e in self.decay_epochs):
            raise InvalidConfigError(f"decay epochs {self.decay_epochs} must precede total epochs {self.epochs}")


@dataclass
class MlpModel:
    layer_dims: tuple[int, ...]
    weights: list  # weights[i]: (layer_dims[i], layer_dims[i+1])
    biases: list  # biases[i]: (layer_dims[i+1],)
    input_bins: int = 200

    def copy(self) -> "MlpModel":
        return MlpModel(
            self.layer_dims,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.input_bins,
        )


@dataclass
class AdamState:
    m_w: list
    v_w: list
    m_b: list
    v_b: list
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    lr: float
    train_loss: float
    val_top1: float


def init_mlp(layer_dims, rng: np.random.Generator, input_bins: int = 200) -> MlpModel:
    """Uniform init with fan-based bounds on weights, zero biases."""
    dims = tuple(int(d) for d in layer_dims)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(dims, weights, biases, input_bins)


def adam_state_for(model: MlpModel) -> AdamState:
    return AdamState(
        m_w=[np.zeros_like(w) for w in model.weights],
        v_w=[np.zeros_like(w) for w in model.weights],
        m_b=[np.zeros_like(b) for b in model.biases],
        v_b=[np.zeros_like(b) for b in model.biases],
    )


def forward(model: MlpModel, x) -> np.ndarray:
    """Logits for one input (2,) or a batch (B, 2); no output activation."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    h = np.atleast_2d(x)
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        h = h @ w + b
        if i < last:
            h = np.maximum(h, 0.0)
    return h[0] if single else h


def _forward_cached(model, x):
    pre = []  # pre-activations per layer
    acts = [x]  # inputs to each layer
    h = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = h @ w + b
        pre.append(z)
        h = np.maximum(z, 0.0) if i < last else z
        if i < last:
            acts.append(h)
    return h, pre, acts


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def loss_and_grad(model: MlpModel, x, labels):
    """Mean cross-entropy over the batch plus exact reverse-mode gradients.

    Returns (loss, (weight_grads, bias_grads)) with gradient lists
    matching the model's parameter lists.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    labels = np.atleast_1d(np.asarray(labels, dtype=np.int64))
    if x.shape[0] == 0:
        raise InvalidInputError("empty batch")
    m = model.layer_dims[-1]
    if labels.min() < 0 or labels.max() >= m:
        raise InvalidInputError(f"labels must lie in [0, {m}), got range [{labels.min()}, {labels.max()}]")

    logits, pre, acts = _forward_cached(model, x)
    log_probs = _log_softmax(logits)
    n = x.shape[0]
    loss = -float(log_probs[np.arange(n), labels].mean())

    delta = np.exp(log_probs)
    delta[np.arange(n), labels] -= 1.0
    delta /= n

    d_ws = [None] * len(model.weights)
    d_bs = [None] * len(model.biases)
    for i in range(len(model.weights) - 1, -1, -1):
        d_ws[i] = acts[i].T @ delta
        d_bs[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * (pre[i - 1] > 0.0)
    return loss, (d_ws, d_bs)


def adam_step(model: MlpModel, state: AdamState, grads, lr: float) -> None:
    """One bias-corrected Adam update, applied in place."""
    d_ws, d_bs = grads
    state.step += 1
    t = state.step
    c1 = 1.0 - state.beta1**t
    c2 = 1.0 - state.beta2**t
    for params, gs, ms, vs in (
        (model.weights, d_ws, state.m_w, state.v_w),
        (model.biases, d_bs, state.m_b, state.v_b),
    ):
        for p, g, m1, v1 in zip(params, gs, ms, vs):
            m1 *= state.beta1
            m1 += (1.0 - state.beta1) * g
            v1 *= state.beta2
            v1 += (1.0 - state.beta2) * g * g
            p -= lr * (m1 / c1) / (np.sqrt(v1 / c2) + state.eps)


def lr_at(config: TrainConfig, epoch: int) -> float:
    """Initial rate scaled by the decay factor once per passed decay epoch."""
    drops = sum(1 for e in config.decay_epochs if epoch >= e)
    return config.lr * config.decay_factor**drops


def train_mlp(
    train: Scenario,
    val: Scenario,
    config: TrainConfig = TrainConfig(),
    norm: NormParams | None = None,
):
    """Train for the configured number of epochs and keep the best epoch.

    Mini-batches are drawn from a seeded shuffle each epoch (the final
    short batch is kept). After every epoch the top-1 accuracy on the
    validation set is recorded; the returned model is the snapshot from
    the epoch with the highest validation accuracy, earliest epoch
    winning ties. Fully deterministic for a fixed (data, config) pair.
    """
    if len(train) == 0 or len(val) == 0:
        raise InsufficientDataError("training and validation sets must be non-empty")
    x_train, y_train, _ = scenario_points(train, norm, bins=config.input_bins)
    x_val, y_val, _ = scenario_points(val, norm, bins=config.input_bins)

    m = train.codebook_size
    rng = np.random.default_rng(config.seed)
    model = init_mlp((2, *config.hidden_dims, m), rng, config.input_bins)
    state = adam_state_for(model)

    history: list[EpochStats] = []
    best_model, best_acc = None, -1.0
    n = x_train.shape[0]
    for epoch in range(config.epochs):
        lr = lr_at(config, epoch)
        order = rng.permutation(n)
        total_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, grads = loss_and_grad(model, x_train[batch], y_train[batch])
            adam_step(model, state, grads, lr)
            total_loss += loss * batch.size
        val_top1 = float(np.mean(np.argmax(forward(model, x_val), axis=1) == y_val))
        history.append(EpochStats(epoch, lr, total_loss / n, val_top1))
        if val_top1 > best_acc:
            best_acc = val_top1
            best_model = model.copy()
    return best_model, history


def mlp_predict(model: MlpModel, pos: NormalizedPosition) -> BeamDistribution:
    """Softmax of the forward logits; the input is quantized like the training data."""
    q = quantize_position(pos, model.input_bins)
    logits = forward(model, np.array([q.x, q.y]))
    log_probs = _log_softmax(logits[None, :])[0]
    return BeamDistribution(np.exp(log_probs))
