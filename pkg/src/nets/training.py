"""
Training: relative L2 loss, Adam with step decay, the training loop and a
finite-difference gradient check.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from ..errors import SpectralError, TrainingDivergedError
from ..spectral.series import CoeffSeries, Grid, GridFunction, interpolate_to_grid
from .autodiff import DiffTensor
from .models import Model, as_leaves

logger = logging.getLogger(__name__)

BETA1 = 0.9
BETA2 = 0.999
EPS = 1e-8


@dataclass(frozen=True)
class TrainConfig:
    """Adam settings. Steps are counted per optimizer update (one per epoch with full batches)."""

    lr: float = 1e-3
    decay_factor: float = 0.5
    decay_interval: int = 2000
    epochs: int = 2000
    batch_size: Optional[int] = None
    seed: int = 0
    log_every: int = 100

    def __post_init__(self):
        if self.lr <= 0 or self.decay_interval <= 0 or self.epochs < 0:
            raise ValueError("lr and decay_interval must be positive, epochs non-negative")
        if not 0 < self.decay_factor <= 1:
            raise ValueError("decay_factor must lie in (0, 1]")
        if self.batch_size is not None and self.batch_size <= 0:
            raise ValueError("batch_size must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainResult:
    params: Dict[str, np.ndarray]
    history: List[dict] = field(default_factory=list)
    epochs_run: int = 0

    @property
    def final_train_loss(self) -> float:
        return self.history[-1]["train_loss"] if self.history else float("nan")


# ---------------------------------------------------------------------------
# loss


def _sample_norms(target: np.ndarray) -> np.ndarray:
    t = np.asarray(target).reshape(len(target), -1)
    norms = np.sqrt(np.sum(np.abs(t) ** 2, axis=1))
    if np.any(norms == 0.0):
        raise SpectralError("relative L2 loss undefined for a zero-norm target")
    return norms


def _common_grid_values(items: Sequence, size: int) -> np.ndarray:
    rows = []
    for item in items:
        if isinstance(item, GridFunction):
            if any(g is not Grid.UNIFORM for g in item.grids):
                raise SpectralError("grid functions must be sampled on the uniform evaluation grid")
            rows.append(np.asarray(item.values))
        else:
            rows.append(interpolate_to_grid(item, (size,) * item.dim, (Grid.UNIFORM,) * item.dim).values)
    return np.stack(rows)


def relative_l2_loss(pred, target, eval_size: int = 100):
    """
    Mean over the batch of ||pred - target|| / ||target||.

    ``pred`` may be a DiffTensor (the result is differentiable), an array of
    samples, or a sequence of CoeffSeries / GridFunction, in which case both
    sides are compared on the uniform grid of ``eval_size`` points per axis.
    """
    if isinstance(pred, (CoeffSeries, GridFunction)):
        pred, target = [pred], [target]
    if isinstance(pred, (list, tuple)):
        pred = _common_grid_values(pred, eval_size)
        target = _common_grid_values(target, eval_size)
    target = np.asarray(target)
    norms = _sample_norms(target)
    batch = len(target)
    if isinstance(pred, DiffTensor):
        diff = (pred - target).reshape(batch, -1)
        ratios = diff.sum_squares(axis=1).sqrt() * (1.0 / norms)
        return ratios.sum() * (1.0 / batch)
    diff = (np.asarray(pred) - target).reshape(batch, -1)
    return float(np.mean(np.sqrt(np.sum(np.abs(diff) ** 2, axis=1)) / norms))


def per_sample_errors(pred: np.ndarray, target: np.ndarray) -> np.ndarray:
    norms = _sample_norms(target)
    diff = (np.asarray(pred) - np.asarray(target)).reshape(len(target), -1)
    return np.sqrt(np.sum(np.abs(diff) ** 2, axis=1)) / norms


# ---------------------------------------------------------------------------
# optimizer


def learning_rate(config: TrainConfig, t: int) -> float:
    """lr * decay_factor ** floor(t / decay_interval) for the 0-based step t."""
    return config.lr * config.decay_factor ** (t // config.decay_interval)


def init_adam_state(params: Dict[str, np.ndarray]) -> Dict[str, Dict[str, np.ndarray]]:
    return {name: {"m": np.zeros_like(p), "v": np.zeros_like(p)} for name, p in params.items()}


def adam_step(
    params: Dict[str, np.ndarray],
    grads: Dict[str, np.ndarray],
    state: Dict[str, Dict[str, np.ndarray]],
    t: int,
    config: TrainConfig,
):
    """
    One Adam update at 0-based step t.

    Complex parameters keep separate first and second moments for their real
    and imaginary parts (stored as the real and imaginary parts of m and v).

    Returns:
        (new params, new state)
    """
    lr = learning_rate(config, t)
    c1 = 1.0 - BETA1 ** (t + 1)
    c2 = 1.0 - BETA2 ** (t + 1)
    new_params, new_state = {}, {}
    for name, p in params.items():
        g = grads.get(name)
        if g is None:
            g = np.zeros_like(p)
        m = BETA1 * state[name]["m"] + (1.0 - BETA1) * g
        if np.iscomplexobj(p):
            v = BETA2 * state[name]["v"] + (1.0 - BETA2) * (g.real ** 2 + 1j * g.imag ** 2)
            step_re = (m.real / c1) / (np.sqrt(v.real / c2) + EPS)
            step_im = (m.imag / c1) / (np.sqrt(v.imag / c2) + EPS)
            new_params[name] = p - lr * (step_re + 1j * step_im)
        else:
            v = BETA2 * state[name]["v"] + (1.0 - BETA2) * g ** 2
            new_params[name] = p - lr * (m / c1) / (np.sqrt(v / c2) + EPS)
        new_state[name] = {"m": m, "v": v}
    return new_params, new_state


# ---------------------------------------------------------------------------
# training


def loss_and_grads(model: Model, params: Dict[str, np.ndarray], x: np.ndarray, y: np.ndarray):
    leaves = as_leaves(params)
    loss = relative_l2_loss(model.forward(leaves, x), y)
    loss.backward()
    grads = {k: (t.grad if t.grad is not None else np.zeros_like(t.value)) for k, t in leaves.items()}
    return float(np.real(loss.value)), grads


def _param_norms(params: Dict[str, np.ndarray]) -> Dict[str, float]:
    return {k: float(np.linalg.norm(v)) for k, v in params.items()}


def train_loop(
    model: Model,
    x_train: np.ndarray,
    y_train: np.ndarray,
    config: TrainConfig,
    x_test: Optional[np.ndarray] = None,
    y_test: Optional[np.ndarray] = None,
    params: Optional[Dict[str, np.ndarray]] = None,
) -> TrainResult:
    """
    Adam descent on the mean relative L2 loss.

    Args:
        model: the architecture
        x_train, y_train: prepared inputs and targets on the evaluation grid
        config: optimizer settings; config.seed drives initialization and batching
        x_test, y_test: optional held-out set, evaluated every log interval
        params: starting parameters (initialized from config.seed when omitted)

    Returns:
        TrainResult with the final parameters and the loss history
    """
    if len(x_train) == 0:
        raise ValueError("empty training set")
    if params is None:
        params = model.init_params(config.seed)
    result = TrainResult(params=params)
    if not params:
        loss = relative_l2_loss(model.predict(params, x_train), y_train)
        record = {"epoch": 0, "train_loss": loss}
        if x_test is not None:
            record["test_loss"] = relative_l2_loss(model.predict(params, x_test), y_test)
        result.history.append(record)
        return result

    rng = np.random.default_rng(config.seed)
    n = len(x_train)
    batch = config.batch_size or n
    state = init_adam_state(params)
    t = 0
    for epoch in range(config.epochs):
        order = rng.permutation(n) if batch < n else np.arange(n)
        epoch_losses = []
        for start in range(0, n, batch):
            idx = order[start:start + batch]
            loss, grads = loss_and_grads(model, params, x_train[idx], y_train[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, loss, _param_norms(params))
            params, state = adam_step(params, grads, state, t, config)
            epoch_losses.append(loss)
            t += 1
        result.epochs_run = epoch + 1
        if epoch % config.log_every == 0 or epoch == config.epochs - 1:
            record = {"epoch": epoch, "train_loss": float(np.mean(epoch_losses))}
            if x_test is not None:
                record["test_loss"] = relative_l2_loss(model.predict(params, x_test), y_test)
            result.history.append(record)
            logger.debug(f"epoch {epoch}: {record}")

    result.params = params
    logger.info(
        f"Trained {model.spec.architecture.value} for {result.epochs_run} epochs, "
        f"final train loss {result.final_train_loss:.4e}"
    )
    return result


def gradient_check(
    model: Model,
    params: Dict[str, np.ndarray],
    x: np.ndarray,
    target: Optional[np.ndarray] = None,
    step: float = 1e-6,
    seed: int = 0,
) -> float:
    """
    Max over parameter tensors of ||grad - fd||_inf / ||fd||_inf, with central
    differences on the real and imaginary part of every entry.
    """
    if target is None:
        shape = model.predict(params, x).shape
        target = np.random.default_rng(seed).standard_normal(shape)
    _, grads = loss_and_grads(model, params, x, target)

    def loss_at(p):
        return relative_l2_loss(model.predict(p, x), target)

    worst = 0.0
    for name, value in params.items():
        fd = np.zeros_like(value)
        parts = (1.0, 1j) if np.iscomplexobj(value) else (1.0,)
        for idx in np.ndindex(value.shape):
            for unit in parts:
                plus = dict(params)
                minus = dict(params)
                plus[name] = value.copy()
                minus[name] = value.copy()
                plus[name][idx] += unit * step
                minus[name][idx] -= unit * step
                fd[idx] += unit * (loss_at(plus) - loss_at(minus)) / (2.0 * step)
        scale = np.max(np.abs(fd))
        err = np.max(np.abs(grads[name] - fd))
        rel = err / scale if scale > 0 else err
        logger.debug(f"gradient check {name}: {rel:.3e}")
        worst = max(worst, rel)
    return float(worst)
