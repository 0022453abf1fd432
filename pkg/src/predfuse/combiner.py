"""Trained linear combiner: non-negative weighted sum, shift, sigmoid.

The combined score of K model probabilities is sum(w_i * p_i) with every
w_i >= 0, so it lives in [0, sum(w)].  A trainable shift b re-centres it
before the sigmoid; the class comes from thresholding the sigmoid output.
Training minimizes mean binary cross-entropy plus an L2 penalty on the
weights (not the shift) with ADAM, projecting weights back to >= 0 after
every step and recording whether any projection actually clipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import LabelVector, PredictionMatrix, ProbSeries, check_threshold, sigmoid
from .errors import ConstraintError, ValidationError
from .optim import Adam

__all__ = ["CombinerWeights", "TrainConfig", "TrainResult", "raw_score",
           "forward", "predict", "loss", "gradient", "train"]

_LOG_EPS = 1e-12  # clamp inside the BCE logarithms only


@dataclass(frozen=True)
class CombinerWeights:
    """Trained combination state: per-model weights, shift, threshold."""

    model_names: tuple[str, ...]
    w: np.ndarray = field(repr=False)
    b: float
    t: float = 0.5

    def __post_init__(self):
        names = tuple(str(n) for n in self.model_names)
        if not names or len(set(names)) != len(names):
            raise ValidationError("model names must be non-empty and unique")
        object.__setattr__(self, "model_names", names)
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] != len(names):
            raise ValidationError("need exactly one weight per model")
        if not np.isfinite(w).all():
            raise ValidationError("weights must be finite")
        if (w < 0).any():
            raise ConstraintError(f"negative combination weight {w[w < 0][0]}")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        b = float(self.b)
        if not np.isfinite(b):
            raise ValidationError("shift b must be finite")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "t", check_threshold(self.t))

    @property
    def k(self) -> int:
        return len(self.model_names)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the combiner trainer."""

    learning_rate: float = 0.001
    epochs: int = 200
    batch_size: int = 32
    l2: float = 0.039
    seed: int = 0
    shuffle_each_epoch: bool = True

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValidationError("epochs and batch_size must be positive")
        if self.l2 < 0:
            raise ValidationError("l2 must be non-negative")


@dataclass(frozen=True)
class TrainResult:
    """Trained weights plus training provenance flags."""

    weights: CombinerWeights
    config: TrainConfig
    clipped_any: bool
    degenerate_labels: bool


def _check_vector(weights: CombinerWeights, p) -> np.ndarray:
    v = np.asarray(p, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != weights.k:
        raise ValidationError(
            f"probability vector has length {v.shape[0] if v.ndim == 1 else '?'}, "
            f"expected {weights.k}"
        )
    if not np.isfinite(v).all() or (v < 0).any() or (v > 1).any():
        raise ValidationError("inputs must be probabilities in [0, 1]")
    return v


def raw_score(weights: CombinerWeights, p) -> float:
    """Weighted sum of model probabilities; non-negative by construction."""
    return float(_check_vector(weights, p) @ weights.w)


def forward(weights: CombinerWeights, p) -> float:
    """Combined probability: sigmoid(raw_score - b)."""
    return float(sigmoid(raw_score(weights, p) - weights.b))


def predict(weights: CombinerWeights, matrix: PredictionMatrix) -> ProbSeries:
    """Per-sample forward values, aligned to the matrix ids.

    Columns are matched by model name, so the matrix may carry extra models
    or list them in a different order.
    """
    sub = matrix.select(weights.model_names)
    return ProbSeries(sub.ids, sigmoid(sub.values @ weights.w - weights.b))


def _training_arrays(matrix: PredictionMatrix, labels: LabelVector
                     ) -> tuple[np.ndarray, np.ndarray]:
    # Canonical id ordering: shuffles then depend only on the seed, not on
    # the row order callers happened to use.
    order = sorted(range(len(matrix.ids)), key=lambda i: matrix.ids[i])
    ids = tuple(matrix.ids[i] for i in order)
    return matrix.values[np.asarray(order)], labels.align_to(ids)


def _bce(yhat: np.ndarray, u: np.ndarray) -> float:
    yc = np.clip(yhat, _LOG_EPS, 1.0 - _LOG_EPS)
    return float(-(u * np.log(yc) + (1.0 - u) * np.log(1.0 - yc)).mean())


def loss(weights: CombinerWeights, matrix: PredictionMatrix,
         labels: LabelVector, l2: float = 0.039) -> float:
    """Mean binary cross-entropy of forward against labels, plus l2*sum(w^2)."""
    x, u = _training_arrays(matrix.select(weights.model_names), labels)
    yhat = sigmoid(x @ weights.w - weights.b)
    return _bce(yhat, u) + float(l2) * float(weights.w @ weights.w)


def gradient(weights: CombinerWeights, matrix: PredictionMatrix,
             labels: LabelVector, l2: float = 0.039) -> np.ndarray:
    """Analytic gradient of :func:`loss`, length K+1: d/dw_1..K then d/db."""
    x, u = _training_arrays(matrix.select(weights.model_names), labels)
    resid = sigmoid(x @ weights.w - weights.b) - u
    gw = x.T @ resid / len(u) + 2.0 * float(l2) * weights.w
    gb = -float(resid.mean())
    return np.append(gw, gb)


def train(matrix: PredictionMatrix, labels: LabelVector,
          cfg: TrainConfig = TrainConfig(), t: float = 0.5,
          callback=None) -> TrainResult:
    """Fit combination weights by minibatch ADAM with non-negativity projection.

    Parameters
    ----------
    matrix, labels : aligned training predictions and ground truth.
    cfg : optimizer hyperparameters; the run is bit-deterministic given
        identical inputs and ``cfg.seed``.
    t : decision threshold stored on the result.
    callback : optional ``f(step, w, b)`` invoked after every projected
        update; used by the test suite to watch intermediate weights.

    Returns
    -------
    TrainResult with the final weights (all >= 0), whether any update was
    clipped back to zero, and whether the labels were single-class.
    """
    x, u = _training_arrays(matrix, labels)
    n, k = x.shape
    if n < k + 1:
        raise ValidationError(f"need at least K+1={k + 1} samples, got {n}")
    degenerate = bool((u == u[0]).all())

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    # Start from the uninformative point: equal weights, shift at the centre
    # of the initial score range, so the initial forward is ~0.5.
    w = np.full(k, 1.0 / k)
    b = 0.5
    opt = Adam(k + 1, lr=cfg.learning_rate)
    clipped = False
    step = 0
    for _ in range(cfg.epochs):
        order = rng.permutation(n) if cfg.shuffle_each_epoch else np.arange(n)
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            xb, ub = x[idx], u[idx]
            resid = sigmoid(xb @ w - b) - ub
            gw = xb.T @ resid / len(idx) + 2.0 * cfg.l2 * w
            gb = -resid.mean()
            params = opt.step(np.append(w, b), np.append(gw, gb))
            w, b = params[:k], float(params[k])
            if (w < 0).any():
                clipped = True
                w = np.maximum(w, 0.0)
            step += 1
            if callback is not None:
                callback(step, w, b)
    weights = CombinerWeights(matrix.model_names, w, b, t)
    return TrainResult(weights=weights, config=cfg, clipped_any=clipped,
                       degenerate_labels=degenerate)


def with_threshold(weights: CombinerWeights, t: float) -> CombinerWeights:
    """Copy of the weights with a different decision threshold."""
    return replace(weights, t=check_threshold(t))
