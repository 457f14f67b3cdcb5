"""Softmax regression and one-vs-rest linear SVM, both trained by mini-batch (sub)gradient descent.

Both operate on CSR matrices, so every product touches only nonzero features.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from lexisent.labels import N_CLASSES
from lexisent.models.base import ClassifierModel, Dataset, TrainingError, class_weights, validate_training_data
from lexisent.seeding import derive_rng

log = logging.getLogger(__name__)


def _onehot(y: np.ndarray) -> np.ndarray:
    out = np.zeros((y.shape[0], N_CLASSES))
    out[np.arange(y.shape[0]), y] = 1.0
    return out


# -- softmax ------------------------------------------------------------------------


@dataclass(frozen=True)
class SoftmaxParams:
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 10
    batch: int = 256
    class_weight: str | None = None


def softmax_loss_grad(W, b, X, Y, sample_weight, l2):
    """Weighted mean cross-entropy plus (l2/2)*||W||^2, with gradients for W (3xV) and b (3)."""
    logits = np.asarray(X @ W.T) + b
    log_p = logits - logsumexp(logits, axis=1, keepdims=True)
    sw = sample_weight / sample_weight.sum()
    loss = -float(np.sum(sw[:, None] * Y * log_p)) + 0.5 * l2 * float(np.sum(W * W))
    delta = (np.exp(log_p) - Y) * sw[:, None]
    grad_W = np.asarray((X.T @ delta).T) + l2 * W
    grad_b = delta.sum(axis=0)
    return loss, grad_W, grad_b


@dataclass(eq=False)
class SoftmaxModel(ClassifierModel):
    W: np.ndarray
    b: np.ndarray
    seed: int = 0
    dimension: int = 0
    loss_history: list[float] = field(default_factory=list)

    variant = "softmax"
    probabilistic = True

    def class_scores(self, X) -> np.ndarray:
        logits = np.asarray(X @ self.W.T) + self.b
        return np.exp(logits - logsumexp(logits, axis=1, keepdims=True))

    def params_dict(self) -> dict:
        return {"W": self.W.tolist(), "b": self.b.tolist(), "loss_history": list(self.loss_history)}

    @classmethod
    def from_params(cls, params, seed, dimension):
        W = np.asarray(params["W"], dtype=np.float64).reshape(N_CLASSES, dimension)
        b = np.asarray(params["b"], dtype=np.float64).reshape(N_CLASSES)
        return cls(W, b, seed, dimension, [float(v) for v in params.get("loss_history", [])])


def fit_softmax(data: Dataset, hp: SoftmaxParams = SoftmaxParams(), seed: int = 0) -> SoftmaxModel:
    validate_training_data(data)
    rng = derive_rng(seed, "softmax")
    Y = _onehot(data.y)
    sw = class_weights(data.y, hp.class_weight)[data.y]
    W = np.zeros((N_CLASSES, data.dimension))
    b = np.zeros(N_CLASSES)
    history = []
    for epoch in range(hp.epochs):
        order = rng.permutation(data.n)
        with np.errstate(over="ignore", invalid="ignore"):  # divergence is reported below
            for lo in range(0, data.n, hp.batch):
                idx = order[lo:lo + hp.batch]
                _, gW, gb = softmax_loss_grad(W, b, data.X[idx], Y[idx], sw[idx], hp.l2)
                W -= hp.learning_rate * gW
                b -= hp.learning_rate * gb
            loss, _, _ = softmax_loss_grad(W, b, data.X, Y, sw, hp.l2)
        if not math.isfinite(loss):
            raise TrainingError(
                f"softmax loss became non-finite at epoch {epoch} "
                f"(lr={hp.learning_rate}, l2={hp.l2}, max|W|={np.abs(W).max():.3g})"
            )
        history.append(loss)
        log.debug("softmax epoch %d loss %.6f", epoch, loss)
    return SoftmaxModel(W, b, seed, data.dimension, history)


# -- linear SVM -----------------------------------------------------------------------


@dataclass(frozen=True)
class SVMParams:
    c: float = 1.0
    epochs: int = 10
    learning_rate: float = 0.1
    batch: int = 32
    class_weight: str | None = None


def svm_objective(W, b, X, T, sample_weight, lam):
    """Per-class (lam/2)*||w_k||^2 + weighted mean hinge; T holds +/-1 targets (n x 3)."""
    margins = T * (np.asarray(X @ W.T) + b)
    sw = sample_weight / sample_weight.sum()
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * lam * np.sum(W * W, axis=1) + (sw[:, None] * hinge).sum(axis=0)


@dataclass(eq=False)
class LinearSVMModel(ClassifierModel):
    W: np.ndarray
    b: np.ndarray
    seed: int = 0
    dimension: int = 0

    variant = "svm"

    def class_scores(self, X) -> np.ndarray:
        return np.asarray(X @ self.W.T) + self.b

    def params_dict(self) -> dict:
        return {"W": self.W.tolist(), "b": self.b.tolist()}

    @classmethod
    def from_params(cls, params, seed, dimension):
        W = np.asarray(params["W"], dtype=np.float64).reshape(N_CLASSES, dimension)
        b = np.asarray(params["b"], dtype=np.float64).reshape(N_CLASSES)
        return cls(W, b, seed, dimension)


def fit_linear_svm(data: Dataset, hp: SVMParams = SVMParams(), seed: int = 0) -> LinearSVMModel:
    """Three one-vs-rest hinge-loss SVMs, regularization lam = 1 / (C * n).

    Step size decays as lr / (1 + lr * lam * t).
    """
    validate_training_data(data)
    rng = derive_rng(seed, "svm")
    T = 2.0 * _onehot(data.y) - 1.0
    sw_all = class_weights(data.y, hp.class_weight)[data.y]
    lam = 1.0 / (hp.c * data.n)
    W = np.zeros((N_CLASSES, data.dimension))
    b = np.zeros(N_CLASSES)
    t = 0
    for _ in range(hp.epochs):
        order = rng.permutation(data.n)
        for lo in range(0, data.n, hp.batch):
            idx = order[lo:lo + hp.batch]
            Xb, Tb = data.X[idx], T[idx]
            sw = sw_all[idx] / sw_all[idx].sum()
            margins = Tb * (np.asarray(Xb @ W.T) + b)
            active = (margins < 1.0) * Tb * sw[:, None]
            eta = hp.learning_rate / (1.0 + hp.learning_rate * lam * t)
            W -= eta * (lam * W - np.asarray((Xb.T @ active).T))
            b += eta * active.sum(axis=0)
            t += 1
        if not np.all(np.isfinite(W)):
            raise TrainingError(f"SVM weights became non-finite (lr={hp.learning_rate}, C={hp.c})")
    return LinearSVMModel(W, b, seed, data.dimension)
