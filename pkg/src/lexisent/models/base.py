from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Sequence

import numpy as np
import scipy.sparse as sp

from lexisent.features import SparseVector, csr_row, vectors_to_csr
from lexisent.labels import N_CLASSES, SentimentLabel

MODEL_FORMAT_VERSION = "1"


class TrainingError(RuntimeError):
    pass


class DimensionError(ValueError):
    pass


@dataclass(eq=False)
class Dataset:
    """Feature matrix (one CSR row per document) with integer labels in canonical order."""

    X: sp.csr_matrix
    y: np.ndarray

    def __post_init__(self):
        self.X = sp.csr_matrix(self.X, dtype=np.float64)
        self.X.sort_indices()
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError("X and y disagree on the number of examples")
        if self.y.size and (self.y.min() < 0 or self.y.max() >= N_CLASSES):
            raise ValueError("labels must be 0..2")

    @classmethod
    def from_vectors(cls, vectors: Sequence[SparseVector], labels: Sequence[SentimentLabel]) -> "Dataset":
        return cls(vectors_to_csr(vectors), np.asarray([int(l) for l in labels], dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.y.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.X.shape[1])

    @property
    def labels(self) -> list[SentimentLabel]:
        return [SentimentLabel(int(v)) for v in self.y]

    @property
    def vectors(self) -> list[SparseVector]:
        return [csr_row(self.X, i) for i in range(self.n)]

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.X[idx], self.y[idx])


def validate_training_data(data: Dataset) -> None:
    if data.n < 1:
        raise ValueError("training data is empty")
    if data.dimension < 1:
        raise ValueError("training data has zero feature dimension")


def class_weights(y: np.ndarray, mode: str | None) -> np.ndarray:
    """Per-class loss multipliers; ``balanced`` gives n / (3 * n_c) for present classes."""
    if mode is None or mode == "none":
        return np.ones(N_CLASSES)
    if mode != "balanced":
        raise ValueError(f"unknown class weight mode {mode!r}")
    counts = np.bincount(y, minlength=N_CLASSES).astype(float)
    out = np.ones(N_CLASSES)
    present = counts > 0
    out[present] = y.shape[0] / (present.sum() * counts[present])
    return out


def argmax_label(scores: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the lowest canonical label on ties
    return np.argmax(scores, axis=-1)


@dataclass(frozen=True)
class Prediction:
    label: SentimentLabel
    class_scores: tuple[float, float, float]


class ClassifierModel:
    """Common surface for the five trained model variants."""

    variant: ClassVar[str]
    probabilistic: ClassVar[bool] = False

    seed: int
    dimension: int

    def class_scores(self, X: sp.csr_matrix) -> np.ndarray:
        raise NotImplementedError

    def _check(self, X) -> sp.csr_matrix:
        X = sp.csr_matrix(X, dtype=np.float64)
        if X.shape[1] != self.dimension:
            raise DimensionError(f"input dimension {X.shape[1]} != model dimension {self.dimension}")
        X.sort_indices()
        return X

    def predict_labels(self, X) -> np.ndarray:
        return argmax_label(self.class_scores(self._check(X)))

    def params_dict(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_params(cls, params: dict, seed: int, dimension: int) -> "ClassifierModel":
        raise NotImplementedError


def predict(model: ClassifierModel, vector: SparseVector) -> Prediction:
    if vector.dimension != model.dimension:
        raise DimensionError(f"vector dimension {vector.dimension} != model dimension {model.dimension}")
    scores = model.class_scores(vectors_to_csr([vector]))[0]
    label = SentimentLabel(int(argmax_label(scores)))
    return Prediction(label, tuple(float(s) for s in scores))
