from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from lexisent.labels import N_CLASSES
from lexisent.models.base import ClassifierModel, Dataset, validate_training_data


@dataclass(frozen=True)
class NBParams:
    laplace_alpha: float = 1.0

    def __post_init__(self):
        if self.laplace_alpha <= 0:
            raise ValueError("laplace_alpha must be > 0")


@dataclass(eq=False)
class NaiveBayesModel(ClassifierModel):
    class_log_prior: np.ndarray
    feature_log_prob: np.ndarray
    seed: int = 0
    dimension: int = 0

    variant = "nb"
    probabilistic = True

    def joint_log_likelihood(self, X) -> np.ndarray:
        return np.asarray(X @ self.feature_log_prob.T) + self.class_log_prior

    def class_scores(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))

    def params_dict(self) -> dict:
        return {
            "class_log_prior": self.class_log_prior.tolist(),
            "feature_log_prob": self.feature_log_prob.tolist(),
        }

    @classmethod
    def from_params(cls, params, seed, dimension):
        prior = np.asarray(params["class_log_prior"], dtype=np.float64)
        flp = np.asarray(params["feature_log_prob"], dtype=np.float64).reshape(N_CLASSES, dimension)
        if prior.shape != (N_CLASSES,):
            raise ValueError("class_log_prior must have three entries")
        return cls(prior, flp, seed, dimension)


def fit_naive_bayes(data: Dataset, hp: NBParams = NBParams(), seed: int = 0) -> NaiveBayesModel:
    """Multinomial naive Bayes with Laplace smoothing on both feature counts and class priors.

    Feature values act as (possibly fractional) counts, so TF-IDF rows work directly.
    """
    validate_training_data(data)
    if data.X.nnz and data.X.data.min() < 0:
        raise ValueError("naive Bayes needs non-negative feature values")
    a = hp.laplace_alpha
    V = data.dimension
    onehot = np.zeros((data.n, N_CLASSES))
    onehot[np.arange(data.n), data.y] = 1.0
    feature_counts = np.asarray((data.X.T @ onehot).T)  # (3, V)
    smoothed = feature_counts + a
    feature_log_prob = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    class_counts = onehot.sum(axis=0)
    class_log_prior = np.log(class_counts + a) - np.log(data.n + N_CLASSES * a)
    return NaiveBayesModel(class_log_prior, feature_log_prob, seed, V)
