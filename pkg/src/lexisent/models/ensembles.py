"""Random forest (bagged Gini trees, majority vote) and one-vs-rest gradient-boosted trees."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logsumexp

from lexisent.labels import N_CLASSES
from lexisent.models.base import ClassifierModel, Dataset, TrainingError, class_weights, validate_training_data
from lexisent.models.trees import CLASSIFY, REGRESS, UNLIMITED_DEPTH, Tree, TreeData
from lexisent.seeding import derive_int, derive_rng


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: int | None = None  # None grows until leaves are pure or hit min_leaf
    features_per_split: int | None = None  # None -> ceil(sqrt(V))
    min_leaf: int = 1
    bootstrap: bool = True
    class_weight: str | None = None


@dataclass(eq=False)
class ForestModel(ClassifierModel):
    trees: list[Tree]
    seed: int = 0
    dimension: int = 0

    variant = "rf"

    def tree_votes(self, X) -> np.ndarray:
        """(n_trees, n) array of each tree's label; a tree's own ties go to the lower label."""
        return np.stack([np.argmax(t.predict_value(X), axis=1) for t in self.trees])

    def class_scores(self, X) -> np.ndarray:
        votes = self.tree_votes(X)
        counts = np.stack([(votes == k).sum(axis=0) for k in range(N_CLASSES)], axis=1)
        return counts / float(len(self.trees))

    def params_dict(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_params(cls, params, seed, dimension):
        return cls([Tree.from_dict(d, dimension) for d in params["trees"]], seed, dimension)


def fit_random_forest(data: Dataset, hp: ForestParams = ForestParams(), seed: int = 0, threads: int = 1) -> ForestModel:
    """Each tree gets its own bootstrap and split RNG derived from (seed, tree index),
    so the model does not depend on how trees are scheduled across threads."""
    validate_training_data(data)
    td = TreeData(data.X)
    cw = class_weights(data.y, hp.class_weight)
    mtry = hp.features_per_split or math.ceil(math.sqrt(data.dimension))
    depth = hp.max_depth if hp.max_depth is not None else UNLIMITED_DEPTH
    dummy_reg = np.zeros(data.n)

    def grow(i: int) -> Tree:
        if hp.bootstrap:
            draws = derive_rng(seed, "forest-bootstrap", i).integers(0, data.n, size=data.n)
            counts = np.bincount(draws, minlength=data.n)
        else:
            counts = np.ones(data.n, dtype=np.int64)
        return td.grow(CLASSIFY, counts, counts * cw[data.y], data.y, dummy_reg,
                       depth, hp.min_leaf, mtry, derive_int(seed, "forest-tree", i))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(grow, range(hp.n_trees)))
    else:
        trees = [grow(i) for i in range(hp.n_trees)]
    return ForestModel(trees, seed, data.dimension)


@dataclass(frozen=True)
class GBTParams:
    n_rounds: int = 100
    depth: int = 4
    shrinkage: float = 0.1
    min_leaf: int = 1
    class_weight: str | None = None


@dataclass(eq=False)
class GBTModel(ClassifierModel):
    base: np.ndarray
    rounds: list[list[Tree]]  # rounds[m][k]: regression tree for class k at round m
    shrinkage: float
    seed: int = 0
    dimension: int = 0

    variant = "gbt"
    probabilistic = True

    def margins(self, X, n_rounds: int | None = None) -> np.ndarray:
        rounds = self.rounds if n_rounds is None else self.rounds[:n_rounds]
        F = np.tile(self.base, (X.shape[0], 1))
        for trees in rounds:
            for k, tree in enumerate(trees):
                F[:, k] += self.shrinkage * tree.predict_value(X)[:, 0]
        return F

    def class_scores(self, X) -> np.ndarray:
        F = self.margins(X)
        return np.exp(F - logsumexp(F, axis=1, keepdims=True))

    def params_dict(self) -> dict:
        return {
            "base": self.base.tolist(),
            "shrinkage": self.shrinkage,
            "rounds": [[t.to_dict() for t in trees] for trees in self.rounds],
        }

    @classmethod
    def from_params(cls, params, seed, dimension):
        base = np.asarray(params["base"], dtype=np.float64).reshape(N_CLASSES)
        rounds = [[Tree.from_dict(d, dimension) for d in trees] for trees in params["rounds"]]
        if any(len(trees) != N_CLASSES for trees in rounds):
            raise ValueError("each boosting round needs one tree per class")
        return cls(base, rounds, float(params["shrinkage"]), seed, dimension)


def fit_gbt(data: Dataset, hp: GBTParams = GBTParams(), seed: int = 0) -> GBTModel:
    """Per round and class, fit a depth-limited regression tree to the logistic-loss
    negative gradient y_k - sigmoid(F_k) and add it with shrinkage."""
    validate_training_data(data)
    td = TreeData(data.X)
    sw = class_weights(data.y, hp.class_weight)[data.y]
    ones = np.ones(data.n, dtype=np.int64)
    Y = np.zeros((data.n, N_CLASSES))
    Y[np.arange(data.n), data.y] = 1.0
    prior = (Y.sum(axis=0) + 0.5) / (data.n + 1.0)
    base = np.log(prior / (1.0 - prior))
    F = np.tile(base, (data.n, 1))
    rounds = []
    for m in range(hp.n_rounds):
        trees = []
        for k in range(N_CLASSES):
            residual = Y[:, k] - expit(F[:, k])
            tree = td.grow(REGRESS, ones, sw, data.y, residual, hp.depth, hp.min_leaf, 0, derive_int(seed, "gbt", m, k))
            F[:, k] += hp.shrinkage * tree.predict_value(data.X)[:, 0]
            trees.append(tree)
        if not np.all(np.isfinite(F)):
            raise TrainingError(f"boosting margins became non-finite at round {m}")
        rounds.append(trees)
    return GBTModel(base, rounds, hp.shrinkage, seed, data.dimension)
