"""Splits, stratified k-fold, confusion matrices, metrics, and the models x splits experiment grid."""

from __future__ import annotations

import csv
import io
import logging
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from lexisent import models as M
from lexisent.labels import LABELS, N_CLASSES, SentimentLabel
from lexisent.models import ClassifierModel, Dataset
from lexisent.seeding import derive_int, derive_rng
from lexisent.tables import format_table, pct

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitRatio:
    train_fraction: float
    name: str = ""

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be strictly between 0 and 1")
        if not self.name:
            tr = round(self.train_fraction * 100)
            object.__setattr__(self, "name", f"{tr}-{100 - tr}")

    @classmethod
    def parse(cls, text: str) -> "SplitRatio":
        if text in SPLITS:
            return SPLITS[text]
        train, _, test = text.partition("-")
        try:
            a, b = float(train), float(test)
        except ValueError:
            raise ValueError(f"cannot parse split {text!r}; use e.g. 70-30") from None
        return cls(a / (a + b), text)


SPLITS = {name: SplitRatio(frac, name) for name, frac in (("60-40", 0.6), ("70-30", 0.7), ("80-20", 0.8))}


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split_indices(y: np.ndarray, ratio: SplitRatio, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Stratified, seeded train/test index split with |train| = round(n * fraction).

    Per-class train quotas are floor(n_c * f), and the remaining slots go to
    the classes with the largest fractional parts (ties: canonical order).
    """
    y = np.asarray(y)
    n = y.shape[0]
    if n < 2:
        raise ValueError("need at least two examples to split")
    rng = derive_rng(seed, "split", ratio.name)
    target = _round_half_up(n * ratio.train_fraction)
    groups = []
    for c in range(N_CLASSES):
        idx = np.flatnonzero(y == c)
        if idx.size == 1:
            log.warning("class %s has a single example; it cannot be stratified", SentimentLabel(c).slug)
        groups.append(rng.permutation(idx))
    quotas = [g.size * ratio.train_fraction for g in groups]
    take = [int(math.floor(q)) for q in quotas]
    spare = target - sum(take)
    order = sorted(range(N_CLASSES), key=lambda c: (-(quotas[c] - take[c]), c))
    for c in order:
        if spare == 0:
            break
        if take[c] < groups[c].size:
            take[c] += 1
            spare -= 1
    train = np.sort(np.concatenate([g[:t] for g, t in zip(groups, take)]))
    test = np.sort(np.concatenate([g[t:] for g, t in zip(groups, take)]))
    return train.astype(np.int64), test.astype(np.int64)


def split(data: Dataset, ratio: SplitRatio, seed: int) -> tuple[Dataset, Dataset]:
    train, test = split_indices(data.y, ratio, seed)
    return data.subset(train), data.subset(test)


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    fold_of: np.ndarray
    k: int

    def fold(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """(train indices, held-out indices) for fold ``j``."""
        held = self.fold_of == j
        return np.flatnonzero(~held), np.flatnonzero(held)

    def sizes(self) -> list[int]:
        return np.bincount(self.fold_of, minlength=self.k).tolist()


def kfold(y: np.ndarray, k: int, seed: int) -> FoldAssignment:
    """Stratified folds: shuffle each class, lay classes end to end, deal positions round-robin."""
    y = np.asarray(y)
    n = y.shape[0]
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of examples ({n})")
    rng = derive_rng(seed, "kfold", k)
    dealt = np.concatenate([rng.permutation(np.flatnonzero(y == c)) for c in range(N_CLASSES)])
    fold_of = np.empty(n, dtype=np.int64)
    fold_of[dealt] = np.arange(n) % k
    return FoldAssignment(fold_of, k)


# -- confusion and metrics ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Rows are actual labels, columns predicted, both in canonical order."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.shape != (N_CLASSES, N_CLASSES) or np.any(c < 0):
            raise ValueError("confusion counts must be a non-negative 3x3 array")
        object.__setattr__(self, "counts", c)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def rows(self) -> list[list[int]]:
        return self.counts.tolist()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["actual\\predicted", *(lab.slug for lab in LABELS)])
            for lab, row in zip(LABELS, self.rows()):
                writer.writerow([lab.slug, *row])

    def table(self) -> str:
        return format_table(
            ["Actual/Predicted", *(lab.name.title() for lab in LABELS)],
            [[lab.name.title(), *row] for lab, row in zip(LABELS, self.rows())],
        )


def confusion(truth: Sequence, pred: Sequence) -> ConfusionMatrix:
    t = np.asarray([int(v) for v in truth], dtype=np.int64)
    p = np.asarray([int(v) for v in pred], dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError(f"truth and prediction lengths differ ({t.size} vs {p.size})")
    if t.size == 0:
        raise ValueError("cannot build a confusion matrix from no examples")
    counts = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    return ConfusionMatrix(counts)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    per_class: Mapping[SentimentLabel, ClassMetrics]
    macro_f1: float


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy and per-class precision/recall/F1; an empty denominator gives 0."""
    c = cm.counts
    total = c.sum()
    if total == 0:
        raise ValueError("confusion matrix is empty")
    per_class = {}
    for lab in LABELS:
        i = int(lab)
        p = _ratio(c[i, i], c[:, i].sum())
        r = _ratio(c[i, i], c[i, :].sum())
        per_class[lab] = ClassMetrics(p, r, _ratio(2 * p * r, p + r))
    macro = sum(m.f1 for m in per_class.values()) / N_CLASSES
    return MetricsReport(float(np.trace(c)) / float(total), per_class, macro)


def micro_f1(cm: ConfusionMatrix) -> float:
    c = cm.counts
    tp = float(np.trace(c))
    fp = float(c.sum() - tp)  # every off-diagonal cell is one FP and one FN
    fn = fp
    p = _ratio(tp, tp + fp)
    r = _ratio(tp, tp + fn)
    return _ratio(2 * p * r, p + r)


# -- experiment grid ----------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    models: Sequence[str] = M.MODEL_NAMES
    splits: Sequence[SplitRatio] = tuple(SPLITS.values())
    k: int = 5
    seed: int = 0
    params: Mapping[str, object] = field(default_factory=dict)
    threads: int = 1


@dataclass
class CellResult:
    model: str
    split: str
    confusion: ConfusionMatrix | None = None
    metrics: MetricsReport | None = None
    cv_scores: list[float] = field(default_factory=list)
    fitted: ClassifierModel | None = None
    error: str | None = None

    @property
    def cv_mean(self) -> float | None:
        return statistics.fmean(self.cv_scores) if self.cv_scores else None

    @property
    def cv_std(self) -> float | None:
        return statistics.stdev(self.cv_scores) if len(self.cv_scores) > 1 else None


def _accuracy(model: ClassifierModel, data: Dataset) -> float:
    return float(np.mean(model.predict_labels(data.X) == data.y))


def run_cell(data: Dataset, name: str, ratio: SplitRatio, cfg: ExperimentConfig, threads: int = 1) -> CellResult:
    hp = cfg.params.get(name)
    cell = CellResult(name, ratio.name)
    try:
        train, test = split(data, ratio, cfg.seed)
        model = M.fit(name, train, hp, seed=derive_int(cfg.seed, "model", name, ratio.name), threads=threads)
        cell.fitted = model
        cell.confusion = confusion(test.y, model.predict_labels(test.X))
        cell.metrics = metrics(cell.confusion)
        if cfg.k >= 2:
            folds = kfold(train.y, cfg.k, derive_int(cfg.seed, "cv", ratio.name))
            for j in range(cfg.k):
                tr_idx, ho_idx = folds.fold(j)
                fold_model = M.fit(name, train.subset(tr_idx), hp,
                                   seed=derive_int(cfg.seed, "cv-model", name, ratio.name, j), threads=threads)
                cell.cv_scores.append(_accuracy(fold_model, train.subset(ho_idx)))
    except (M.TrainingError, ValueError, FloatingPointError) as exc:
        log.error("cell %s/%s failed: %s", name, ratio.name, exc)
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


@dataclass
class ExperimentReport:
    cells: list[CellResult]
    models: list[str]
    splits: list[str]

    def cell(self, model: str, split_name: str) -> CellResult:
        for c in self.cells:
            if c.model == model and c.split == split_name:
                return c
        raise KeyError((model, split_name))

    def accuracy(self, model: str, split_name: str) -> float | None:
        c = self.cell(model, split_name)
        return None if c.metrics is None else c.metrics.accuracy

    def csv_rows(self) -> list[list[str]]:
        rows = []
        for c in self.cells:
            if c.error is not None:
                rows.append([c.model, c.split, "error", c.error])
                continue
            m = c.metrics
            values = [("accuracy", m.accuracy)]
            if c.cv_scores:
                values.append(("cv_mean", c.cv_mean))
                if c.cv_std is not None:
                    values.append(("cv_std", c.cv_std))
            for lab in LABELS:
                cm = m.per_class[lab]
                values += [(f"precision_{lab.slug}", cm.precision), (f"recall_{lab.slug}", cm.recall),
                           (f"f1_{lab.slug}", cm.f1)]
            values.append(("macro_f1", m.macro_f1))
            rows += [[c.model, c.split, name, f"{v:.6f}"] for name, v in values]
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["model", "split", "metric", "value"])
        writer.writerows(self.csv_rows())
        return buf.getvalue()

    def accuracy_table(self) -> str:
        """Models x splits test accuracy, with k-fold CV mean +/- std underneath each value."""
        rows = []
        for name in self.models:
            row = [M.DISPLAY_NAMES.get(name, name)]
            for s in self.splits:
                c = self.cell(name, s)
                if c.error is not None:
                    row.append("failed")
                    continue
                text = pct(c.metrics.accuracy)
                if c.cv_scores:
                    std = c.cv_std if c.cv_std is not None else 0.0
                    text += f" (cv {pct(c.cv_mean)}±{100 * std:.1f})"
                row.append(text)
            rows.append(row)
        return format_table(["Model", *self.splits], rows)

    def per_class_table(self, split_name: str | None = None) -> str:
        """Precision/recall/F1 per class for one split (positive, neutral, negative, left to right)."""
        if split_name is None:
            split_name = "70-30" if "70-30" in self.splits else self.splits[0]
        order = (SentimentLabel.POSITIVE, SentimentLabel.NEUTRAL, SentimentLabel.NEGATIVE)
        head = ["Model"] + [f"{lab.name[:3].title()}-{m}" for lab in order for m in ("P", "R", "F")]
        rows = []
        for name in self.models:
            c = self.cell(name, split_name)
            if c.error is not None:
                rows.append([M.DISPLAY_NAMES.get(name, name), *(["-"] * 9)])
                continue
            vals = []
            for lab in order:
                cm = c.metrics.per_class[lab]
                vals += [pct(cm.precision, 0), pct(cm.recall, 0), pct(cm.f1, 0)]
            rows.append([M.DISPLAY_NAMES.get(name, name), *vals])
        return format_table(head, rows)


def run_experiment(data: Dataset, cfg: ExperimentConfig) -> ExperimentReport:
    """Train and score every (model, split) cell; cells are independent and may run concurrently.

    Output order follows ``cfg.models`` x ``cfg.splits`` regardless of scheduling.
    """
    if not cfg.models or not cfg.splits:
        raise ValueError("need at least one model and one split")
    grid = [(name, ratio) for name in cfg.models for ratio in cfg.splits]
    if cfg.threads > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            cells = list(pool.map(lambda nr: run_cell(data, nr[0], nr[1], cfg), grid))
    else:
        cells = [run_cell(data, name, ratio, cfg, threads=cfg.threads) for name, ratio in grid]
    return ExperimentReport(cells, list(cfg.models), [r.name for r in cfg.splits])
