"""TF-IDF featurization and Jaccard-bounded, lexicon-ranked token truncation."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from lexisent.lexicon import PATTERN_NEGATION, VALENCE_NEGATION, EntryKind, Lexicon
from lexisent.seeding import derive_rng

THRESHOLD_RANGE = (0.6, 0.8)


def _tokens(doc) -> Sequence[str]:
    return doc.tokens if hasattr(doc, "tokens") else doc


@dataclass(frozen=True)
class Vocabulary:
    token_to_index: dict[str, int]
    document_frequency: np.ndarray
    n_documents: int

    def __len__(self) -> int:
        return len(self.token_to_index)

    @property
    def tokens(self) -> list[str]:
        return list(self.token_to_index)

    def idf(self) -> np.ndarray:
        """Smoothed idf: ln((1 + N) / (1 + df)) + 1."""
        return np.log((1.0 + self.n_documents) / (1.0 + self.document_frequency)) + 1.0

    def write_tsv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# n_documents={self.n_documents}\n")
            fh.write("token\tindex\tdf\n")
            for token, idx in self.token_to_index.items():
                fh.write(f"{token}\t{idx}\t{int(self.document_frequency[idx])}\n")

    @classmethod
    def read_tsv(cls, path: str | Path) -> "Vocabulary":
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline().strip()
            if not first.startswith("# n_documents="):
                raise ValueError(f"{path}: missing '# n_documents=' header")
            n_docs = int(first.split("=", 1)[1])
            fh.readline()
            mapping, dfs = {}, []
            for line in fh:
                token, idx, df = line.rstrip("\n").split("\t")
                if int(idx) != len(mapping):
                    raise ValueError(f"{path}: indices must be dense and in order")
                mapping[token] = int(idx)
                dfs.append(int(df))
        return cls(mapping, np.asarray(dfs, dtype=np.int64), n_docs)


def build_vocabulary(docs: Iterable, min_df: int = 1) -> Vocabulary:
    """Tokens with document frequency >= ``min_df``, indexed in first-occurrence order."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: Counter[str] = Counter()
    order: dict[str, None] = {}
    n_docs = 0
    for doc in docs:
        n_docs += 1
        seen = set(_tokens(doc))
        df.update(seen)
        for token in _tokens(doc):
            if token not in order:
                order[token] = None
    kept = [t for t in order if df[t] >= min_df]
    return Vocabulary(
        {t: i for i, t in enumerate(kept)},
        np.asarray([df[t] for t in kept], dtype=np.int64),
        n_docs,
    )


@dataclass(frozen=True, eq=False)
class SparseVector:
    indices: np.ndarray
    weights: np.ndarray
    dimension: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "weights", w)
        if idx.shape != w.shape or idx.ndim != 1:
            raise ValueError("indices and weights must be 1-d and equally long")
        if idx.size:
            if np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= self.dimension:
                raise ValueError("indices must be strictly increasing and inside the dimension")
            if not np.all(np.isfinite(w)) or np.any(w == 0):
                raise ValueError("weights must be finite and nonzero")

    @property
    def pairs(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.weights.tolist()))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        out[self.indices] = self.weights
        return out

    @classmethod
    def from_dense(cls, values) -> "SparseVector":
        values = np.asarray(values, dtype=np.float64)
        nz = np.flatnonzero(values)
        return cls(nz, values[nz], values.shape[0])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseVector)
            and self.dimension == other.dimension
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
        )


def tfidf_vectorize(doc, vocab: Vocabulary, idf: np.ndarray | None = None) -> SparseVector:
    """Raw-count tf times smoothed idf, L2-normalized. Out-of-vocabulary tokens are ignored."""
    if idf is None:
        idf = vocab.idf()
    counts = Counter(vocab.token_to_index[t] for t in _tokens(doc) if t in vocab.token_to_index)
    if not counts:
        return SparseVector(np.empty(0, np.int64), np.empty(0), len(vocab))
    idx = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
    w = np.array([counts[i] for i in idx.tolist()], dtype=np.float64) * idf[idx]
    return SparseVector(idx, w / math.sqrt(float(np.dot(w, w))), len(vocab))


def vectors_to_csr(vectors: Sequence[SparseVector], dimension: int | None = None) -> sp.csr_matrix:
    if dimension is None:
        dimension = vectors[0].dimension if vectors else 0
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        if v.dimension != dimension:
            raise ValueError("all vectors must share one dimension")
        indptr[i + 1] = indptr[i] + v.indices.size
    indices = np.concatenate([v.indices for v in vectors]) if vectors else np.empty(0, np.int64)
    data = np.concatenate([v.weights for v in vectors]) if vectors else np.empty(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), dimension))


def csr_row(matrix: sp.csr_matrix, i: int) -> SparseVector:
    lo, hi = matrix.indptr[i], matrix.indptr[i + 1]
    return SparseVector(matrix.indices[lo:hi].astype(np.int64), matrix.data[lo:hi], matrix.shape[1])


def tfidf_matrix(docs: Sequence, vocab: Vocabulary) -> sp.csr_matrix:
    """Vectorize many documents at once; row ``i`` equals ``tfidf_vectorize(docs[i], vocab)``."""
    idf = vocab.idf()
    return vectors_to_csr([tfidf_vectorize(d, vocab, idf) for d in docs], len(vocab))


def write_vectors(path: str | Path, vectors: Iterable[SparseVector], dimension: int) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"dim={dimension}\n")
        for v in vectors:
            fh.write(" ".join(f"{i}:{w!r}" for i, w in v.pairs) + "\n")


def read_vectors(path: str | Path) -> list[SparseVector]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("dim="):
            raise ValueError(f"{path}: missing 'dim=' header")
        dim = int(header[4:])
        out = []
        for line in fh:
            pairs = [p.split(":") for p in line.split()]
            out.append(SparseVector([int(i) for i, _ in pairs], [float(w) for _, w in pairs], dim))
    return out


# -- truncation ---------------------------------------------------------------------


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


class WeightSource(enum.Enum):
    ABS_VALENCE = "valence"
    ABS_POLARITY = "polarity"


@dataclass(frozen=True)
class TruncationPolicy:
    threshold: float
    seed: int = 0
    weight_source: WeightSource = WeightSource.ABS_VALENCE

    def __post_init__(self):
        lo, hi = THRESHOLD_RANGE
        if not lo <= self.threshold <= hi:
            raise ValueError(f"threshold {self.threshold} outside [{lo}, {hi}]")

    @classmethod
    def draw(cls, seed: int, weight_source: WeightSource = WeightSource.ABS_VALENCE) -> "TruncationPolicy":
        """Draw the run's single threshold uniformly from [0.6, 0.8]."""
        lo, hi = THRESHOLD_RANGE
        threshold = float(derive_rng(seed, "truncation").uniform(lo, hi))
        return cls(threshold, seed, weight_source)


def token_weight(token: str, lex: Lexicon, source: WeightSource = WeightSource.ABS_VALENCE) -> float:
    """Impact of a token on the score; unknown tokens weigh 0.

    Modifiers weigh what they do to a neighbour: |booster delta|, or the
    magnitude of the negation factor.
    """
    entry = lex.get(token)
    if entry is None:
        return 0.0
    if entry.kind is EntryKind.BOOSTER:
        return abs(entry.delta)
    if entry.kind is EntryKind.NEGATOR:
        return abs(VALENCE_NEGATION if source is WeightSource.ABS_VALENCE else PATTERN_NEGATION)
    return abs(entry.valence if source is WeightSource.ABS_VALENCE else entry.polarity)


def rank_and_truncate(doc, lex: Lexicon, policy: TruncationPolicy):
    """Drop the lowest-impact distinct tokens while Jaccard(original, kept) stays >= threshold.

    Ties in weight break lexicographically. Surviving tokens keep their order.
    Returns an object of the same type as ``doc`` (or a tuple for bare sequences).
    """
    tokens = tuple(_tokens(doc))
    distinct = set(tokens)
    n = len(distinct)
    ranked = sorted(distinct, key=lambda t: (token_weight(t, lex, policy.weight_source), t))
    dropped: set[str] = set()
    for token in ranked:
        if (n - len(dropped) - 1) / n >= policy.threshold:
            dropped.add(token)
        else:
            break
    kept = tuple(t for t in tokens if t not in dropped)
    if hasattr(doc, "tokens"):
        return replace(doc, tokens=kept)
    return kept
