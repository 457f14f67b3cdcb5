"""End-to-end corpus preparation shared by the CLI, scripts and acceptance tests.

raw records -> preprocess -> (relabel) -> truncate -> vocabulary -> TF-IDF dataset
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

from lexisent.corpus import LabeledDoc, TweetRecord
from lexisent.features import TruncationPolicy, Vocabulary, WeightSource, build_vocabulary, rank_and_truncate, tfidf_matrix
from lexisent.lexicon import Lexicon, Method, ThresholdConfig, load_lexicon, relabel_corpus, RelabelReport
from lexisent.models import Dataset
from lexisent.textpipe import PipelineConfig, preprocess_text

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1, chunk: int = 2048) -> list[R]:
    """Order-preserving map over chunks; the result never depends on ``threads``."""
    if threads <= 1 or len(items) <= chunk:
        return [fn(x) for x in items]
    chunks = [items[i:i + chunk] for i in range(0, len(items), chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: [fn(x) for x in c], chunks))
    return [y for part in parts for y in part]


def pipeline_lexicon(path=None, config: PipelineConfig | None = None) -> Lexicon:
    """The lexicon re-keyed into the pipeline's reduced token space."""
    config = config or PipelineConfig.default()
    return load_lexicon(path).aligned(config.reduce_token)


def preprocess_records(records: Iterable[TweetRecord], config: PipelineConfig | None = None,
                       threads: int = 1) -> list[LabeledDoc]:
    config = config or PipelineConfig.default()
    records = list(records)
    tokens = parallel_map(lambda r: preprocess_text(r.raw_text, config), records, threads)
    return [LabeledDoc(t, r.original_label, r.id, original_label=r.original_label) for r, t in zip(records, tokens)]


def truncate_docs(docs: Sequence[LabeledDoc], lex: Lexicon, seed: int,
                  weight_source: WeightSource = WeightSource.ABS_VALENCE) -> tuple[list[LabeledDoc], TruncationPolicy]:
    policy = TruncationPolicy.draw(seed, weight_source)
    return [rank_and_truncate(d, lex, policy) for d in docs], policy


@dataclass
class Prepared:
    docs: list[LabeledDoc]
    dataset: Dataset
    vocab: Vocabulary
    relabel: RelabelReport | None
    policy: TruncationPolicy | None


def featurize(docs: Sequence[LabeledDoc], min_df: int = 1) -> tuple[Dataset, Vocabulary, list[LabeledDoc]]:
    """TF-IDF dataset over the labeled documents (unlabeled ones are skipped).

    Vocabulary and idf use no labels, so fitting them on the full corpus leaks
    nothing into later train/test splits.
    """
    kept = [d for d in docs if d.label is not None]
    if not kept:
        raise ValueError("no labeled documents to featurize")
    vocab = build_vocabulary(kept, min_df)
    return Dataset(tfidf_matrix(kept, vocab), [int(d.label) for d in kept]), vocab, kept


def prepare(records: Iterable[TweetRecord], *, lexicon_path=None, method: Method | None = Method.VALENCE,
            truncate: bool = True, seed: int = 0, thresholds: ThresholdConfig = ThresholdConfig(),
            min_df: int = 1, threads: int = 1, config: PipelineConfig | None = None) -> Prepared:
    """Preprocess, optionally relabel (``method=None`` keeps distant labels), truncate, featurize."""
    config = config or PipelineConfig.default()
    lex = pipeline_lexicon(lexicon_path, config)
    docs = preprocess_records(records, config, threads)
    report = None
    if method is not None:
        docs, report = relabel_corpus(docs, method, lex, thresholds)
    policy = None
    if truncate:
        source = WeightSource.ABS_VALENCE if method is not Method.PATTERN else WeightSource.ABS_POLARITY
        docs, policy = truncate_docs(docs, lex, seed, source)
    dataset, vocab, kept = featurize(docs, min_df)
    return Prepared(kept, dataset, vocab, report, policy)
