"""Corpus ingestion (Sentiment140 CSV, newline-delimited JSON dumps) and word-frequency tables."""

from __future__ import annotations

import csv
import enum
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from lexisent.labels import LABELS, SentimentLabel, label_slug

log = logging.getLogger(__name__)

SENTIMENT140_CODES = {"0": SentimentLabel.NEGATIVE, "2": SentimentLabel.NEUTRAL, "4": SentimentLabel.POSITIVE}
SENTIMENT140_FIELDS = 6


@dataclass(frozen=True)
class TweetRecord:
    id: str
    raw_text: str
    original_label: SentimentLabel | None = None
    user: str | None = None
    timestamp: str | None = None


@dataclass(frozen=True)
class LabeledDoc:
    """A preprocessed document together with its (current) label."""

    tokens: tuple[str, ...]
    label: SentimentLabel | None
    source_id: str = ""
    original_label: SentimentLabel | None = None
    score: float | None = None

    @property
    def dropped_all(self) -> bool:
        return not self.tokens


@dataclass
class CorpusStats:
    total_records: int = 0
    per_class_counts: dict[SentimentLabel, int] = field(default_factory=lambda: {lab: 0 for lab in LABELS})
    unknown: int = 0
    malformed_rows: int = 0

    def count(self, label: SentimentLabel | None) -> None:
        self.total_records += 1
        if label is None:
            self.unknown += 1
        else:
            self.per_class_counts[label] += 1

    def summary(self) -> str:
        parts = [f"records={self.total_records}"]
        parts += [f"{lab.slug}={self.per_class_counts[lab]}" for lab in LABELS]
        parts += [f"unknown={self.unknown}", f"malformed={self.malformed_rows}"]
        return " ".join(parts)


def load_sentiment140(
    path: str | Path, limit: int | None = None, encoding: str = "latin-1"
) -> tuple[Iterator[TweetRecord], CorpusStats]:
    """Stream records from a 6-field Sentiment140 CSV.

    The file is opened immediately, so a missing path raises here rather than
    on first iteration. ``stats`` fills in as the iterator is consumed.
    """
    fh = open(path, "r", encoding=encoding, newline="")
    stats = CorpusStats()

    def records() -> Iterator[TweetRecord]:
        with fh:
            for row in csv.reader(fh):
                if limit is not None and stats.total_records >= limit:
                    return
                if len(row) != SENTIMENT140_FIELDS or row[0].strip() not in SENTIMENT140_CODES:
                    stats.malformed_rows += 1
                    continue
                polarity, tweet_id, date, _query, user, text = row
                label = SENTIMENT140_CODES[polarity.strip()]
                stats.count(label)
                yield TweetRecord(id=tweet_id, raw_text=text, original_label=label, user=user, timestamp=date)

    return records(), stats


def load_tweet_dump(path: str | Path) -> tuple[Iterator[TweetRecord], CorpusStats]:
    """Stream records from a newline-delimited JSON dump (one object per line).

    Objects need a ``text`` field. Optional: ``id``, ``user``, ``timestamp``
    and ``label`` (a gold label name, used for confusion matrices).
    """
    fh = open(path, "r", encoding="utf-8")
    stats = CorpusStats()

    def records() -> Iterator[TweetRecord]:
        with fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    stats.malformed_rows += 1
                    continue
                if not isinstance(obj, dict) or not isinstance(obj.get("text"), str):
                    stats.malformed_rows += 1
                    continue
                try:
                    label = SentimentLabel.parse(str(obj.get("label", "")))
                except ValueError:
                    stats.malformed_rows += 1
                    continue
                stats.count(label)
                yield TweetRecord(
                    id=str(obj.get("id", lineno)),
                    raw_text=obj["text"],
                    original_label=label,
                    user=obj.get("user"),
                    timestamp=obj.get("timestamp"),
                )

    return records(), stats


def write_sentiment140(path: str | Path, records: Iterable[TweetRecord]) -> int:
    codes = {lab: code for code, lab in SENTIMENT140_CODES.items()}
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_ALL, lineterminator="\n")
        for rec in records:
            writer.writerow([codes[rec.original_label], rec.id, rec.timestamp or "", "NO_QUERY", rec.user or "", rec.raw_text])
            n += 1
    return n


def write_tweet_dump(path: str | Path, records: Iterable[TweetRecord]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            obj = {"id": rec.id, "text": rec.raw_text}
            if rec.user is not None:
                obj["user"] = rec.user
            if rec.timestamp is not None:
                obj["timestamp"] = rec.timestamp
            if rec.original_label is not None:
                obj["label"] = rec.original_label.slug
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
            n += 1
    return n


# -- processed / labeled corpus files ------------------------------------------

CORPUS_COLUMNS = ("id", "original_label", "label", "score", "tokens")


def write_corpus(path: str | Path, docs: Iterable[LabeledDoc]) -> int:
    """Write a labeled corpus as TSV; tokens are space-joined."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(CORPUS_COLUMNS)
        for doc in docs:
            score = "" if doc.score is None else repr(float(doc.score))
            writer.writerow([doc.source_id, label_slug(doc.original_label), label_slug(doc.label), score, " ".join(doc.tokens)])
            n += 1
    return n


def read_corpus(path: str | Path, use_original: bool = False) -> list[LabeledDoc]:
    docs = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        missing = set(CORPUS_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: corpus file lacks columns {sorted(missing)}")
        for row in reader:
            original = SentimentLabel.parse(row["original_label"])
            label = original if use_original else SentimentLabel.parse(row["label"])
            docs.append(LabeledDoc(
                tokens=tuple(row["tokens"].split()),
                label=label,
                source_id=row["id"],
                original_label=original,
                score=float(row["score"]) if row["score"] else None,
            ))
    return docs


# -- word frequency ---------------------------------------------------------------


class FrequencyMode(enum.Enum):
    COMMON = "common"
    UNIQUE = "unique"


@dataclass(frozen=True)
class WordFrequencyTable:
    rows: tuple[tuple[str, int], ...]
    label: SentimentLabel
    mode: FrequencyMode

    def __post_init__(self):
        keys = [(-c, t) for t, c in self.rows]
        if keys != sorted(keys):
            raise ValueError("rows must be sorted by count descending, then token")
        if len({t for t, _ in self.rows}) != len(self.rows) or any(c < 0 for _, c in self.rows):
            raise ValueError("rows must have unique tokens and non-negative counts")

    def head(self, k: int) -> "WordFrequencyTable":
        return WordFrequencyTable(self.rows[:k], self.label, self.mode)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["token", "count"])
            writer.writerows(self.rows)


def word_frequency(
    docs: Sequence[LabeledDoc], label: SentimentLabel, mode: FrequencyMode = FrequencyMode.COMMON
) -> WordFrequencyTable:
    """Token-occurrence counts over documents of ``label``.

    ``UNIQUE`` keeps only tokens that appear in no document of any other class.
    """
    counts: Counter[str] = Counter()
    elsewhere: set[str] = set()
    for doc in docs:
        if doc.label == label:
            counts.update(doc.tokens)
        elif mode is FrequencyMode.UNIQUE:
            elsewhere.update(doc.tokens)
    rows = sorted(((t, c) for t, c in counts.items() if t not in elsewhere), key=lambda tc: (-tc[1], tc[0]))
    return WordFrequencyTable(tuple(rows), label, mode)
