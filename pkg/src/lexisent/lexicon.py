"""Lexicon loading, the two lexicon scorers, and three-way relabeling.

Two scorers share one lexicon file:

* the pattern scorer averages per-word polarity and subjectivity;
* the valence scorer sums per-word valence with booster and negation rules,
  then squashes the sum to a compound score in (-1, 1).
"""

from __future__ import annotations

import csv
import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from lexisent.corpus import LabeledDoc
from lexisent.labels import LABELS, SentimentLabel, label_slug

log = logging.getLogger(__name__)

NORMALIZATION_ALPHA = 15.0
VALENCE_NEGATION = -0.74
PATTERN_NEGATION = -0.5
VALENCE_NEGATION_SCOPE = 3
PATTERN_NEGATION_SCOPE = 1
BOOSTER_DELTA = 0.293


class LexiconError(ValueError):
    pass


class ScoreError(ValueError):
    """A scorer produced a non-finite value."""


class EntryKind(enum.Enum):
    SENTIMENT = "sentiment"
    BOOSTER = "booster"
    NEGATOR = "negator"


@dataclass(frozen=True)
class LexiconEntry:
    token: str
    polarity: float = 0.0
    subjectivity: float = 0.0
    valence: float = 0.0
    kind: EntryKind = EntryKind.SENTIMENT
    delta: float = 0.0

    def __post_init__(self):
        if not -1.0 <= self.polarity <= 1.0:
            raise LexiconError(f"{self.token}: polarity {self.polarity} outside [-1, 1]")
        if not 0.0 <= self.subjectivity <= 1.0:
            raise LexiconError(f"{self.token}: subjectivity {self.subjectivity} outside [0, 1]")
        if not -4.0 <= self.valence <= 4.0:
            raise LexiconError(f"{self.token}: valence {self.valence} outside [-4, 4]")

    @property
    def kind_field(self) -> str:
        if self.kind is EntryKind.BOOSTER:
            return f"booster:{self.delta:g}"
        return self.kind.value


@dataclass(frozen=True)
class Lexicon:
    entries: dict[str, LexiconEntry]
    name: str = "lexicon"
    version: str = "1"

    def get(self, token: str) -> LexiconEntry | None:
        return self.entries.get(token)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def aligned(self, reduce_token) -> "Lexicon":
        """Re-key entries through a token reducer (e.g. the pipeline's stemmer).

        When several words collapse onto one key, an entry whose surface form
        already equals the key wins; otherwise sentiment entries are averaged.
        Modifiers are kept only where no sentiment word claims the key.
        """
        groups: dict[str, list[LexiconEntry]] = {}
        for token in sorted(self.entries):
            groups.setdefault(reduce_token(token), []).append(self.entries[token])
        out = {}
        for key, group in groups.items():
            exact = [e for e in group if e.token == key]
            if exact:
                out[key] = exact[0]
                continue
            senti = [e for e in group if e.kind is EntryKind.SENTIMENT]
            if senti:
                n = len(senti)
                out[key] = LexiconEntry(
                    token=key,
                    polarity=sum(e.polarity for e in senti) / n,
                    subjectivity=sum(e.subjectivity for e in senti) / n,
                    valence=sum(e.valence for e in senti) / n,
                )
            else:
                out[key] = replace(group[0], token=key)
        return Lexicon(out, name=self.name, version=self.version)


def _parse_kind(text: str) -> tuple[EntryKind, float]:
    name, _, delta = text.strip().partition(":")
    kind = EntryKind(name.lower())
    if kind is EntryKind.BOOSTER:
        return kind, float(delta) if delta else BOOSTER_DELTA
    return kind, 0.0


def load_lexicon(path: str | Path | None = None, name: str | None = None) -> Lexicon:
    """Read a lexicon TSV: ``token polarity subjectivity valence kind[:delta]``.

    ``path=None`` loads the bundled lexicon. Bad rows are logged and skipped;
    a file with no valid rows is an error.
    """
    if path is None:
        text = resources.files("lexisent.data").joinpath("lexicon.tsv").read_text(encoding="utf-8")
        name = name or "bundled"
    else:
        text = Path(path).read_text(encoding="utf-8")
        name = name or Path(path).stem
    entries: dict[str, LexiconEntry] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        try:
            if len(parts) != 5:
                raise LexiconError(f"expected 5 tab-separated fields, got {len(parts)}")
            token = parts[0].strip().lower()
            kind, delta = _parse_kind(parts[4])
            entry = LexiconEntry(token, float(parts[1]), float(parts[2]), float(parts[3]), kind, delta)
        except ValueError as exc:
            log.warning("lexicon line %d rejected: %s", lineno, exc)
            continue
        if token in entries:
            log.warning("lexicon line %d: duplicate token %r, keeping the later row", lineno, token)
        entries[token] = entry
    if not entries:
        raise LexiconError(f"lexicon {name!r} has no valid rows")
    return Lexicon(entries, name=name)


def _tokens(doc) -> Sequence[str]:
    return doc.tokens if hasattr(doc, "tokens") else doc


# -- scorers ------------------------------------------------------------------------


@dataclass(frozen=True)
class PolaritySubjectivity:
    polarity: float
    subjectivity: float
    matched_count: int


@dataclass(frozen=True)
class ValenceScores:
    compound: float
    pos_frac: float
    neg_frac: float
    neu_frac: float


def score_pattern(doc, lex: Lexicon, drop_objective: bool = False) -> PolaritySubjectivity:
    """Mean polarity/subjectivity of matched sentiment words.

    A negator directly before a sentiment word scales its polarity by -0.5.
    With ``drop_objective`` words of zero subjectivity are ignored.
    """
    tokens = _tokens(doc)
    pol_sum = subj_sum = 0.0
    matched = 0
    for i, token in enumerate(tokens):
        entry = lex.get(token)
        if entry is None or entry.kind is not EntryKind.SENTIMENT:
            continue
        if drop_objective and entry.subjectivity == 0.0:
            continue
        polarity = entry.polarity
        window = tokens[max(0, i - PATTERN_NEGATION_SCOPE):i]
        if any(_is_negator(lex, t) for t in window):
            polarity *= PATTERN_NEGATION
        pol_sum += polarity
        subj_sum += entry.subjectivity
        matched += 1
    if matched == 0:
        return PolaritySubjectivity(0.0, 0.0, 0)
    polarity = max(-1.0, min(1.0, pol_sum / matched))
    subjectivity = max(0.0, min(1.0, subj_sum / matched))
    return PolaritySubjectivity(polarity, subjectivity, matched)


def _is_negator(lex: Lexicon, token: str) -> bool:
    entry = lex.get(token)
    return entry is not None and entry.kind is EntryKind.NEGATOR


def compound_from_sum(total: float, alpha: float = NORMALIZATION_ALPHA) -> float:
    return total / math.sqrt(total * total + alpha)


def effective_valences(doc, lex: Lexicon) -> list[float]:
    """Per-token valence after booster and negation adjustments (0 for non-sentiment tokens)."""
    tokens = _tokens(doc)
    out = []
    for i, token in enumerate(tokens):
        entry = lex.get(token)
        if entry is None or entry.kind is not EntryKind.SENTIMENT or entry.valence == 0.0:
            out.append(0.0)
            continue
        v = entry.valence
        if i > 0:
            prev = lex.get(tokens[i - 1])
            if prev is not None and prev.kind is EntryKind.BOOSTER:
                v += prev.delta if v > 0 else -prev.delta
        window = tokens[max(0, i - VALENCE_NEGATION_SCOPE):i]
        if any(_is_negator(lex, t) for t in window):
            v *= VALENCE_NEGATION
        out.append(v)
    return out


def score_valence(doc, lex: Lexicon) -> ValenceScores:
    valences = effective_valences(doc, lex)
    compound = compound_from_sum(math.fsum(valences))
    # positive/negative words weigh 1 + |v| against 1 per neutral word
    pos = sum(v + 1.0 for v in valences if v > 0)
    neg = sum(1.0 - v for v in valences if v < 0)
    neu = float(sum(1 for v in valences if v == 0))
    total = pos + neg + neu
    if total == 0:
        return ValenceScores(compound, 0.0, 0.0, 1.0)
    return ValenceScores(compound, pos / total, neg / total, neu / total)


# -- labeling ----------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdConfig:
    neutral_low: float = -0.05
    neutral_high: float = 0.05
    pattern_epsilon: float = 0.05

    def __post_init__(self):
        if not self.neutral_low < self.neutral_high:
            raise ValueError("neutral_low must be below neutral_high")
        if self.pattern_epsilon < 0:
            raise ValueError("pattern_epsilon must be non-negative")

    def pattern_band(self) -> "ThresholdConfig":
        eps = self.pattern_epsilon
        return ThresholdConfig(-eps, eps, eps) if eps > 0 else ThresholdConfig(-1e-12, 1e-12, 0.0)


def label_from_scores(score: float, cfg: ThresholdConfig = ThresholdConfig()) -> SentimentLabel:
    """Strictly above the band is positive, strictly below negative; the band itself is neutral."""
    if not math.isfinite(score):
        raise ScoreError(f"non-finite sentiment score {score!r}")
    if score > cfg.neutral_high:
        return SentimentLabel.POSITIVE
    if score < cfg.neutral_low:
        return SentimentLabel.NEGATIVE
    return SentimentLabel.NEUTRAL


class Method(enum.Enum):
    PATTERN = "pattern"
    VALENCE = "valence"


def document_score(doc, method: Method, lex: Lexicon, drop_objective: bool = False) -> float:
    if method is Method.PATTERN:
        return score_pattern(doc, lex, drop_objective=drop_objective).polarity
    return score_valence(doc, lex).compound


def label_document(doc, method: Method, lex: Lexicon, cfg: ThresholdConfig = ThresholdConfig(),
                   drop_objective: bool = False) -> tuple[SentimentLabel, float]:
    score = document_score(doc, method, lex, drop_objective)
    band = cfg.pattern_band() if method is Method.PATTERN else cfg
    return label_from_scores(score, band), score


@dataclass(frozen=True)
class RelabelReport:
    method: Method
    before_counts: dict[SentimentLabel | None, int]
    after_counts: dict[SentimentLabel | None, int]
    moved_to_neutral: int

    def rows(self) -> list[tuple[str, int, int]]:
        keys: list[SentimentLabel | None] = [*LABELS, None]
        return [(label_slug(k), self.before_counts.get(k, 0), self.after_counts.get(k, 0)) for k in keys]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["method", "label", "before", "after"])
            for label, before, after in self.rows():
                writer.writerow([self.method.value, label, before, after])


def relabel_corpus(
    docs: Iterable[LabeledDoc],
    method: Method,
    lex: Lexicon,
    cfg: ThresholdConfig = ThresholdConfig(),
    drop_objective: bool = False,
) -> tuple[list[LabeledDoc], RelabelReport]:
    """Label every document with the chosen scorer; the input label becomes ``original_label``."""
    out = []
    before: Counter = Counter()
    after: Counter = Counter()
    moved = 0
    for doc in docs:
        if doc.dropped_all:
            label, score = SentimentLabel.NEUTRAL, 0.0
        else:
            label, score = label_document(doc, method, lex, cfg, drop_objective)
        before[doc.label] += 1
        after[label] += 1
        if label is SentimentLabel.NEUTRAL and doc.label in (SentimentLabel.POSITIVE, SentimentLabel.NEGATIVE):
            moved += 1
        out.append(LabeledDoc(doc.tokens, label, doc.source_id, original_label=doc.label, score=score))
    report = RelabelReport(method, dict(before), dict(after), moved)
    return out, report
