"""Tweet normalization and token-level cleanup.

The full pipeline is ``normalize -> tokenize -> remove_stopwords ->
expand_slang -> reduce``, in that order.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from lexisent.textpipe.porter import stem

TOKEN_RE = re.compile(r"[a-z']+")

_URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_NUMBER_RE = re.compile(r"(?<![A-Za-z])\d+(?:[.,:/]\d+)*(?![A-Za-z])")
_QUOTE_RE = re.compile(r"[‘’ʼ`´]")
_STRAY_APOSTROPHE_RE = re.compile(r"(?<![A-Za-z])'|'(?![A-Za-z])")
_SYMBOL_RE = re.compile(r"[^A-Za-z'\s]+")
_SPACE_RE = re.compile(r"\s+")


def _strip_symbols(text: str) -> str:
    text = _QUOTE_RE.sub("'", text)
    text = _SYMBOL_RE.sub(" ", text)
    # apostrophes survive only between two letters ("don't", not "'quoted'")
    return _STRAY_APOSTROPHE_RE.sub(" ", text)


STRIP_RULES = {
    "url": lambda s: _URL_RE.sub(" ", s),
    "mention": lambda s: _MENTION_RE.sub(" ", s),
    "number": lambda s: _NUMBER_RE.sub(" ", s),
    "symbol": _strip_symbols,
    "casefold": str.lower,
}
DEFAULT_STRIP_RULES = ("url", "mention", "number", "symbol", "casefold")


class ReductionMode(enum.Enum):
    STEM = "stem"
    LEMMATIZE = "lemmatize"
    NONE = "none"


def normalize(raw: str, rules: Sequence[str] = DEFAULT_STRIP_RULES) -> str:
    """Strip URLs, mentions, numbers and symbols, lowercase, collapse whitespace.

    Hashtags keep their word; only the ``#`` goes.
    """
    text = raw
    for rule in rules:
        text = STRIP_RULES[rule](text)
    return _SPACE_RE.sub(" ", text).strip()


def tokenize(text: str) -> list[str]:
    return text.split()


def remove_stopwords(tokens: Iterable[str], stopwords: frozenset[str] | set[str]) -> list[str]:
    return [t for t in tokens if t not in stopwords]


def expand_slang(tokens: Iterable[str], slang: Mapping[str, Sequence[str]]) -> list[str]:
    out: list[str] = []
    for t in tokens:
        expansion = slang.get(t)
        if expansion is None:
            out.append(t)
        else:
            out.extend(expansion)
    return out


def reduce(tokens: Iterable[str], mode: ReductionMode, lemmas: Mapping[str, str] | None = None) -> list[str]:
    if mode is ReductionMode.STEM:
        return [stem(t) for t in tokens]
    if mode is ReductionMode.LEMMATIZE:
        lemmas = lemmas or {}
        return [lemmas.get(t, t) for t in tokens]
    return list(tokens)


# -- resource files ---------------------------------------------------------


def _data_lines(path: str | Path | None, bundled: str) -> list[str]:
    if path is None:
        text = resources.files("lexisent.data").joinpath(bundled).read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    lines = []
    for line in text.splitlines():
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        lines.append(line)
    return lines


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    return frozenset(line.strip().lower() for line in _data_lines(path, "stopwords.txt"))


def load_slang(path: str | Path | None = None) -> dict[str, tuple[str, ...]]:
    slang: dict[str, tuple[str, ...]] = {}
    for line in _data_lines(path, "slang.tsv"):
        key, sep, expansion = line.partition("\t")
        if not sep:
            raise ValueError(f"slang line lacks a tab separator: {line!r}")
        words = tuple(expansion.lower().split())
        bad = [w for w in words if not TOKEN_RE.fullmatch(w)]
        if bad:
            raise ValueError(f"slang expansion for {key!r} has invalid tokens {bad}")
        slang[key.strip().lower()] = words
    return slang


def load_lemmas(path: str | Path | None = None) -> dict[str, str]:
    lemmas = {}
    for line in _data_lines(path, "lemmas.tsv"):
        form, sep, lemma = line.partition("\t")
        if not sep:
            raise ValueError(f"lemma line lacks a tab separator: {line!r}")
        lemmas[form.strip().lower()] = lemma.strip().lower()
    return lemmas


# -- composed pipeline --------------------------------------------------------


@dataclass(frozen=True)
class PipelineConfig:
    stopwords: frozenset[str] = frozenset()
    slang: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    reduction: ReductionMode = ReductionMode.STEM
    lemmas: Mapping[str, str] = field(default_factory=dict)
    strip_rules: tuple[str, ...] = DEFAULT_STRIP_RULES

    def __post_init__(self):
        if not self.strip_rules:
            raise ValueError("strip_rules must not be empty")
        unknown = [r for r in self.strip_rules if r not in STRIP_RULES]
        if unknown:
            raise ValueError(f"unknown strip rules {unknown}")
        if any(k != k.lower() for k in self.slang):
            raise ValueError("slang keys must be lowercase")

    @classmethod
    def default(cls, reduction: ReductionMode = ReductionMode.STEM) -> "PipelineConfig":
        return _default_config(reduction)

    def reduce_token(self, token: str) -> str:
        return reduce([token], self.reduction, self.lemmas)[0]


@lru_cache(maxsize=None)
def _default_config(reduction: ReductionMode) -> PipelineConfig:
    return PipelineConfig(
        stopwords=load_stopwords(),
        slang=load_slang(),
        reduction=reduction,
        lemmas=load_lemmas(),
    )


@dataclass(frozen=True)
class ProcessedDoc:
    tokens: tuple[str, ...]
    source_id: str = ""

    @property
    def dropped_all(self) -> bool:
        return not self.tokens


def preprocess_text(raw: str, config: PipelineConfig) -> tuple[str, ...]:
    tokens = tokenize(normalize(raw, config.strip_rules))
    tokens = remove_stopwords(tokens, config.stopwords)
    tokens = expand_slang(tokens, config.slang)
    return tuple(reduce(tokens, config.reduction, config.lemmas))


def preprocess(record, config: PipelineConfig) -> ProcessedDoc:
    """Run the full pipeline on a ``TweetRecord`` (anything with ``raw_text`` and ``id``)."""
    return ProcessedDoc(tokens=preprocess_text(record.raw_text, config), source_id=record.id)
