"""Deterministic synthetic tweets for tests, fixtures and desk-scale experiments.

Tweets mix lexicon sentiment words with neutral filler, negated and boosted
phrases, mentions, URLs, numbers and hashtags. The distant-supervision label
(0 or 4, as in Sentiment140) follows the intended sentiment of the tweet, so
it is informative but noisy with respect to a lexicon relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from lexisent.labels import SentimentLabel
from lexisent.lexicon import EntryKind, Lexicon, load_lexicon
from lexisent.corpus import TweetRecord
from lexisent.seeding import derive_rng
from lexisent.textpipe import PipelineConfig, load_stopwords

FILLER = """
today tomorrow morning night weekend monday friday office school class bus train car road
home house kitchen coffee tea lunch dinner breakfast pizza phone laptop email meeting
project report paper book movie song album show game match team city town street park
beach weather rain sun snow window door table chair bed shirt shoes bag dog cat bird
mom dad sister brother friend neighbour teacher boss guy girl people family kids baby
work shift exam homework test grade course lecture notes library store shop market mall
ticket flight airport hotel trip drive walk run gym pool bike ride time hour minute week
month year season episode channel news radio station video photo picture camera music
band concert party dance birthday wedding holiday summer winter spring autumn garden tree
flower grass river lake mountain hill bridge tower building floor room wall roof yard
""".split()

# frequent sentiment words head a Zipf draw; the rest of the lexicon is a uniform tail
COMMON_POSITIVE = tuple("""
love good great happy awesome nice best fun thanks cool amazing beautiful glad excited lol haha
enjoy perfect wonderful sweet cute win hope like yay smile lucky proud free fantastic excellent
""".split())
COMMON_NEGATIVE = tuple("""
sad hate bad miss sick tired bored hurt worst ugh sucks annoying lost ugly angry cry boring stupid
poor fail pain lonely scared worried terrible awful broken horrible upset sorry
""".split())

NEGATIONS = ("not", "never", "don't", "can't", "isn't", "wasn't", "didn't", "no")
BOOSTERS = ("very", "really", "extremely", "so", "totally", "absolutely")
HASHTAGS = ("#monday", "#tbt", "#news", "#life", "#work", "#followfriday", "#music")


@dataclass(frozen=True)
class SyntheticConfig:
    """Mixture weights for the phrase generator; probabilities are per phrase."""

    p_plain: float = 0.45  # sentiment word with the intended sign
    p_boosted: float = 0.15  # booster + intended-sign word
    p_negated: float = 0.25  # negator + opposite-sign word
    p_objective: float = 0.25  # tweet carries no sentiment phrase at all
    p_label_noise: float = 0.1  # distant label flipped
    p_tail: float = 0.15  # sentiment word drawn from the long lexicon tail
    zipf_exponent: float = 1.1
    min_filler: int = 2
    max_filler: int = 7
    max_phrases: int = 3


@lru_cache(maxsize=4)
def _word_pools(lexicon_path: str | None) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
    lex = load_lexicon(lexicon_path)
    config = PipelineConfig.default()
    aligned = lex.aligned(config.reduce_token)
    stop = load_stopwords()
    pos, neg = [], []
    for token, entry in sorted(lex.entries.items()):
        if entry.kind is not EntryKind.SENTIMENT or not token.isalpha() or len(token) < 4 or token in stop:
            continue
        reduced = aligned.get(config.reduce_token(token))
        if reduced is None or abs(reduced.valence) < 1.0 or np.sign(reduced.valence) != np.sign(entry.valence):
            continue
        (pos if entry.valence > 0 else neg).append(token)
    filler = tuple(w for w in FILLER if w not in stop and aligned.get(config.reduce_token(w)) is None
                   and w not in lex)
    return tuple(pos), tuple(neg), filler


def _pick(rng: np.random.Generator, pool) -> str:
    return pool[int(rng.integers(len(pool)))]


@lru_cache(maxsize=8)
def _zipf_weights(n: int, exponent: float) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** exponent
    return w / w.sum()


def _sentiment_word(rng: np.random.Generator, positive: bool, cfg: "SyntheticConfig", tail) -> str:
    if rng.random() < cfg.p_tail:
        return _pick(rng, tail)
    head = COMMON_POSITIVE if positive else COMMON_NEGATIVE
    return head[int(rng.choice(len(head), p=_zipf_weights(len(head), cfg.zipf_exponent)))]


def synthetic_tweet(rng: np.random.Generator, positive: bool, cfg: SyntheticConfig = SyntheticConfig(),
                    lexicon_path: str | None = None) -> tuple[str, bool]:
    """One tweet text plus whether it carries any sentiment phrase."""
    pos, neg, filler = _word_pools(lexicon_path)
    same, other = (pos, neg) if positive else (neg, pos)

    def word(sign: bool, tail) -> str:
        return _sentiment_word(rng, sign, cfg, tail)
    n_filler = int(rng.integers(cfg.min_filler, cfg.max_filler + 1))
    subjective = rng.random() >= cfg.p_objective
    phrases = []
    if subjective:
        weights = np.array([cfg.p_plain, cfg.p_boosted, cfg.p_negated])
        for _ in range(int(rng.integers(1, cfg.max_phrases + 1))):
            kind = int(rng.choice(3, p=weights / weights.sum()))
            if kind == 0:
                phrases.append([word(positive, same)])
            elif kind == 1:
                phrases.append([_pick(rng, BOOSTERS), word(positive, same)])
            else:
                phrases.append([_pick(rng, NEGATIONS), word(not positive, other)])
    # filler runs separate phrases, so a negator rarely reaches into the next phrase
    gaps = np.bincount(rng.integers(0, len(phrases) + 1, size=n_filler), minlength=len(phrases) + 1)
    words = [_pick(rng, filler) for _ in range(int(gaps[0]))]
    for phrase, gap in zip(phrases, gaps[1:]):
        words += phrase + [_pick(rng, filler) for _ in range(int(gap))]
    if rng.random() < 0.3:
        words.insert(0, f"@user{int(rng.integers(1000))}")
    if rng.random() < 0.15:
        words.append(f"http://t.co/{int(rng.integers(10**6)):x}")
    if rng.random() < 0.15:
        words.insert(int(rng.integers(len(words) + 1)), str(int(rng.integers(100))))
    if rng.random() < 0.1:
        words.append(_pick(rng, HASHTAGS))
    text = " ".join(words)
    if rng.random() < 0.3:
        text = text[0].upper() + text[1:]
    if rng.random() < 0.2:
        text += "!" * int(rng.integers(1, 4))
    return text, subjective


def sentiment140_records(n: int, seed: int, cfg: SyntheticConfig = SyntheticConfig(),
                         lexicon_path: str | None = None) -> list[TweetRecord]:
    """``n`` tweets, half with distant label 0 and half with 4 (first half negative)."""
    rng = derive_rng(seed, "synthetic-sentiment140")
    out = []
    for i in range(n):
        positive = i >= n // 2
        text, _ = synthetic_tweet(rng, positive, cfg, lexicon_path)
        label_positive = positive != (rng.random() < cfg.p_label_noise)
        label = SentimentLabel.POSITIVE if label_positive else SentimentLabel.NEGATIVE
        out.append(TweetRecord(id=str(1_000_000 + i), raw_text=text, original_label=label,
                               user=f"user{int(rng.integers(500))}", timestamp=f"2009-05-{1 + i % 28:02d}"))
    return out


def personality_records(n: int = 300, seed: int = 7, mix=(0.25, 0.15, 0.60),
                        cfg: SyntheticConfig = SyntheticConfig(p_objective=0.0)) -> list[TweetRecord]:
    """A single user's tweet dump with gold labels; ``mix`` gives (positive, neutral, negative) shares."""
    rng = derive_rng(seed, "synthetic-personality")
    n_pos, n_neu = round(n * mix[0]), round(n * mix[1])
    gold = ([SentimentLabel.POSITIVE] * n_pos + [SentimentLabel.NEUTRAL] * n_neu
            + [SentimentLabel.NEGATIVE] * (n - n_pos - n_neu))
    gold = [gold[i] for i in rng.permutation(n)]
    out = []
    for i, label in enumerate(gold):
        if label is SentimentLabel.NEUTRAL:
            _, _, filler = _word_pools(None)
            text = " ".join(_pick(rng, filler) for _ in range(int(rng.integers(3, 9))))
        else:
            text, _ = synthetic_tweet(rng, label is SentimentLabel.POSITIVE, cfg)
        out.append(TweetRecord(id=f"p{i:04d}", raw_text=text, original_label=label,
                               user="subject", timestamp=f"2019-{1 + i % 12:02d}-{1 + i % 28:02d}"))
    return out
