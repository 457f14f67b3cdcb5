import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lexisent.lexicon import EntryKind, Lexicon, LexiconEntry

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def make_lexicon(rows) -> Lexicon:
    """rows: (token, polarity, subjectivity, valence[, kind[, delta]])"""
    entries = {}
    for row in rows:
        token, pol, subj, val = row[:4]
        kind = EntryKind(row[4]) if len(row) > 4 else EntryKind.SENTIMENT
        delta = row[5] if len(row) > 5 else 0.0
        entries[token] = LexiconEntry(token, pol, subj, val, kind, delta)
    return Lexicon(entries, name="test")


@pytest.fixture
def small_lexicon() -> Lexicon:
    return make_lexicon([
        ("good", 0.7, 0.6, 1.9),
        ("great", 0.8, 0.75, 3.1),
        ("terrible", -0.9, 1.0, -2.5),
        ("bad", -0.7, 0.67, -2.5),
        ("not", 0.0, 0.0, 0.0, "negator"),
        ("very", 0.0, 0.0, 0.0, "booster", 0.293),
        ("barely", 0.0, 0.0, 0.0, "booster", -0.293),
    ])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
