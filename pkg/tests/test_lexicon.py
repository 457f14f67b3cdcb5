import math

import pytest
from hypothesis import given, strategies as st

from lexisent.corpus import LabeledDoc
from lexisent.labels import SentimentLabel
from lexisent.lexicon import (
    EntryKind, LexiconEntry, LexiconError, Method, ScoreError, ThresholdConfig, compound_from_sum,
    effective_valences, label_from_scores, load_lexicon, relabel_corpus, score_pattern, score_valence,
)
from lexisent.textpipe import PipelineConfig
from conftest import make_lexicon

NEG, NEU, POS = SentimentLabel.NEGATIVE, SentimentLabel.NEUTRAL, SentimentLabel.POSITIVE


def test_load_lexicon_schema(tmp_path):
    p = tmp_path / "lex.tsv"
    p.write_text("# comment\ngreat\t0.8\t0.75\t3.1\tsentiment\nwow\t1.5\t0.5\t1\tsentiment\n"
                 "very\t0\t0\t0\tbooster:0.293\nnot\t0\t0\t0\tnegator\ngreat\t0.9\t0.75\t3.1\tsentiment\n")
    lex = load_lexicon(p)
    assert lex.get("great").polarity == 0.9  # later duplicate wins
    assert "wow" not in lex
    assert lex.get("very").kind is EntryKind.BOOSTER and lex.get("very").delta == 0.293
    assert lex.get("not").kind is EntryKind.NEGATOR


def test_load_lexicon_rejects_empty(tmp_path):
    p = tmp_path / "empty.tsv"
    p.write_text("")
    with pytest.raises(LexiconError):
        load_lexicon(p)


def test_bundled_lexicon():
    lex = load_lexicon()
    assert len(lex) > 7000
    great = lex.get("great")
    assert (great.polarity, great.subjectivity, great.valence) == (0.8, 0.75, 3.1)
    assert lex.get("good").valence == 1.9


def test_entry_ranges():
    with pytest.raises(ValueError):
        LexiconEntry("x", 1.5, 0.5, 0.0)
    with pytest.raises(ValueError):
        LexiconEntry("x", 0.5, 1.5, 0.0)
    with pytest.raises(ValueError):
        LexiconEntry("x", 0.5, 0.5, 4.5)


def test_score_pattern_examples(small_lexicon):
    r = score_pattern(["great"], small_lexicon)
    assert (r.polarity, r.subjectivity, r.matched_count) == (0.8, 0.75, 1)
    r = score_pattern(["great", "terrible"], small_lexicon)
    assert r.polarity == pytest.approx(-0.05, abs=1e-12)
    r = score_pattern([], small_lexicon)
    assert (r.polarity, r.subjectivity, r.matched_count) == (0.0, 0.0, 0)


def test_score_pattern_negation_scope(small_lexicon):
    assert score_pattern(["not", "good"], small_lexicon).polarity == pytest.approx(-0.35)
    assert score_pattern(["not", "x", "good"], small_lexicon).polarity == pytest.approx(0.7)


def test_score_pattern_drop_objective():
    lex = make_lexicon([("good", 0.7, 0.6, 1.9), ("fact", 0.2, 0.0, 0.0)])
    assert score_pattern(["good", "fact"], lex).polarity == pytest.approx(0.45)
    assert score_pattern(["good", "fact"], lex, drop_objective=True).polarity == pytest.approx(0.7)


def test_score_valence_examples(small_lexicon):
    empty = score_valence([], small_lexicon)
    assert empty.compound == 0.0 and empty.neu_frac == 1.0
    assert score_valence(["good"], small_lexicon).compound == pytest.approx(1.9 / math.sqrt(1.9**2 + 15), abs=1e-12)
    assert score_valence(["good"], small_lexicon).compound == pytest.approx(0.4404, abs=5e-5)
    assert score_valence(["not", "good"], small_lexicon).compound == pytest.approx(-0.3412, abs=5e-5)


def test_valence_booster_and_scope(small_lexicon):
    assert effective_valences(["very", "good"], small_lexicon) == pytest.approx([0.0, 1.9 + 0.293])
    assert effective_valences(["very", "bad"], small_lexicon) == pytest.approx([0.0, -2.5 - 0.293])
    assert effective_valences(["barely", "good"], small_lexicon) == pytest.approx([0.0, 1.9 - 0.293])
    # negator three tokens back still applies, four tokens back does not
    assert effective_valences(["not", "a", "b", "good"], small_lexicon)[-1] == pytest.approx(-0.74 * 1.9)
    assert effective_valences(["not", "a", "b", "c", "good"], small_lexicon)[-1] == pytest.approx(1.9)


valence_docs = st.lists(st.sampled_from(["good", "great", "terrible", "bad", "not", "very", "barely", "x"]),
                        max_size=15)


@given(valence_docs)
def test_valence_invariants(tokens):
    lex = make_lexicon([
        ("good", 0.7, 0.6, 1.9), ("great", 0.8, 0.75, 3.1), ("terrible", -0.9, 1.0, -2.5),
        ("bad", -0.7, 0.67, -2.5), ("not", 0, 0, 0, "negator"), ("very", 0, 0, 0, "booster", 0.293),
        ("barely", 0, 0, 0, "booster", -0.293),
    ])
    s = score_valence(tokens, lex)
    assert -1.0 <= s.compound <= 1.0
    assert s.pos_frac + s.neg_frac + s.neu_frac == pytest.approx(1.0, abs=1e-9)
    mirrored = make_lexicon([(e.token, -e.polarity, e.subjectivity, -e.valence, e.kind.value, e.delta)
                             for e in lex.entries.values()])
    assert score_valence(tokens, mirrored).compound == pytest.approx(-s.compound, abs=1e-12)
    p = score_pattern(tokens, lex)
    assert -1 <= p.polarity <= 1 and 0 <= p.subjectivity <= 1


@given(st.floats(-1e6, 1e6))
def test_compound_bounded_and_odd(total):
    c = compound_from_sum(total)
    assert -1.0 <= c <= 1.0
    assert compound_from_sum(-total) == -c


@given(st.permutations(["good", "x", "terrible", "y", "great", "z"]))
def test_pattern_order_free_without_modifiers(tokens):
    lex = make_lexicon([("good", 0.7, 0.6, 1.9), ("great", 0.8, 0.75, 3.1), ("terrible", -0.9, 1.0, -2.5)])
    assert score_pattern(tokens, lex).polarity == pytest.approx(0.2, abs=1e-12)


def test_label_boundaries():
    scores = [0.051, 0.05, 0.0, -0.05, -0.051]
    assert [label_from_scores(s) for s in scores] == [POS, NEU, NEU, NEU, NEG]
    assert label_from_scores(0.06) is POS
    with pytest.raises(ScoreError):
        label_from_scores(float("nan"))


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_label_monotone(a, b):
    lo, hi = sorted((a, b))
    assert label_from_scores(lo) <= label_from_scores(hi)


def test_threshold_config_validation():
    with pytest.raises(ValueError):
        ThresholdConfig(0.1, -0.1)
    with pytest.raises(ValueError):
        ThresholdConfig(pattern_epsilon=-1)


def test_relabel_examples(small_lexicon):
    docs = [LabeledDoc(("good",), POS), LabeledDoc(("not", "good"), POS)]
    out, report = relabel_corpus(docs, Method.VALENCE, small_lexicon)
    assert [d.label for d in out] == [POS, NEG]
    assert out[1].original_label is POS
    zero = [LabeledDoc(("x",), NEG), LabeledDoc((), POS)]
    out, report = relabel_corpus(zero, Method.VALENCE, small_lexicon)
    assert [d.label for d in out] == [NEU, NEU]
    assert report.moved_to_neutral == 2
    assert sum(report.after_counts.values()) == sum(report.before_counts.values()) == 2


def test_pattern_and_valence_reports_differ(tmp_path):
    from lexisent.synthetic import sentiment140_records
    from lexisent.workflow import pipeline_lexicon, preprocess_records
    docs = preprocess_records(sentiment140_records(400, 3))
    lex = pipeline_lexicon()
    _, a = relabel_corpus(docs, Method.PATTERN, lex)
    _, b = relabel_corpus(docs, Method.VALENCE, lex)
    assert a.after_counts != b.after_counts
    assert a.after_counts[NEU] > 0 and b.after_counts[NEU] > 0
    b.write_csv(tmp_path / "d.csv")
    assert (tmp_path / "d.csv").read_text().splitlines()[0] == "method,label,before,after"


def test_aligned_lexicon_reaches_stems():
    cfg = PipelineConfig.default()
    lex = load_lexicon().aligned(cfg.reduce_token)
    assert lex.get(cfg.reduce_token("happy")).valence > 0
    assert lex.get("great").valence == 3.1
