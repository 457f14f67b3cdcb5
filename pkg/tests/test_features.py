import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lexisent.features import (
    SparseVector, TruncationPolicy, Vocabulary, WeightSource, build_vocabulary, jaccard, rank_and_truncate,
    read_vectors, tfidf_matrix, tfidf_vectorize, token_weight, write_vectors,
)
from lexisent.textpipe import ProcessedDoc
from conftest import make_lexicon

sklearn_text = pytest.importorskip("sklearn.feature_extraction.text")


def test_vocabulary_examples():
    v = build_vocabulary([["a", "b"], ["b"]])
    assert v.token_to_index == {"a": 0, "b": 1}
    assert v.document_frequency.tolist() == [1, 2]
    assert build_vocabulary([["a", "b"], ["b"]], min_df=2).token_to_index == {"b": 0}
    assert len(build_vocabulary([])) == 0
    with pytest.raises(ValueError):
        build_vocabulary([["a"]], min_df=0)


def test_tfidf_hand_check():
    docs = [["good", "movie"], ["bad", "movie"]]
    vocab = build_vocabulary(docs)
    v = tfidf_vectorize(docs[0], vocab)
    weights = dict(zip((vocab.tokens[i] for i in v.indices), v.weights))
    assert weights["good"] == pytest.approx(0.814802, abs=1e-6)
    assert weights["movie"] == pytest.approx(0.579739, abs=1e-6)
    assert vocab.idf()[vocab.token_to_index["good"]] == pytest.approx(math.log(1.5) + 1)


def test_tfidf_edge_cases():
    vocab = build_vocabulary([["a", "b"], ["b", "c"]])
    single = tfidf_vectorize(["c", "zzz"], vocab)
    assert single.pairs == [(2, 1.0)]
    oov = tfidf_vectorize(["zzz"], vocab)
    assert oov.pairs == [] and oov.dimension == 3


words = st.sampled_from(["a", "b", "c", "d", "e", "f", "gg", "hh"])
corpora = st.lists(st.lists(words, min_size=1, max_size=8), min_size=1, max_size=12)


@given(corpora)
def test_tfidf_matches_reference_vectorizer(docs):
    vocab = build_vocabulary(docs)
    ours = tfidf_matrix(docs, vocab).toarray()
    ref = sklearn_text.TfidfVectorizer(analyzer=lambda d: d, smooth_idf=True, norm="l2",
                                       vocabulary=vocab.token_to_index)
    theirs = ref.fit_transform(docs).toarray()
    np.testing.assert_allclose(ours, theirs, atol=1e-12)
    norms = np.linalg.norm(ours, axis=1)
    np.testing.assert_allclose(norms[norms > 0], 1.0, atol=1e-9)
    assert (ours >= 0).all()


def test_vocab_and_vector_files(tmp_path):
    docs = [["good", "movie"], ["bad", "movie"], ["ok"]]
    vocab = build_vocabulary(docs)
    vocab.write_tsv(tmp_path / "v.tsv")
    back = Vocabulary.read_tsv(tmp_path / "v.tsv")
    assert back.token_to_index == vocab.token_to_index and back.n_documents == 3
    assert back.document_frequency.tolist() == vocab.document_frequency.tolist()
    vecs = [tfidf_vectorize(d, vocab) for d in docs + [["zzz"]]]
    write_vectors(tmp_path / "x.vec", vecs, len(vocab))
    assert (tmp_path / "x.vec").read_text().startswith("dim=4\n")
    assert read_vectors(tmp_path / "x.vec") == vecs


def test_sparse_vector_validation():
    with pytest.raises(ValueError):
        SparseVector([1, 0], [1.0, 1.0], 3)
    with pytest.raises(ValueError):
        SparseVector([3], [1.0], 3)
    with pytest.raises(ValueError):
        SparseVector([0], [0.0], 3)
    v = SparseVector.from_dense([0, 2.0, 0, -1.0])
    assert v.pairs == [(1, 2.0), (3, -1.0)]
    assert v.to_dense().tolist() == [0, 2.0, 0, -1.0]


def test_jaccard():
    assert jaccard({"a", "b", "c"}, {"b", "c", "d"}) == 0.5
    assert jaccard({"a"}, {"a"}) == 1.0
    assert jaccard({"a"}, {"b"}) == 0.0
    assert jaccard(set(), set()) == 1.0


@given(st.sets(words), st.sets(words))
def test_jaccard_symmetric(a, b):
    assert jaccard(a, b) == jaccard(b, a)
    assert 0.0 <= jaccard(a, b) <= 1.0


LEX = make_lexicon([("good", 0.7, 0.6, 1.9), ("bad", -0.7, 0.7, -2.5), ("meh", -0.1, 0.3, -0.3),
                    ("not", 0, 0, 0, "negator"), ("very", 0, 0, 0, "booster", 0.293)])


def test_truncation_examples():
    doc = ["a", "b", "c", "d", "e"]
    assert len(set(rank_and_truncate(doc, LEX, TruncationPolicy(0.8)))) == 4
    assert len(set(rank_and_truncate(doc, LEX, TruncationPolicy(0.6)))) == 3


def test_truncation_drops_lowest_weight_first_and_keeps_order():
    doc = ProcessedDoc(("x", "good", "meh", "y", "bad", "x"), "id")
    out = rank_and_truncate(doc, LEX, TruncationPolicy(0.6))
    assert out.source_id == "id"
    assert out.tokens == ("good", "meh", "bad")
    assert token_weight("not", LEX) == 0.74 and token_weight("not", LEX, WeightSource.ABS_POLARITY) == 0.5
    assert token_weight("very", LEX) == 0.293 and token_weight("zzz", LEX) == 0.0


def test_truncation_boundary_keeps_tiny_docs():
    assert rank_and_truncate(["good", "bad"], LEX, TruncationPolicy(0.8)) == ("good", "bad")
    assert rank_and_truncate([], LEX, TruncationPolicy(0.7)) == ()


def test_policy_range():
    with pytest.raises(ValueError):
        TruncationPolicy(0.9)
    assert TruncationPolicy.draw(1).threshold == TruncationPolicy.draw(1).threshold
    assert TruncationPolicy.draw(1).threshold != TruncationPolicy.draw(2).threshold


@given(st.lists(st.sampled_from(["good", "bad", "meh", "not", "very", "p", "q", "r", "s"]), max_size=15),
       st.integers(0, 2**63 - 1))
def test_truncation_contract(tokens, seed):
    policy = TruncationPolicy.draw(seed)
    assert 0.6 <= policy.threshold <= 0.8
    out = rank_and_truncate(tokens, LEX, policy)
    assert jaccard(tokens, out) >= policy.threshold
    assert out == rank_and_truncate(tokens, LEX, policy)
    kept = set(out)
    assert list(out) == [t for t in tokens if t in kept]
