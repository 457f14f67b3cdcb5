import json
import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, strategies as st

from lexisent import models as M
from lexisent.features import SparseVector, build_vocabulary, tfidf_matrix
from lexisent.labels import SentimentLabel
from lexisent.models import Dataset
from lexisent.models.ensembles import ForestModel
from lexisent.models.linear import softmax_loss_grad
from lexisent.models.trees import Tree

NEG, NEU, POS = SentimentLabel.NEGATIVE, SentimentLabel.NEUTRAL, SentimentLabel.POSITIVE


def ds(X, y):
    return Dataset(sp.csr_matrix(np.asarray(X, dtype=float)), np.asarray(y))


# -- naive Bayes ----------------------------------------------------------------------


def enumerated_posterior(X, y, x, alpha=1.0):
    """Plain products over the vocabulary; no logs, no vectorization."""
    n, V = len(X), len(X[0])
    joint = []
    for c in range(3):
        docs = [X[i] for i in range(n) if y[i] == c]
        prior = (len(docs) + alpha) / (n + 3 * alpha)
        totals = [sum(d[j] for d in docs) for j in range(V)]
        denom = sum(totals) + alpha * V
        p = prior
        for j in range(V):
            p *= ((totals[j] + alpha) / denom) ** x[j]
        joint.append(p)
    z = sum(joint)
    return [j / z for j in joint]


nb_cases = st.integers(1, 6).flatmap(lambda V: st.tuples(
    st.lists(st.tuples(st.lists(st.integers(0, 3), min_size=V, max_size=V), st.integers(0, 2)), min_size=1, max_size=8),
    st.lists(st.integers(0, 3), min_size=V, max_size=V),
    st.sampled_from([0.5, 1.0, 2.0]),
))


@given(nb_cases)
def test_nb_matches_enumerated_bayes(case):
    rows, query, alpha = case
    X = [r for r, _ in rows]
    y = [c for _, c in rows]
    model = M.fit_naive_bayes(ds(X, y), M.NBParams(alpha))
    got = model.class_scores(sp.csr_matrix(np.asarray([query], dtype=float)))[0]
    np.testing.assert_allclose(got, enumerated_posterior(X, y, query, alpha), atol=1e-9, rtol=0)


def test_nb_against_reference_implementation():
    naive_bayes = pytest.importorskip("sklearn.naive_bayes")
    rng = np.random.default_rng(0)
    X = rng.poisson(0.7, size=(60, 12)).astype(float)
    y = rng.integers(0, 3, size=60)
    ours = M.fit_naive_bayes(ds(X, y))
    prior = (np.bincount(y, minlength=3) + 1.0) / (60 + 3.0)
    ref = naive_bayes.MultinomialNB(alpha=1.0, class_prior=prior).fit(X, y)
    np.testing.assert_allclose(ours.class_scores(sp.csr_matrix(X)), ref.predict_proba(X), atol=1e-10)


def test_nb_examples():
    docs = [["good"], ["bad"]]
    vocab = build_vocabulary(docs)
    data = Dataset(tfidf_matrix(docs, vocab), [POS, NEG])
    model = M.fit_naive_bayes(data)
    assert M.predict(model, SparseVector([0], [1.0], 2)).label is POS
    # unseen token, equal priors: uniform scores
    data3 = ds([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 1, 2])
    scores = M.predict(M.fit_naive_bayes(ds([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], [0, 1, 2])),
                       SparseVector([3], [1.0], 4)).class_scores
    np.testing.assert_allclose(scores, [1 / 3] * 3, atol=1e-12)
    single = M.fit_naive_bayes(ds([[1, 0], [0, 1]], [2, 2]))
    assert single.predict_labels(sp.csr_matrix(np.eye(2))).tolist() == [2, 2]
    zero = M.predict(M.fit_naive_bayes(data3), SparseVector([], [], 3))
    assert zero.label is NEG  # equal priors, canonical tie-break
    skewed = M.fit_naive_bayes(ds([[1, 0], [1, 0], [0, 1]], [2, 2, 0]))
    assert M.predict(skewed, SparseVector([], [], 2)).label is POS
    with pytest.raises(ValueError):
        M.fit_naive_bayes(Dataset(sp.csr_matrix((2, 0)), [0, 1]))
    with pytest.raises(ValueError):
        M.NBParams(0.0)


# -- softmax -----------------------------------------------------------------------------


def test_softmax_gradient_finite_differences():
    rng = np.random.default_rng(7)
    X = sp.csr_matrix(rng.random((20, 5)) * (rng.random((20, 5)) < 0.6))
    y = rng.integers(0, 3, size=20)
    Y = np.eye(3)[y]
    sw = rng.random(20) + 0.5
    eps = 1e-6
    for _ in range(10):
        W = rng.normal(size=(3, 5))
        b = rng.normal(size=3)
        _, gW, gb = softmax_loss_grad(W, b, X, Y, sw, 0.01)
        num_W = np.zeros_like(W)
        for i in range(3):
            for j in range(5):
                Wp, Wm = W.copy(), W.copy()
                Wp[i, j] += eps
                Wm[i, j] -= eps
                num_W[i, j] = (softmax_loss_grad(Wp, b, X, Y, sw, 0.01)[0] - softmax_loss_grad(Wm, b, X, Y, sw, 0.01)[0]) / (2 * eps)
        num_b = np.zeros(3)
        for i in range(3):
            bp, bm = b.copy(), b.copy()
            bp[i] += eps
            bm[i] -= eps
            num_b[i] = (softmax_loss_grad(W, bp, X, Y, sw, 0.01)[0] - softmax_loss_grad(W, bm, X, Y, sw, 0.01)[0]) / (2 * eps)
        ana = np.concatenate([gW.ravel(), gb])
        num = np.concatenate([num_W.ravel(), num_b])
        assert np.linalg.norm(ana - num) / max(np.linalg.norm(ana) + np.linalg.norm(num), 1e-12) <= 1e-5


def test_softmax_examples():
    two = ds([[1, 0], [0, 1]], [0, 2])
    m = M.fit_softmax(two, M.SoftmaxParams(learning_rate=1.0, epochs=200, batch=2))
    assert m.predict_labels(two.X).tolist() == [0, 2]
    single = M.fit_softmax(ds([[1, 0], [0, 1]], [1, 1]))
    assert single.predict_labels(sp.csr_matrix(np.eye(2))).tolist() == [1, 1]
    np.testing.assert_allclose(m.class_scores(two.X).sum(axis=1), 1.0, atol=1e-9)


def test_softmax_loss_monotone_at_small_lr():
    rng = np.random.default_rng(3)
    X = sp.csr_matrix(rng.random((40, 6)))
    y = rng.integers(0, 3, size=40)
    m = M.fit_softmax(ds(X.toarray(), y), M.SoftmaxParams(learning_rate=1e-3, epochs=30, batch=40))
    assert all(b <= a + 1e-15 for a, b in zip(m.loss_history, m.loss_history[1:]))


def test_softmax_divergence_aborts():
    with pytest.raises(M.TrainingError):
        M.fit_softmax(ds([[1e200, 0], [0, 1e200]], [0, 2]), M.SoftmaxParams(learning_rate=1e200))


# -- SVM -------------------------------------------------------------------------------


def test_svm_examples():
    two = ds([[1, 0], [0, 1]], [0, 2])
    m = M.fit_linear_svm(two, M.SVMParams(epochs=100))
    margins = m.class_scores(two.X)
    assert margins[0, 0] > 0 > margins[0, 2] and margins[1, 2] > 0 > margins[1, 0]
    same = ds([[1, 1]] * 5, [2, 2, 2, 0, 1])
    m = M.fit_linear_svm(same, M.SVMParams(epochs=50))
    assert m.predict_labels(same.X).tolist() == [2] * 5
    single = M.fit_linear_svm(ds([[1, 0], [0, 1]], [0, 0]))
    assert single.predict_labels(sp.csr_matrix(np.eye(2))).tolist() == [0, 0]


def test_class_weights():
    from lexisent.models.base import class_weights
    np.testing.assert_allclose(class_weights(np.array([0, 0, 0, 2]), "balanced"), [4 / 6, 1.0, 2.0])
    np.testing.assert_allclose(class_weights(np.array([0, 1]), None), [1, 1, 1])


# -- trees --------------------------------------------------------------------------------


def _stub_tree(label: int) -> Tree:
    value = np.zeros((1, 3))
    value[0, label] = 1.0
    return Tree(np.array([-1]), np.zeros(1), np.array([-1]), np.array([-1]), value)


def test_forest_vote_rules():
    X = sp.csr_matrix((1, 2))
    assert ForestModel([_stub_tree(2), _stub_tree(2), _stub_tree(0)], 0, 2).predict_labels(X).tolist() == [2]
    assert ForestModel([_stub_tree(2), _stub_tree(0)], 0, 2).predict_labels(X).tolist() == [0]
    trees = [_stub_tree(2), _stub_tree(0), _stub_tree(1), _stub_tree(2)]
    a = ForestModel(trees, 0, 2).class_scores(X)
    b = ForestModel(trees[::-1], 0, 2).class_scores(X)
    np.testing.assert_array_equal(a, b)


def test_single_deep_tree_fits_distinct_points():
    rng = np.random.default_rng(1)
    X = rng.random((60, 8)) * (rng.random((60, 8)) < 0.5)
    X[:, 0] = np.arange(60) + 1.0  # makes every row distinct
    y = rng.integers(0, 3, size=60)
    m = M.fit_random_forest(ds(X, y), M.ForestParams(n_trees=1, max_depth=None, bootstrap=False), seed=4)
    assert (m.predict_labels(sp.csr_matrix(X)) == y).all()


def test_forest_thread_independence():
    rng = np.random.default_rng(2)
    X = rng.random((80, 15)) * (rng.random((80, 15)) < 0.3)
    y = rng.integers(0, 3, size=80)
    hp = M.ForestParams(n_trees=12)
    a = M.fit_random_forest(ds(X, y), hp, seed=9, threads=1)
    b = M.fit_random_forest(ds(X, y), hp, seed=9, threads=4)
    assert M.dumps_model(a) == M.dumps_model(b)
    c = M.fit_random_forest(ds(X, y), hp, seed=10)
    assert M.dumps_model(a) != M.dumps_model(c)


def test_trees_reference_valid_features():
    rng = np.random.default_rng(5)
    X = rng.random((50, 7)) * (rng.random((50, 7)) < 0.4)
    y = rng.integers(0, 3, size=50)
    m = M.fit_random_forest(ds(X, y), M.ForestParams(n_trees=5, max_depth=3), seed=1)
    for tree in m.trees:
        internal = tree.feature >= 0
        assert (tree.feature[internal] < 7).all()
        depth = {0: 0}
        for node in range(tree.n_nodes):
            if tree.feature[node] >= 0:
                depth[tree.left[node]] = depth[tree.right[node]] = depth[node] + 1
        assert max(depth.values()) <= 3


def test_gbt_examples():
    const = ds([[1, 0], [0, 1], [1, 1]], [1, 1, 1])
    assert M.fit_gbt(const, M.GBTParams(n_rounds=5)).predict_labels(const.X).tolist() == [1, 1, 1]
    xor = ds([[0, 0], [0, 1], [1, 0], [1, 1]], [0, 2, 2, 0])
    m = M.fit_gbt(xor, M.GBTParams(n_rounds=20, depth=2))
    assert m.predict_labels(xor.X).tolist() == [0, 2, 2, 0]
    probs = m.class_scores(xor.X)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)
    assert (probs >= 0).all()
    # additive margins: base + shrinkage * sum of round trees
    for rounds in (0, 1, 7, 20):
        manual = np.tile(m.base, (4, 1))
        for trees in m.rounds[:rounds]:
            for k, t in enumerate(trees):
                manual[:, k] += m.shrinkage * t.predict_value(xor.X)[:, 0]
        np.testing.assert_array_equal(m.margins(xor.X, rounds), manual)


# -- predict / persistence --------------------------------------------------------------


def _fixture_data():
    rng = np.random.default_rng(11)
    X = rng.random((40, 9)) * (rng.random((40, 9)) < 0.4)
    return ds(X, rng.integers(0, 3, size=40))


FAST = {"nb": None, "softmax": None, "svm": None, "rf": M.ForestParams(n_trees=5), "gbt": M.GBTParams(n_rounds=5)}


@pytest.mark.parametrize("name", M.MODEL_NAMES)
def test_round_trip(name, tmp_path):
    data = _fixture_data()
    model = M.fit(name, data, FAST[name], seed=3)
    path = tmp_path / f"{name}.json"
    M.save_model(model, path)
    loaded = M.load_model(path)
    np.testing.assert_array_equal(loaded.class_scores(data.X), model.class_scores(data.X))
    assert M.dumps_model(loaded) == path.read_text()
    assert json.loads(path.read_text())["variant"] == name
    with pytest.raises(M.DimensionError):
        M.predict(model, SparseVector([], [], 3))
    if model.probabilistic:
        np.testing.assert_allclose(model.class_scores(data.X).sum(axis=1), 1.0, atol=1e-9)


def test_corrupt_and_version_errors(tmp_path):
    text = M.dumps_model(M.fit("nb", _fixture_data()))
    with pytest.raises(M.CorruptModelError):
        M.loads_model(text[: len(text) // 2])
    doc = json.loads(text)
    doc["version"] = "99"
    with pytest.raises(M.ModelVersionError):
        M.loads_model(json.dumps(doc))
    doc = json.loads(text)
    doc["params"]["feature_log_prob"] = [[0.0]]
    with pytest.raises(M.CorruptModelError):
        M.loads_model(json.dumps(doc))


def test_fit_dispatch_errors():
    with pytest.raises(ValueError):
        M.fit("nope", _fixture_data())
