import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cohypo.compose import CompositionOp, compose, featurize_dataset
from cohypo.datasets import PairRecord
from cohypo.errors import ContractError
from cohypo.sgns import EmbeddingMatrix

vec = st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=8)


def test_worked_examples():
    np.testing.assert_array_equal(
        compose([1, 2], [3, 4], CompositionOp.ADD), [4, 6])
    np.testing.assert_array_equal(
        compose([1, 2], [3, 4], CompositionOp.CC), [1, 2, 3, 4])
    np.testing.assert_array_equal(
        compose([5, 6], [5, 6], CompositionOp.DIFF), [0, 0])
    np.testing.assert_array_equal(
        compose([1, 2], [0, 0], CompositionOp.MUL), [0, 0])
    np.testing.assert_array_equal(
        compose([1, 2], [3, 4], CompositionOp.SING), [3, 4])


def test_diff_order_is_first_minus_second():
    np.testing.assert_array_equal(
        compose([5, 1], [2, 3], CompositionOp.DIFF), [3, -2])


def test_dimension_mismatch():
    with pytest.raises(ContractError):
        compose([1, 2], [1, 2, 3], CompositionOp.ADD)


def test_parse():
    assert CompositionOp.parse("CC") is CompositionOp.CC
    assert CompositionOp.parse("diff") is CompositionOp.DIFF
    with pytest.raises(ContractError):
        CompositionOp.parse("tensor")


@given(vec, vec)
def test_add_mul_commutative_cc_diff_not(a, b):
    n = min(len(a), len(b))
    u, v = np.array(a[:n]), np.array(b[:n])
    np.testing.assert_array_equal(compose(u, v, CompositionOp.ADD),
                                  compose(v, u, CompositionOp.ADD))
    np.testing.assert_array_equal(compose(u, v, CompositionOp.MUL),
                                  compose(v, u, CompositionOp.MUL))
    if not np.array_equal(u, v):
        assert not np.array_equal(compose(u, v, CompositionOp.CC),
                                  compose(v, u, CompositionOp.CC))
        if not np.array_equal(u - v, v - u):
            assert not np.array_equal(compose(u, v, CompositionOp.DIFF),
                                      compose(v, u, CompositionOp.DIFF))


@given(vec, vec)
def test_no_nan_from_finite_inputs(a, b):
    n = min(len(a), len(b))
    u, v = np.array(a[:n]), np.array(b[:n])
    for op in CompositionOp:
        assert np.isfinite(compose(u, v, op)).all()


@pytest.fixture
def emb(rng):
    words = ["alpha", "beta", "gamma"]
    return EmbeddingMatrix(words, rng.normal(size=(3, 4)), np.zeros((3, 4)))


def records(pairs):
    return [PairRecord(w1, w2, label, "cohyp" if label else "random")
            for w1, w2, label in pairs]


def test_featurize_excludes_and_reports_oov(emb):
    recs = records([("alpha", "beta", 1), ("alpha", "missing", 0),
                    ("beta", "gamma", 0)])
    X, y, kept, report = featurize_dataset(recs, emb, CompositionOp.ADD)
    assert X.shape == (2, 4)
    assert y.tolist() == [1, 0]
    assert kept.tolist() == [0, 2]
    assert report.n_excluded == 1
    assert report.excluded[0][:2] == ("alpha", "missing")
    assert report.excluded[0][2] == ["missing"]


def test_featurize_cc_width(emb):
    recs = records([("alpha", "beta", 1)])
    X, _, _, _ = featurize_dataset(recs, emb, CompositionOp.CC)
    assert X.shape == (1, 8)


def test_featurize_matches_per_pair_compose(emb):
    recs = records([("alpha", "beta", 1), ("gamma", "alpha", 0)])
    for op in CompositionOp:
        X, _, _, _ = featurize_dataset(recs, emb, op)
        for row, rec in zip(X, recs):
            expected = compose(emb.vector(rec.word1), emb.vector(rec.word2), op)
            np.testing.assert_array_equal(row, expected)


def test_featurize_all_oov(emb):
    recs = records([("nope", "nor", 1)])
    X, y, kept, report = featurize_dataset(recs, emb, CompositionOp.ADD)
    assert X.shape == (0, 4)
    assert report.n_excluded == 1


def test_l2_normalize_flag(emb):
    recs = records([("alpha", "beta", 1)])
    X, _, _, _ = featurize_dataset(recs, emb, CompositionOp.ADD, l2_normalize=True)
    v1 = emb.vector("alpha")
    v2 = emb.vector("beta")
    expected = v1 / np.linalg.norm(v1) + v2 / np.linalg.norm(v2)
    np.testing.assert_allclose(X[0], expected)
