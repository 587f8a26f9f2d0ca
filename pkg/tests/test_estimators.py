import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from specboot.errors import DataError, DegenerateInputError, InsufficientDataError
from specboot.estimators import (
    covariance_traces,
    eigenvalue_cap,
    estimate_all,
    estimate_moments,
    estimate_varsigma_sq,
    sample_covariance_eigs,
    stable_rank_hat,
)
from specboot.sampling import paper_law, sample_dataset
from specboot.spectra import CovarianceSpec, make_covariance_setting

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_single_row_rank_one():
    x = np.array([[3.0, 4.0]])
    assert np.allclose(sample_covariance_eigs(x), [25.0, 0.0])


def test_identity_rows():
    assert np.allclose(sample_covariance_eigs(np.eye(2)), [0.5, 0.5])


def test_gram_and_direct_routes_agree():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((5, 3))
    direct = np.sort(np.linalg.eigvalsh(x.T @ x / 5))[::-1]
    assert np.allclose(sample_covariance_eigs(x), direct, atol=1e-10)
    xt = rng.standard_normal((3, 5))
    gram = np.sort(np.linalg.eigvalsh(xt @ xt.T / 3))[::-1]
    lam = sample_covariance_eigs(xt)
    assert np.allclose(lam[:3], gram, atol=1e-10) and np.all(lam[3:] == 0)
    full = np.sort(np.linalg.eigvalsh(xt.T @ xt / 3))[::-1]
    assert np.allclose(lam, np.maximum(full, 0), atol=1e-10)


def test_non_finite_rejected():
    with pytest.raises(DataError):
        sample_covariance_eigs(np.array([[1.0, np.inf]]))


def test_beta_hat_examples():
    x = np.array([[1.0, 2.0]] * 4)
    assert estimate_moments(x)[1] == 0.0
    x = np.array([[1.0, 0.0], [np.sqrt(3.0), 0.0]])
    assert estimate_moments(x)[1] == pytest.approx(2.0)
    with pytest.raises(InsufficientDataError):
        estimate_moments(np.ones((1, 3)))


def test_varsigma_examples():
    assert estimate_varsigma_sq(1.0, 2.0, 5.0, 7) == pytest.approx(14.0)
    assert estimate_varsigma_sq(1.0, 0.0, 1.0, 2) == 0.0
    with pytest.raises(DegenerateInputError):
        estimate_varsigma_sq(0.0, 1.0, 0.0, 3)


@settings(max_examples=80, deadline=None)
@given(
    st.floats(0.01, 10), st.floats(0, 50), st.floats(0, 50), st.floats(0.01, 100), st.integers(1, 500)
)
def test_varsigma_nonnegative_and_monotone(alpha, b1, b2, gamma, p):
    lo, hi = sorted((b1, b2))
    v_lo = estimate_varsigma_sq(alpha, lo, gamma, p)
    v_hi = estimate_varsigma_sq(alpha, hi, gamma, p)
    assert 0 <= v_lo <= v_hi


def test_stable_rank_examples():
    assert stable_rank_hat(np.zeros(5), 40) == 40
    assert stable_rank_hat(np.array([1.0, 1.0]), 4) == pytest.approx(4.0)


def test_eigenvalue_cap_examples():
    assert np.array_equal(eigenvalue_cap([5.0, 1.0], 3.0), [3.0, 1.0])
    assert np.array_equal(eigenvalue_cap([2.0, 1.0], 3.0), [2.0, 1.0])
    assert np.array_equal(eigenvalue_cap([3.5, 3.5], 3.0), [3.0, 3.0])


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(2, 8), st.integers(1, 8)), elements=finite))
def test_trace_identity_and_permutation(x):
    lam = sample_covariance_eigs(x)
    norms = np.einsum("ij,ij->i", x, x)
    assert lam.sum() == pytest.approx(norms.mean(), rel=1e-8, abs=1e-10)
    perm = x[::-1]
    assert estimate_moments(perm)[0] == pytest.approx(estimate_moments(x)[0], rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(
    arrays(float, st.tuples(st.integers(2, 8), st.integers(1, 8)), elements=st.floats(-5, 5)),
    st.floats(0.1, 10),
)
def test_stable_rank_scale_invariant(x, s):
    n = x.shape[0]
    a = stable_rank_hat(sample_covariance_eigs(x), n)
    b = stable_rank_hat(sample_covariance_eigs(s * x), n)
    assert b == pytest.approx(a, rel=1e-6)


def test_traces_match_eigenvalues():
    rng = np.random.default_rng(2)
    for shape in ((30, 10), (10, 30)):
        x = rng.standard_normal(shape)
        lam = sample_covariance_eigs(x)
        tr1, tr2 = covariance_traces(x)
        assert tr1 == pytest.approx(lam.sum()) and tr2 == pytest.approx(lam @ lam)


def test_alpha_hat_unbiased_on_s1():
    spec = make_covariance_setting("S1", 100)
    ratios = []
    for t in range(200):
        X = sample_dataset(spec, paper_law("i"), 200, seed=t)
        ratios.append(estimate_moments(X)[0] / spec.trace(2))
    assert 0.97 <= np.mean(ratios) <= 1.03


def test_stable_rank_identity_concentrates():
    spec = CovarianceSpec("eigen_profile", np.ones(100), 100)
    hits = 0
    for t in range(200):
        X = sample_dataset(spec, paper_law("i"), 400, seed=10_000 + t)
        hits += abs(estimate_all(X).r_hat / 100 - 1) <= 0.05
    assert hits >= 180


def test_bundle_fields_and_json():
    X = sample_dataset(make_covariance_setting("S1", 30), paper_law("i"), 20, seed=1)
    b = estimate_all(X)
    assert b.p == 30 and b.n == 20
    assert sum(v == 0 for v in b.sample_eigs) >= 10
    assert b.b_hat == pytest.approx(b.sample_eigs[0] + 1)
    # only the lower bound n/(n-1) is structural; with n < p the ratio is unbounded
    assert b.r_hat >= b.n / (b.n - 1)
    doc = json.loads(b.to_json())
    assert doc["varsigma_sq_hat"] == b.varsigma_sq_hat and len(doc["sample_eigs"]) == 30
