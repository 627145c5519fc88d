import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from submod_bandit.errors import InvalidArgumentError
from submod_bandit.estimator import (LAMBDA_FLOOR, RlsState, absorb, confidence_radius_adaptive,
                                     default_lambda, pairwise_width, single_width, static_radius)


def direct_radius(X, lam, delta, R, S, extra=0.0):
    d = X.shape[1]
    A = lam * np.eye(d) + X.T @ X
    logdet = np.linalg.slogdet(A)[1]
    inner = 0.5 * logdet - 0.5 * d * math.log(lam) + extra + math.log(1 / delta)
    return R * math.sqrt(2 * inner) + math.sqrt(lam) * S, A


def test_fresh_state_radius_is_regularization_term():
    st_ = RlsState(3, 0.25, 0.1, R=1.0)
    # log det A = log det(lam I): only the log(1/delta) and sqrt(lam) S terms survive
    assert st_.confidence_radius_adaptive() == pytest.approx(math.sqrt(2 * math.log(10)) + 0.5)
    np.testing.assert_allclose(st_.w_hat, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 25), st.floats(0.05, 2), st.integers(0, 10_000))
def test_radius_and_estimate_match_direct_formulas(d, t, lam, seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 1, size=(t, d))
    r = rng.normal(size=t)
    s = RlsState(d, lam, 0.05, R=0.3, S_bound=1.0)
    for x, y in zip(X, r):
        absorb(s, x, y)
    C, A = direct_radius(X, lam, 0.05, 0.3, 1.0)
    assert confidence_radius_adaptive(s) == pytest.approx(C, rel=1e-9)
    np.testing.assert_allclose(s.w_hat, np.linalg.solve(A, X.T @ r), atol=1e-9)
    y = rng.normal(size=d)
    C2, _ = direct_radius(X, lam, 0.05, 0.3, 1.0, extra=math.log(2))
    assert single_width(s, y) == pytest.approx(C2 * math.sqrt(y @ np.linalg.solve(A, y)), rel=1e-8)
    z = rng.normal(size=d)
    expect = C * math.sqrt((z - y) @ np.linalg.solve(A, z - y))
    assert pairwise_width(s, y, z) == pytest.approx(expect, rel=1e-8)
    assert s.t == t


def test_absorb_repeated_equals_individual_absorbs():
    x = np.array([0.2, 0.5])
    a, b = RlsState(2, 1.0, 0.1, 0.1), RlsState(2, 1.0, 0.1, 0.1)
    a.absorb_repeated(x, 3, 0.9)
    for r in (0.2, 0.3, 0.4):
        b.absorb(x, r)
    np.testing.assert_allclose(a.w_hat, b.w_hat)
    assert a.log_det_A == pytest.approx(b.log_det_A)
    assert a.t == b.t == 3


def test_rejects_non_finite_and_bad_args():
    s = RlsState(2, 1.0, 0.1, 0.1)
    with pytest.raises(InvalidArgumentError):
        s.absorb([np.nan, 0.0], 1.0)
    with pytest.raises(InvalidArgumentError):
        s.absorb([0.0, 0.0], math.inf)
    with pytest.raises(InvalidArgumentError):
        RlsState(2, 1.0, 1.5, 0.1)
    with pytest.raises(InvalidArgumentError):
        RlsState(2, 1.0, 0.1, -1.0)


def test_static_radius_frozen_value():
    # R sqrt(2 log(pi^2 t^2 kappa n^2 / (3 delta))) at t=2, kappa=3, n=5, delta=0.1
    assert static_radius(2, 3, 5, 0.1, 1.0) == pytest.approx(4.288872824106804, rel=1e-12)
    assert static_radius(2, 3, 5, 0.1, 0.5) == pytest.approx(4.288872824106804 / 2, rel=1e-12)
    with pytest.raises(InvalidArgumentError):
        static_radius(0, 3, 5, 0.1, 1.0)


def test_static_radius_grows_with_t():
    vals = [static_radius(t, 3, 10, 0.1, 1.0) for t in (1, 10, 100, 1000)]
    assert vals == sorted(vals)


def test_default_lambda():
    assert default_lambda(0.05, 1.0, 0.1) == pytest.approx(2 * 0.0025 * math.log(10))
    assert default_lambda(5.0, 1.0, 0.1) == 1.0
    assert default_lambda(0.0, 1.0, 0.1) == LAMBDA_FLOOR
