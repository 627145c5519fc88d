import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from submod_bandit.errors import InvalidArgumentError
from submod_bandit.linalg import SpdMatrix, new_ridge, quad_norm, rank_one_update

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def test_ridge_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        SpdMatrix.ridge(3, 0.0)
    with pytest.raises(InvalidArgumentError):
        SpdMatrix.ridge(0, 1.0)


def test_single_update_matches_hand_inverse():
    A = new_ridge(2, 1.0)
    ratio = A.rank_one_update(np.array([1.0, 0.0]))
    # A = diag(2, 1): det ratio 2, inverse diag(0.5, 1)
    assert ratio == pytest.approx(2.0)
    np.testing.assert_allclose(A.inverse, np.diag([0.5, 1.0]))
    assert A.quad_norm([1.0, 1.0]) == pytest.approx(np.sqrt(1.5))


def test_functional_update_leaves_input_untouched():
    A = new_ridge(2, 1.0)
    B = rank_one_update(A, [0.0, 2.0])
    np.testing.assert_allclose(A.entries, np.eye(2))
    np.testing.assert_allclose(B.entries, np.diag([1.0, 5.0]))
    assert quad_norm(B, [0.0, 1.0]) == pytest.approx(1 / np.sqrt(5))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.lists(arrays(float, 6, elements=finite), min_size=1, max_size=30),
       st.floats(0.01, 5))
def test_inverse_tracks_direct_inverse(d, xs, lam):
    A = SpdMatrix.ridge(d, lam)
    logdet = d * np.log(lam)
    for x in xs:
        logdet += np.log(A.rank_one_update(x[:d]))
    direct = np.linalg.inv(A.entries)
    assert np.max(np.abs(A.inverse - direct)) <= 1e-8 * max(1.0, np.max(np.abs(direct)))
    assert logdet == pytest.approx(np.linalg.slogdet(A.entries)[1], abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(arrays(float, (5, 3), elements=finite), arrays(float, 3, elements=finite))
def test_quad_norms_agree_with_scalar(xs, y):
    A = SpdMatrix.ridge(3, 0.5)
    for x in xs:
        A.rank_one_update(x)
    batch = A.quad_norms(np.vstack([y, xs]))
    assert batch[0] == pytest.approx(A.quad_norm(y), rel=1e-9, abs=1e-12)
    assert np.all(batch >= 0)


def test_scaled_update_equals_repeated_updates():
    rng = np.random.default_rng(1)
    x = rng.normal(size=4)
    A, B = SpdMatrix.ridge(4, 0.3), SpdMatrix.ridge(4, 0.3)
    A.rank_one_update(x, scale=7)
    for _ in range(7):
        B.rank_one_update(x)
    np.testing.assert_allclose(A.entries, B.entries)
    np.testing.assert_allclose(A.inverse, B.inverse, atol=1e-12)


def test_recompute_inverse_resets_drift():
    A = SpdMatrix.ridge(3, 1.0)
    A.rank_one_update([1.0, 2.0, 3.0])
    A.inverse[0, 0] += 1e-3
    assert A.inverse_error() > 1e-4
    A.recompute_inverse()
    assert A.inverse_error() < 1e-12
