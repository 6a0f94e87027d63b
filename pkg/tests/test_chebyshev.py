"""Chebyshev basis construction and OLS trend fitting."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracsmooth import build_basis, chebyshev_value, ols_fit, trend_curve


def dense_ols(y, k):
    """Independent normal-equation solve, used as the brute-force oracle."""
    X = build_basis(len(y), k).columns
    beta = np.linalg.solve(X.T @ X, X.T @ y)
    resid = y - X @ beta
    return beta, resid


def test_order_zero_is_intercept():
    assert chebyshev_value(0, 7, 100) == 1.0
    assert chebyshev_value(0, 1, 2) == 1.0


def test_value_direct_evaluation():
    assert chebyshev_value(1, 1, 4) == pytest.approx(1.3065629648763766, abs=1e-12)
    assert chebyshev_value(1, 4, 4) == pytest.approx(-1.3065629648763766, abs=1e-12)


def test_value_time_out_of_range():
    with pytest.raises(ValueError):
        chebyshev_value(1, 0, 4)
    with pytest.raises(ValueError):
        chebyshev_value(1, 5, 4)
    with pytest.raises(ValueError):
        chebyshev_value(-1, 1, 4)


def test_basis_order_zero_is_all_ones():
    basis = build_basis(4, 0)
    assert basis.columns.shape == (4, 1)
    np.testing.assert_array_equal(basis.columns[:, 0], 1.0)


def test_basis_matches_pointwise_values():
    basis = build_basis(9, 3)
    for n in range(4):
        for t in range(1, 10):
            assert basis.columns[t - 1, n] == pytest.approx(chebyshev_value(n, t, 9), abs=1e-15)


def test_basis_orthonormal_64_3():
    X = build_basis(64, 3).columns
    gram = X.T @ X / 64
    assert np.abs(gram - np.eye(4)).max() < 1e-10


def test_basis_more_columns_than_rows():
    with pytest.raises(ValueError):
        build_basis(4, 4)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(min_value=2, max_value=300), st.data())
def test_basis_orthonormal_property(T, data):
    k = data.draw(st.integers(min_value=0, max_value=min(T - 1, 12)))
    X = build_basis(T, k).columns
    gram = X.T @ X / T
    assert np.abs(gram - np.eye(k + 1)).max() < 1e-10


def test_ols_constant_series():
    fit = ols_fit(np.full(10, 3.5), 0)
    assert fit.beta_hat[0] == pytest.approx(3.5, abs=1e-14)
    assert np.abs(fit.residuals).max() == 0.0
    assert fit.sigma2_hat == 0.0


def test_ols_reproduces_basis_column():
    T = 32
    y = build_basis(T, 1).columns[:, 1]
    fit = ols_fit(y, 2)
    np.testing.assert_allclose(fit.beta_hat, [0.0, 1.0, 0.0], atol=1e-12)
    assert np.abs(fit.residuals).max() < 1e-10


def test_ols_matches_dense_solver():
    rng = np.random.default_rng(42)
    y = rng.standard_normal(16)
    fit = ols_fit(y, 3)
    beta, resid = dense_ols(y, 3)
    np.testing.assert_allclose(fit.beta_hat, beta, atol=1e-10)
    np.testing.assert_allclose(fit.residuals, resid, atol=1e-10)
    assert fit.sigma2_hat == pytest.approx(float(resid @ resid) / 16, rel=1e-12)


def test_orthonormal_shortcut_equals_dense_route():
    rng = np.random.default_rng(7)
    for T, k in ((50, 4), (260, 10), (512, 6)):
        y = rng.standard_normal(T)
        beta, _ = dense_ols(y, k)
        np.testing.assert_allclose(ols_fit(y, k).beta_hat, beta, atol=1e-9)


def test_projection_idempotence():
    rng = np.random.default_rng(3)
    y = rng.standard_normal(40)
    fit = ols_fit(y, 4)
    refit = ols_fit(y - fit.residuals, 4)
    np.testing.assert_allclose(refit.beta_hat, fit.beta_hat, atol=1e-10)
    assert np.abs(refit.residuals).max() < 1e-10


def test_residual_mean_zero_with_intercept():
    rng = np.random.default_rng(11)
    for k in (0, 2, 7):
        fit = ols_fit(rng.standard_normal(128) + 5.0, k)
        assert abs(fit.residuals.mean()) < 1e-10


def test_sigma2_non_increasing_in_k():
    rng = np.random.default_rng(5)
    y = rng.standard_normal(100)
    sig = [ols_fit(y, k).sigma2_hat for k in range(8)]
    for a, b in zip(sig, sig[1:]):
        assert b <= a * (1 + 1e-12)


def test_residuals_orthogonal_to_basis():
    rng = np.random.default_rng(9)
    y = 10.0 * rng.standard_normal(64)
    fit = ols_fit(y, 3)
    X = build_basis(64, 3).columns
    bound = 1e-8 * 64 * np.abs(y).max()
    assert np.abs(X.T @ fit.residuals).max() < bound


def test_trend_curve_matches_basis_combination():
    T = 20
    beta = np.array([1.0, -2.0, 0.5])
    expected = build_basis(T, 2).columns @ beta
    np.testing.assert_allclose(trend_curve(T, beta), expected, atol=0)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        ols_fit([1.0, np.nan, 2.0], 0)
    with pytest.raises(ValueError):
        ols_fit([1.0], 0)
    with pytest.raises(ValueError):
        ols_fit(np.ones((3, 2)), 0)
    with pytest.raises(ValueError):
        ols_fit(np.ones(4), 4)
