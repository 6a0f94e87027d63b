"""Chebyshev time-polynomial basis and OLS trend fitting.

The basis functions are trigonometric polynomials in rescaled time,
orthonormal in sample under the inner product (1/T) sum_t x_t y_t.  The
constant (order-0) column is fixed at 1 so that orthonormality holds
exactly; rescaling that column changes only the intercept coefficient,
never the fitted trend or the residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .utils import as_series

__all__ = [
    "ChebyshevBasis",
    "ChebyshevFit",
    "chebyshev_value",
    "build_basis",
    "trend_curve",
    "ols_fit",
]


def chebyshev_value(n: int, t: int, T: int) -> float:
    """Evaluate the order-``n`` Chebyshev time polynomial at time ``t``.

    Returns 1 for n = 0 and sqrt(2) * cos(n * pi * (t - 0.5) / T) for
    n >= 1, with t running over 1..T.
    """
    if n < 0:
        raise ValueError(f"polynomial order must be nonnegative, got {n}")
    if T < 1:
        raise ValueError(f"sample size must be positive, got {T}")
    if not 1 <= t <= T:
        raise ValueError(f"time index t={t} outside 1..{T}")
    if n == 0:
        return 1.0
    return float(np.sqrt(2.0) * np.cos(n * np.pi * (t - 0.5) / T))


@dataclass(frozen=True)
class ChebyshevBasis:
    """T x (k+1) design matrix of Chebyshev columns P(0), ..., P(k)."""

    T: int
    k: int
    columns: np.ndarray


def build_basis(T: int, k: int) -> ChebyshevBasis:
    """Build the orthonormal Chebyshev basis of trend order ``k``.

    Requires k + 1 <= T, otherwise the design matrix cannot have full
    column rank.
    """
    if T < 1:
        raise ValueError(f"sample size must be positive, got {T}")
    if k < 0:
        raise ValueError(f"trend order must be nonnegative, got {k}")
    if k + 1 > T:
        raise ValueError(f"trend order k={k} needs k+1 <= T, got T={T}")
    t = np.arange(1, T + 1)
    orders = np.arange(k + 1)
    cols = np.sqrt(2.0) * np.cos(np.pi * np.outer(t - 0.5, orders) / T)
    cols[:, 0] = 1.0
    return ChebyshevBasis(T=T, k=k, columns=cols)


def trend_curve(T: int, beta) -> np.ndarray:
    """Deterministic trend sum_n beta[n] * P_t(n) for t = 1..T."""
    beta = np.asarray(beta, dtype=float)
    if beta.ndim != 1 or beta.size == 0:
        raise ValueError("beta must be a non-empty 1-d coefficient vector")
    return build_basis(T, beta.size - 1).columns @ beta


@dataclass(frozen=True)
class ChebyshevFit:
    """OLS fit of a Chebyshev trend: coefficients, residuals, residual MSE."""

    k: int
    beta_hat: np.ndarray
    residuals: np.ndarray
    sigma2_hat: float


def ols_fit(y, k: int) -> ChebyshevFit:
    """Fit a Chebyshev trend of order ``k`` to ``y`` by OLS.

    Because the basis is orthonormal in sample, the estimator reduces to
    beta_hat[n] = (1/T) sum_t y_t P_t(n), which is the production path
    here; it coincides with the dense normal-equation solution.

    Parameters
    ----------
    y : array_like
        Observed series, length T >= 2, all finite.
    k : int
        Trend order, k + 1 <= T.

    Returns
    -------
    ChebyshevFit
        Coefficients, residuals u_hat = y - X beta_hat, and
        sigma2_hat = (1/T) sum_t u_hat_t^2.
    """
    y = as_series(y)
    T = y.size
    basis = build_basis(T, k)
    beta_hat = basis.columns.T @ y / T
    residuals = y - basis.columns @ beta_hat
    sigma2_hat = float(residuals @ residuals) / T
    return ChebyshevFit(k=k, beta_hat=beta_hat, residuals=residuals, sigma2_hat=sigma2_hat)
