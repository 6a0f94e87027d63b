"""Discrete Fourier transform, Fourier frequencies, and the periodogram.

Conventions: w_z(lambda) = (2 pi T)^{-1/2} sum_{t=1}^{T} z_t exp(i lambda t)
and I_z(lambda) = |w_z(lambda)|^2, evaluated at the Fourier frequencies
lambda_j = 2 pi j / T.  The mean frequency j = 0 is never stored; test
statistics only consume j = 1..m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .utils import as_series

__all__ = [
    "Periodogram",
    "fourier_frequencies",
    "fourier_transform",
    "periodogram",
]


def fourier_frequencies(T: int, m: int) -> np.ndarray:
    """Fourier frequencies 2 pi j / T for j = 1..m, requiring m <= floor(T/2)."""
    if T < 2:
        raise ValueError(f"sample size must be at least 2, got {T}")
    if not 1 <= m <= T // 2:
        raise ValueError(f"bandwidth m={m} outside 1..floor(T/2)={T // 2}")
    return 2.0 * np.pi * np.arange(1, m + 1) / T


def fourier_transform(z, j: int) -> complex:
    """Discrete Fourier transform of ``z`` at frequency 2 pi j / T.

    Uses the normalization (2 pi T)^{-1/2} and phase exp(i lambda t) with
    time starting at t = 1.
    """
    z = as_series(z)
    T = z.size
    if not 0 <= j <= T - 1:
        raise ValueError(f"frequency index j={j} outside 0..{T - 1}")
    lam = 2.0 * np.pi * j / T
    # ifft supplies sum_{s=0}^{T-1} z_{s+1} exp(+i lambda s); shift to t = s+1.
    forward_sum = T * np.fft.ifft(z)[j]
    return complex(np.exp(1j * lam) * forward_sum / np.sqrt(2.0 * np.pi * T))


@dataclass(frozen=True)
class Periodogram:
    """Periodogram ordinates I_z(lambda_j) at the first ``m`` Fourier frequencies."""

    T: int
    m: int
    lambdas: np.ndarray
    ordinates: np.ndarray


def periodogram(z, m: int) -> Periodogram:
    """Periodogram of ``z`` at j = 1..m via a mixed-radix fast transform.

    Any series length is supported (not just powers of two); the result
    matches the direct O(T^2) sum to near machine precision.
    """
    z = as_series(z)
    lambdas = fourier_frequencies(z.size, m)
    ordinates = _periodogram_batch(z[np.newaxis, :], m)[0]
    return Periodogram(T=z.size, m=m, lambdas=lambdas, ordinates=ordinates)


def _periodogram_batch(rows: np.ndarray, m: int) -> np.ndarray:
    """Row-wise periodogram ordinates at j = 1..m for a (reps, T) array.

    |fft(z)[j]| equals |sum_t z_t e^{i lambda_j t}| for real rows, so the
    phase convention drops out of the squared modulus.
    """
    T = rows.shape[1]
    coef = np.fft.fft(rows, axis=1)[:, 1 : m + 1]
    return (coef.real**2 + coef.imag**2) / (2.0 * np.pi * T)
