"""Information-criterion selection of the Chebyshev trend order.

IC(k) = ln(sigma2_hat(k)) + (k + 1) A(T) is minimized over k = 0..k_star.
BIC uses A(T) = 2 ln(T) / T and Hannan-Quinn uses A(T) = 4 ln(ln T) / T.
Whether the selection is consistent depends on the interplay between A(T)
and the (unknown) true memory parameter; ``check_penalty_assumptions``
reports which regime a penalty falls in for a hypothesized delta0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import ols_fit
from .utils import as_series

__all__ = [
    "ExactFitError",
    "IcTrace",
    "PenaltyDiagnostic",
    "penalty_bic",
    "penalty_hq",
    "ic_value",
    "select_order",
    "check_penalty_assumptions",
]


class ExactFitError(Exception):
    """Signals sigma2_hat(k) = 0: the trend of order ``k`` fits exactly."""

    def __init__(self, k: int):
        super().__init__(f"trend order k={k} fits the series exactly (sigma2_hat = 0)")
        self.k = k


def penalty_bic(T: int) -> float:
    """BIC penalty A(T) = 2 ln(T) / T."""
    if T < 3:
        raise ValueError(f"sample size must be at least 3, got {T}")
    return 2.0 * math.log(T) / T


def penalty_hq(T: int) -> float:
    """Hannan-Quinn penalty A(T) = 4 ln(ln T) / T."""
    if T < 3:
        raise ValueError(f"sample size must be at least 3 (ln ln T > 0), got {T}")
    return 4.0 * math.log(math.log(T)) / T


# Residual mean square below this fraction of the data mean square is an
# exact fit up to floating-point noise (residual RMS < 1e-12 of data RMS).
_EXACT_FIT_REL = 1e-24


def ic_value(y, k: int, A: float) -> float:
    """IC(k) = ln(sigma2_hat(k)) + (k + 1) A for a trend of order ``k``.

    Raises ExactFitError when the fit is exact (sigma2_hat vanishes up to
    floating-point noise), so selection can treat the smallest
    exactly-fitting order as the winner without -inf arithmetic.
    """
    if not A > 0:
        raise ValueError(f"penalty value must be positive, got {A}")
    y = as_series(y)
    fit = ols_fit(y, k)
    if fit.sigma2_hat <= _EXACT_FIT_REL * float(np.mean(y * y)):
        raise ExactFitError(k)
    return math.log(fit.sigma2_hat) + (k + 1) * A


_PENALTIES = {"bic": penalty_bic, "hq": penalty_hq}


def _resolve_penalty(penalty, T: int) -> tuple[str, float]:
    if isinstance(penalty, str):
        name = penalty.lower()
        if name not in _PENALTIES:
            raise ValueError(f"penalty must be 'bic', 'hq', or a positive number, got {penalty!r}")
        return name, _PENALTIES[name](T)
    value = float(penalty)
    if not value > 0:
        raise ValueError(f"penalty value must be positive, got {value}")
    return "custom", value


@dataclass(frozen=True)
class IcTrace:
    """Full IC trace over k = 0..k_max and the selected order.

    ``ic_values`` holds -inf at orders flagged in ``exact_fit_orders``; ties
    and exact fits both resolve toward the smallest order.
    """

    k_max: int
    penalty_name: str
    penalty_value: float
    ic_values: np.ndarray
    k_hat: int
    exact_fit_orders: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "k_max": self.k_max,
            "penalty_name": self.penalty_name,
            "penalty_value": self.penalty_value,
            "ic_values": [float(v) for v in self.ic_values],
            "k_hat": self.k_hat,
            "exact_fit_orders": list(self.exact_fit_orders),
        }


def select_order(y, k_star: int, penalty="bic") -> IcTrace:
    """Minimize IC(k) over k = 0..k_star.

    Deterministic: ties break toward the smaller order, and if any order
    fits exactly the smallest such order wins.
    """
    y = as_series(y)
    if k_star < 0:
        raise ValueError(f"maximum order must be nonnegative, got {k_star}")
    if k_star + 1 > y.size:
        raise ValueError(f"maximum order k*={k_star} needs k*+1 <= T={y.size}")
    name, value = _resolve_penalty(penalty, y.size)

    ics = np.empty(k_star + 1)
    exact: list[int] = []
    for k in range(k_star + 1):
        try:
            ics[k] = ic_value(y, k, value)
        except ExactFitError:
            ics[k] = -np.inf
            exact.append(k)
    if exact:
        k_hat = exact[0]
    else:
        k_hat = int(np.flatnonzero(ics == ics.min())[0])
    return IcTrace(
        k_max=k_star,
        penalty_name=name,
        penalty_value=value,
        ic_values=ics,
        k_hat=k_hat,
        exact_fit_orders=tuple(exact),
    )


@dataclass(frozen=True)
class PenaltyDiagnostic:
    """Numerical check of the penalty-rate conditions for a given delta0.

    ``regime`` is "consistency" when A(T) vanishes while T^{1-2 delta0} A(T)
    grows (order selection consistent), "over_selection" when delta0 > 0 and
    the scaled penalty vanishes instead (selection exceeds the true order in
    the limit), and "indeterminate" otherwise.  Advisory only: the true
    delta0 is unknown in practice.
    """

    delta0: float
    T_grid: tuple[int, ...]
    penalty_values: np.ndarray
    scaled_values: np.ndarray
    penalty_vanishes: bool
    scaled_diverges: bool
    regime: str


def check_penalty_assumptions(penalty_fn, delta0: float, T_grid) -> PenaltyDiagnostic:
    """Evaluate A(T) and T^{1-2 delta0} A(T) on a grid and classify the regime."""
    grid = tuple(int(T) for T in T_grid)
    if len(grid) < 2 or any(T < 3 for T in grid) or sorted(grid) != list(grid):
        raise ValueError("T_grid must be an increasing grid of sizes >= 3 with length >= 2")
    if not abs(delta0) < 0.5:
        raise ValueError(f"delta0 must lie in (-0.5, 0.5), got {delta0}")
    a = np.array([float(penalty_fn(T)) for T in grid])
    if np.any(a <= 0):
        raise ValueError("penalty function must be positive on the grid")
    scaled = np.array([T ** (1.0 - 2.0 * delta0) for T in grid]) * a
    vanishes = a[-1] < a[0] and a[-1] < a[-2]
    diverges = scaled[-1] > scaled[-2] and scaled[-1] > scaled[0]
    if vanishes and diverges:
        regime = "consistency"
    elif vanishes and delta0 > 0 and scaled[-1] < scaled[-2]:
        regime = "over_selection"
    else:
        regime = "indeterminate"
    return PenaltyDiagnostic(
        delta0=delta0,
        T_grid=grid,
        penalty_values=a,
        scaled_values=scaled,
        penalty_vanishes=bool(vanishes),
        scaled_diverges=bool(diverges),
        regime=regime,
    )
