"""Tests for the order of fractional integration under smooth Chebyshev trends.

A library and command line tool for semi-parametric (local Whittle type)
t and LM tests of the memory parameter of a time series whose deterministic
component is a smooth trend spanned by Chebyshev time polynomials, together
with order selection for the trend, exact simulators for fractional
processes, and a reproducible Monte Carlo harness for size and power
experiments.
"""

__version__ = "0.1.0"

from .chebyshev import (
    ChebyshevBasis,
    ChebyshevFit,
    build_basis,
    chebyshev_value,
    ols_fit,
    trend_curve,
)
from .spectral import Periodogram, fourier_frequencies, fourier_transform, periodogram
from .fracsim import (
    FracParams,
    SimulationError,
    arfima_acvf,
    frac_coeffs,
    frac_diff,
    simulate,
    simulate_type1,
    simulate_type2,
)
from .order_selection import (
    ExactFitError,
    IcTrace,
    PenaltyDiagnostic,
    check_penalty_assumptions,
    ic_value,
    penalty_bic,
    penalty_hq,
    select_order,
)
from .fractest import (
    DegenerateSeriesError,
    TestConfig,
    TestResult,
    asymptotic_local_power,
    chisq1_cdf,
    default_bandwidth,
    lm_statistic,
    lw_weights,
    normal_cdf,
    t_statistic,
    test_with_detrend,
)
from .montecarlo import (
    FIGURE_PRESETS,
    IcExperimentReport,
    McConfig,
    McReport,
    replicate_figures,
    run_ic_experiment,
    run_power_curve,
    run_size,
)

__all__ = [
    "__version__",
    "ChebyshevBasis",
    "ChebyshevFit",
    "build_basis",
    "chebyshev_value",
    "ols_fit",
    "trend_curve",
    "Periodogram",
    "fourier_frequencies",
    "fourier_transform",
    "periodogram",
    "FracParams",
    "SimulationError",
    "arfima_acvf",
    "frac_coeffs",
    "frac_diff",
    "simulate",
    "simulate_type1",
    "simulate_type2",
    "ExactFitError",
    "IcTrace",
    "PenaltyDiagnostic",
    "check_penalty_assumptions",
    "ic_value",
    "penalty_bic",
    "penalty_hq",
    "select_order",
    "DegenerateSeriesError",
    "TestConfig",
    "TestResult",
    "asymptotic_local_power",
    "chisq1_cdf",
    "default_bandwidth",
    "lm_statistic",
    "lw_weights",
    "normal_cdf",
    "t_statistic",
    "test_with_detrend",
    "FIGURE_PRESETS",
    "IcExperimentReport",
    "McConfig",
    "McReport",
    "replicate_figures",
    "run_ic_experiment",
    "run_power_curve",
    "run_size",
]
