"""Monte Carlo harness: size, local power curves, and order-selection experiments.

Replications are embarrassingly parallel.  Each replication draws from its
own generator stream, derived from (seed, cell index, replication index) via
``numpy.random.SeedSequence`` spawn keys, and work is dispatched in fixed-size
chunks, so results are bit-identical for any worker count or schedule.
Aggregation is a sum of rejection indicators.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import ndtri

from .chebyshev import build_basis, trend_curve
from .fracsim import SIM_METHODS, _type1_embed_batch, _type2_batch
from .fractest import (
    ALTERNATIVES,
    _t_from_ordinates,
    asymptotic_local_power,
    default_bandwidth,
)
from .order_selection import _resolve_penalty
from .spectral import _periodogram_batch

__all__ = [
    "McConfig",
    "McReport",
    "IcExperimentReport",
    "run_size",
    "run_power_curve",
    "run_ic_experiment",
    "replicate_figures",
    "FIGURE_PRESETS",
]

# Replications per dispatch unit; fixed so chunk boundaries (and hence all
# floating-point batch arithmetic) never depend on the worker count.
CHUNK_SIZE = 256

WORKERS_ENV_VAR = "FRACSMOOTH_WORKERS"

DEFAULT_SEED = 12345


@dataclass(frozen=True)
class McConfig:
    """One Monte Carlo experiment: DGP, test configuration, and seeding."""

    T: int
    reps: int
    delta_grid: tuple[float, ...] = (0.0,)
    beta: tuple[float, ...] = ()
    k_fit: int | str = 1
    delta0: float = 0.0
    alpha: float = 0.65
    m: int | None = None
    level: float = 0.05
    seed: int = DEFAULT_SEED
    sim_method: str = "type1"
    alternative: str = "two-sided"
    k_star: int = 10
    penalty: str | float = "bic"
    innovation_sd: float = 1.0
    workers: int | None = None

    def __post_init__(self):
        if self.T < 2:
            raise ValueError(f"T must be at least 2, got {self.T}")
        if self.reps < 1:
            raise ValueError(f"reps must be positive, got {self.reps}")
        if not self.delta_grid:
            raise ValueError("delta_grid must be non-empty")
        if any(not abs(d) < 0.5 for d in self.delta_grid):
            raise ValueError("delta_grid values must lie in (-0.5, 0.5)")
        if self.sim_method not in SIM_METHODS:
            raise ValueError(f"sim_method must be one of {SIM_METHODS}, got {self.sim_method!r}")
        if self.alternative not in ALTERNATIVES:
            raise ValueError(f"alternative must be one of {ALTERNATIVES}, got {self.alternative!r}")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        if isinstance(self.k_fit, str) and self.k_fit != "auto":
            raise ValueError(f"k_fit must be an integer or 'auto', got {self.k_fit!r}")
        if not abs(self.delta0) < 0.5:
            raise ValueError(f"delta0 must lie in (-0.5, 0.5), got {self.delta0}")
        if self.m is not None and not 1 <= self.m <= self.T // 2:
            raise ValueError(f"bandwidth m={self.m} outside 1..floor(T/2)={self.T // 2}")

    def bandwidth(self) -> int:
        m = self.m if self.m is not None else default_bandwidth(self.T, self.alpha)
        if not 1 <= m <= self.T // 2:
            raise ValueError(f"bandwidth m={m} outside 1..floor(T/2)={self.T // 2}")
        return m

    def resolved_workers(self) -> int:
        if self.workers is not None:
            return max(1, int(self.workers))
        return max(1, int(os.environ.get(WORKERS_ENV_VAR, "1")))

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "reps": self.reps,
            "delta_grid": list(self.delta_grid),
            "beta": list(self.beta),
            "k_fit": self.k_fit,
            "delta0": self.delta0,
            "alpha": self.alpha,
            "m": self.m,
            "level": self.level,
            "seed": self.seed,
            "sim_method": self.sim_method,
            "alternative": self.alternative,
            "k_star": self.k_star,
            "penalty": self.penalty,
            "innovation_sd": self.innovation_sd,
        }


@dataclass(frozen=True)
class McReport:
    """Per-delta rejection frequencies with MC errors and asymptotic overlay."""

    config: McConfig
    m: int
    delta_grid: np.ndarray
    c_values: np.ndarray
    reject_counts: np.ndarray
    rejection_freq: np.ndarray
    mc_se: np.ndarray
    asymptotic_power: np.ndarray
    cell_keys: tuple[tuple[int, int], ...]
    elapsed_seconds: float = field(compare=False)

    CSV_COLUMNS = ("delta", "c", "rejection_freq", "mc_se", "asymptotic_power")

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        return [
            (
                float(self.delta_grid[i]),
                float(self.c_values[i]),
                float(self.rejection_freq[i]),
                float(self.mc_se[i]),
                float(self.asymptotic_power[i]),
            )
            for i in range(self.delta_grid.size)
        ]


@dataclass(frozen=True)
class IcExperimentReport:
    """Empirical distribution of the selected trend order over replications."""

    config: McConfig
    counts: np.ndarray
    frequencies: np.ndarray
    cell_keys: tuple[tuple[int, int], ...]
    elapsed_seconds: float = field(compare=False)


def _rep_normals(seed: int, cell: int, lo: int, hi: int, n: int) -> np.ndarray:
    """Stack per-replication standard normal draws for replications lo..hi-1.

    Stream r is default_rng(SeedSequence(entropy=seed, spawn_key=(cell, r))),
    independent of chunking and scheduling.
    """
    rows = np.empty((hi - lo, n))
    for i, r in enumerate(range(lo, hi)):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(cell, r)))
        rows[i] = rng.standard_normal(n)
    return rows


def _simulate_chunk(task: dict, lo: int, hi: int) -> np.ndarray:
    """Simulate the observed series Y for replications lo..hi-1 of one cell."""
    T = task["T"]
    delta = task["delta"]
    sd = task["innovation_sd"]
    seed, cell = task["seed"], task["cell"]
    if task["sim_method"] == "type1":
        normals = _rep_normals(seed, cell, lo, hi, 2 * T)
        U = _type1_embed_batch(delta, sd, T, normals)
    else:
        eta = sd * _rep_normals(seed, cell, lo, hi, T)
        U = _type2_batch(delta, eta)
    beta = task["beta"]
    if beta:
        U = U + trend_curve(T, np.asarray(beta))
    return U


def _khat_batch(Y: np.ndarray, k_star: int, penalty_value: float) -> np.ndarray:
    """Row-wise IC-selected trend order, consistent with ``select_order``."""
    T = Y.shape[1]
    X = build_basis(T, k_star).columns
    B = Y @ X / T
    ics = np.empty((Y.shape[0], k_star + 1))
    for k in range(k_star + 1):
        resid = Y - B[:, : k + 1] @ X[:, : k + 1].T
        sigma2 = (resid * resid).sum(axis=1) / T
        with np.errstate(divide="ignore"):
            ics[:, k] = np.log(sigma2) + (k + 1) * penalty_value
    return np.argmin(ics, axis=1)


def _detrend_rows(Y: np.ndarray, k_by_row: np.ndarray, k_max: int) -> np.ndarray:
    """OLS residuals row by row, allowing a different trend order per row."""
    T = Y.shape[1]
    X = build_basis(T, k_max).columns
    B = Y @ X / T
    resid = np.empty_like(Y)
    for k in np.unique(k_by_row):
        rows = k_by_row == k
        resid[rows] = Y[rows] - B[rows, : k + 1] @ X[:, : k + 1].T
    return resid


def _reject_chunk(task: dict, lo: int, hi: int) -> int:
    """Number of rejections among replications lo..hi-1 of one cell."""
    Y = _simulate_chunk(task, lo, hi)
    if task["k_fit"] == "auto":
        khat = _khat_batch(Y, task["k_star"], task["penalty_value"])
        resid = _detrend_rows(Y, khat, task["k_star"])
    else:
        k = task["k_fit"]
        resid = _detrend_rows(Y, np.full(Y.shape[0], k), k)
    m = task["m"]
    t = _t_from_ordinates(_periodogram_batch(resid, m), task["T"], task["delta0"], m)
    alternative, level = task["alternative"], task["level"]
    if alternative == "two-sided":
        rejected = np.abs(t) > ndtri(1.0 - level / 2.0)
    elif alternative == "greater":
        rejected = t > ndtri(1.0 - level)
    else:
        rejected = t < ndtri(level)
    return int(rejected.sum())


def _khat_chunk(task: dict, lo: int, hi: int) -> np.ndarray:
    """Selected-order counts (length k_star + 1) for replications lo..hi-1."""
    Y = _simulate_chunk(task, lo, hi)
    khat = _khat_batch(Y, task["k_star"], task["penalty_value"])
    return np.bincount(khat, minlength=task["k_star"] + 1)


def _chunks(reps: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + CHUNK_SIZE, reps)) for lo in range(0, reps, CHUNK_SIZE)]


def _dispatch(worker, task: dict, reps: int, workers: int):
    """Run ``worker`` over fixed-size chunks, optionally in parallel."""
    spans = _chunks(reps)
    if workers <= 1 or len(spans) <= 1:
        return [worker(task, lo, hi) for lo, hi in spans]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, task, lo, hi) for lo, hi in spans]
        return [f.result() for f in futures]


def _cell_task(config: McConfig, delta: float, cell: int) -> dict:
    task = {
        "T": config.T,
        "m": config.bandwidth(),
        "delta": float(delta),
        "delta0": config.delta0,
        "beta": tuple(config.beta),
        "k_fit": config.k_fit,
        "k_star": config.k_star,
        "level": config.level,
        "alternative": config.alternative,
        "sim_method": config.sim_method,
        "innovation_sd": config.innovation_sd,
        "seed": config.seed,
        "cell": cell,
    }
    if config.k_fit == "auto":
        task["penalty_value"] = _resolve_penalty(config.penalty, config.T)[1]
    return task


def run_power_curve(config: McConfig) -> McReport:
    """Rejection frequency of the configured test at every delta in the grid.

    Emits, for each grid point, the frequency, its binomial MC standard
    error, and the asymptotic local power at c = (delta - delta0) sqrt(m).
    """
    start = time.perf_counter()
    m = config.bandwidth()
    workers = config.resolved_workers()
    counts = np.empty(len(config.delta_grid), dtype=int)
    keys = []
    for cell, delta in enumerate(config.delta_grid):
        task = _cell_task(config, delta, cell)
        counts[cell] = sum(_dispatch(_reject_chunk, task, config.reps, workers))
        keys.append((config.seed, cell))
    grid = np.asarray(config.delta_grid, dtype=float)
    freq = counts / config.reps
    c_values = (grid - config.delta0) * np.sqrt(m)
    overlay = np.array(
        [asymptotic_local_power(c, config.level, config.alternative) for c in c_values]
    )
    return McReport(
        config=config,
        m=m,
        delta_grid=grid,
        c_values=c_values,
        reject_counts=counts,
        rejection_freq=freq,
        mc_se=np.sqrt(freq * (1.0 - freq) / config.reps),
        asymptotic_power=overlay,
        cell_keys=tuple(keys),
        elapsed_seconds=time.perf_counter() - start,
    )


def run_size(config: McConfig) -> McReport:
    """Rejection frequency under the null: the power curve at delta = delta0."""
    return run_power_curve(replace(config, delta_grid=(config.delta0,)))


def run_ic_experiment(config: McConfig) -> IcExperimentReport:
    """Empirical distribution of the IC-selected trend order.

    Uses the single DGP delta in ``config.delta_grid`` (which must have
    length one) with the trend ``config.beta``.
    """
    if len(config.delta_grid) != 1:
        raise ValueError("run_ic_experiment expects a single-delta grid")
    start = time.perf_counter()
    task = _cell_task(config, config.delta_grid[0], cell=0)
    task["penalty_value"] = _resolve_penalty(config.penalty, config.T)[1]
    workers = config.resolved_workers()
    parts = _dispatch(_khat_chunk, task, config.reps, workers)
    counts = np.sum(parts, axis=0)
    return IcExperimentReport(
        config=config,
        counts=counts,
        frequencies=counts / config.reps,
        cell_keys=((config.seed, 0),),
        elapsed_seconds=time.perf_counter() - start,
    )


FIGURE_PRESETS = {"fig_s1": 0.0, "fig_s2": 1.0}

_PRESET_CELLS = tuple((T, alpha) for T in (256, 512) for alpha in (0.65, 0.80))

# c-grid spanning roughly [-3, 3]; each cell maps it to deltas via its own m,
# capped inside the stationary-invertible range.
_PRESET_C_GRID = tuple(np.linspace(-3.0, 3.0, 13))

_PRESET_DELTA_CAP = 0.45


def preset_configs(
    preset: str,
    reps: int = 5000,
    seed: int = DEFAULT_SEED,
    level: float = 0.05,
    sim_method: str = "type1",
    workers: int | None = None,
) -> list[McConfig]:
    """Monte Carlo configurations for one figure preset.

    Four (T, bandwidth-exponent) cells, each run with the trend-aware test
    (k_fit = 1) and the no-trend test (k_fit = 0) on a shared delta grid.
    The two k_fit runs of a cell share replication streams, so their curves
    are a paired comparison on identical simulated data.
    """
    if preset not in FIGURE_PRESETS:
        raise ValueError(f"preset must be one of {sorted(FIGURE_PRESETS)}, got {preset!r}")
    beta1 = FIGURE_PRESETS[preset]
    beta = (0.0, beta1)
    configs = []
    for T, alpha in _PRESET_CELLS:
        m = default_bandwidth(T, alpha)
        grid = tuple(
            sorted({max(-_PRESET_DELTA_CAP, min(_PRESET_DELTA_CAP, c / np.sqrt(m)))
                    for c in _PRESET_C_GRID})
        )
        for k_fit in (1, 0):
            configs.append(
                McConfig(
                    T=T,
                    reps=reps,
                    delta_grid=grid,
                    beta=beta,
                    k_fit=k_fit,
                    alpha=alpha,
                    level=level,
                    seed=seed,
                    sim_method=sim_method,
                    workers=workers,
                )
            )
    return configs


def replicate_figures(
    preset: str,
    out_dir: str,
    reps: int = 5000,
    seed: int = DEFAULT_SEED,
    level: float = 0.05,
    sim_method: str = "type1",
    workers: int | None = None,
    render: bool = True,
) -> dict:
    """Run a figure preset and write curve tables, figures, and a manifest.

    Writes one CSV per (cell, k_fit) with columns delta, c, rejection_freq,
    mc_se, asymptotic_power, one PNG per cell overlaying both tests and the
    asymptotic curve (unless ``render`` is false), and a JSON manifest
    capturing the full configuration.  Returns the written paths keyed by
    kind.
    """
    from . import io as _io  # deferred: keeps the simulation core file-format free
    from . import plotting

    start = time.perf_counter()
    configs = preset_configs(
        preset, reps=reps, seed=seed, level=level, sim_method=sim_method, workers=workers
    )
    os.makedirs(out_dir, exist_ok=True)
    csv_paths: list[str] = []
    png_paths: list[str] = []
    by_cell: dict[tuple[int, float], dict[int, McReport]] = {}
    for config in configs:
        report = run_power_curve(config)
        stem = f"{preset}_T{config.T}_a{int(round(config.alpha * 100))}"
        path = os.path.join(out_dir, f"{stem}_k{config.k_fit}.csv")
        _io.write_curve_csv(path, report)
        csv_paths.append(path)
        by_cell.setdefault((config.T, config.alpha), {})[int(config.k_fit)] = report
    if render:
        for (T, alpha), reports in by_cell.items():
            stem = f"{preset}_T{T}_a{int(round(alpha * 100))}"
            path = os.path.join(out_dir, f"{stem}.png")
            plotting.plot_power_curves(
                reports, path, title=f"{preset}: T={T}, m=floor(T^{alpha:.2f})"
            )
            png_paths.append(path)
    manifest_path = os.path.join(out_dir, f"{preset}_manifest.json")
    _io.write_manifest(
        manifest_path,
        command=f"replicate_figures({preset!r})",
        config={
            "preset": preset,
            "reps": reps,
            "seed": seed,
            "level": level,
            "sim_method": sim_method,
            "cells": [c.to_dict() for c in configs],
        },
        seed=seed,
        wall_time_seconds=time.perf_counter() - start,
    )
    return {"csv": csv_paths, "png": png_paths, "manifest": manifest_path}
