"""Figure rendering for Monte Carlo reports and fitted trends.

Figures are written straight to files (Agg backend); the delimited curve
tables remain the primary machine-readable output and figures are rendered
next to them.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_power_curves", "plot_trend_fit"]


def plot_power_curves(reports: dict, path: str, title: str = "") -> str:
    """Render simulated power curves against the asymptotic overlay.

    ``reports`` maps a fitted trend order to an ``McReport`` whose grid is
    shared; the asymptotic curve is drawn once from the first report.
    """
    if not reports:
        raise ValueError("no reports to plot")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    first = next(iter(reports.values()))
    ax.plot(
        first.delta_grid,
        first.asymptotic_power,
        color="black",
        linestyle="--",
        linewidth=1.2,
        label="asymptotic",
    )
    for k_fit in sorted(reports):
        rep = reports[k_fit]
        ax.errorbar(
            rep.delta_grid,
            rep.rejection_freq,
            yerr=2.0 * rep.mc_se,
            marker="o",
            markersize=3,
            linewidth=1.0,
            capsize=2,
            label=f"k = {k_fit}",
        )
    ax.set_xlabel(r"$\delta$")
    ax.set_ylabel("rejection frequency")
    ax.set_ylim(-0.02, 1.02)
    ax.axhline(first.config.level, color="grey", linewidth=0.6)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_trend_fit(y: np.ndarray, trend: np.ndarray, path: str, title: str = "") -> str:
    """Render a series with its fitted deterministic trend."""
    y = np.asarray(y, dtype=float)
    trend = np.asarray(trend, dtype=float)
    if y.shape != trend.shape:
        raise ValueError(f"series and trend lengths differ: {y.shape} vs {trend.shape}")
    t = np.arange(1, y.size + 1)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(t, y, color="steelblue", linewidth=0.9, label="series")
    ax.plot(t, trend, color="black", linestyle=":", linewidth=1.6, label="fitted trend")
    ax.set_xlabel("t")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
