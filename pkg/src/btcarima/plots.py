"""Optional SVG renders of the emitted CSV data.

The CSVs are the source of truth; these are convenience line plots.
matplotlib is imported lazily so CSV/JSON-only runs never pay for it.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _axes(title: str, xlabel: str, ylabel: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: Path) -> None:
    # a fixed metadata dict keeps the SVG free of creation timestamps
    fig.savefig(path, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt

    plt.close(fig)


def plot_series_panels(path: Path, dates, price, log_price, log_diff) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
    for ax, (label, y) in zip(axes, [("close (USD)", price),
                                     ("log close", log_price),
                                     ("diff of log close", log_diff)]):
        ax.plot(dates[-len(y):], y, linewidth=0.8)
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
    axes[0].set_title("daily closing price and stationarity transforms")
    fig.autofmt_xdate()
    _save(fig, path)


def plot_correlogram(path: Path, lags, acf_vals, pacf_vals, n_obs: int,
                     title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    band = 2.0 / np.sqrt(n_obs)
    for ax, vals, name in ((ax1, acf_vals, "ACF"), (ax2, pacf_vals, "PACF")):
        ax.stem(lags, vals, basefmt=" ")
        ax.axhline(band, color="gray", linestyle="--", linewidth=0.8)
        ax.axhline(-band, color="gray", linestyle="--", linewidth=0.8)
        ax.set_ylabel(name)
        ax.grid(True, alpha=0.3)
    ax1.set_title(title)
    ax2.set_xlabel("lag")
    _save(fig, path)


def plot_grid_metric(path: Path, indices, metrics, metric_name: str,
                     best_index: int) -> None:
    fig, ax = _axes(f"{metric_name} by model index", "model index 30p+3q+d",
                    metric_name)
    ax.plot(indices, metrics, marker=".", linestyle="none")
    ax.set_yscale("log")
    ax.axvline(best_index, color="red", linewidth=0.8,
               label=f"best index {best_index}")
    ax.legend()
    _save(fig, path)


def plot_location_curve(path: Path, day_index, mse) -> None:
    fig, ax = _axes("backtest MSE by predicted day", "day since series start",
                    "MSE (USD^2)")
    ax.plot(day_index, mse, linewidth=0.8)
    ax.set_yscale("log")
    _save(fig, path)


def plot_sweep(path: Path, w_values, avg_mses) -> None:
    fig, ax = _axes("best backtest MSE by window length", "window length w",
                    "avg MSE (USD^2)")
    ax.plot(w_values, avg_mses, marker="o")
    _save(fig, path)
