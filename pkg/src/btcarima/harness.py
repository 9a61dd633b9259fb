"""Window sampling, location sweeps, and window-length sweeps.

Window starts are drawn without replacement by rejection from a stream of
uniforms seeded only by the master seed, so runs with different window
lengths share (nearly) the same locations: the draw u maps to
floor(u * range) and the admissible range shrinks by only a few days as w
grows. That keeps window-length comparisons on common ground instead of
resampling the heavy-tailed location distribution per w.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from . import grid
from .arima import ArimaModel, ArimaOrder, FitConfig, mse_of_model
from .errors import RegionTooSmallError, WindowTooShortError
from .series import TimeSeries

logger = logging.getLogger(__name__)

REGION_FULL = "full_span"
REGION_FIRST_HALF = "first_half"


@dataclass(frozen=True)
class EvalConfig:
    """Backtest parameters: window length, sampled locations, repetitions,
    the span region targets may fall in, and the master seed."""

    window_len: int
    num_locations: int = 50
    reps: int = 40
    region: str = REGION_FULL
    master_seed: int = 0

    def __post_init__(self):
        if self.window_len < 2:
            raise ValueError("window_len must be >= 2")
        if self.num_locations < 1 or self.reps < 1:
            raise ValueError("num_locations and reps must be >= 1")
        if self.region not in (REGION_FULL, REGION_FIRST_HALF):
            raise ValueError(f"unknown region {self.region!r}")


@dataclass(frozen=True)
class LocationCurve:
    """Backtest MSE as a function of the predicted day's index."""

    day_index: np.ndarray
    mse: np.ndarray


@dataclass(frozen=True)
class SweepRow:
    w: int
    rss_best_index: int
    rss_best_order: ArimaOrder
    mse_best_index: int
    mse_best_order: ArimaOrder
    avg_mse: float


def sample_windows(series_len: int, eval_config: EvalConfig) -> np.ndarray:
    """Distinct window starts, uniform over the admissible range.

    A start s is admissible when the target day t = s + w lies strictly
    inside the region, i.e. s + w + 1 <= region end. Draws are made on the
    target day by rejection from a region-wide uniform stream, which is
    still uniform without replacement over the admissible starts but keeps
    the sampled target days (nearly) identical across window lengths: runs
    at different w then disagree only through the models, not through a
    resampling of the heavy-tailed location distribution. Returns sorted
    starts.
    """
    w = eval_config.window_len
    region_end = (series_len if eval_config.region == REGION_FULL
                  else series_len // 2)
    n_valid = region_end - w  # targets t in [w, region_end - 1]
    if n_valid < eval_config.num_locations:
        raise RegionTooSmallError(
            f"{n_valid} admissible starts in region {eval_config.region!r} "
            f"< num_locations={eval_config.num_locations}")
    rng = np.random.default_rng(np.random.SeedSequence([eval_config.master_seed]))
    if eval_config.num_locations > n_valid // 2:
        # rejection would thrash near saturation; a permutation is exact too
        targets = w + rng.permutation(n_valid)[:eval_config.num_locations]
    else:
        chosen: set[int] = set()
        while len(chosen) < eval_config.num_locations:
            t = int(rng.random() * region_end)
            if t >= w:
                chosen.add(t)
        targets = np.fromiter(chosen, dtype=np.intp)
    return np.sort(targets) - w


def mse_by_location(model: ArimaModel, series: TimeSeries, w: int, reps: int,
                    seed: int, log_applied: bool = True) -> LocationCurve:
    """Exhaustive slide of the window over every admissible start.

    day_index holds the predicted day (start + w) as days since the series
    start; mse is the mean over `reps` seeded forecasts at that location.
    """
    n = len(series)
    starts = np.arange(0, n - w - 1 + 1)
    mses = np.empty(len(starts))
    for i, s in enumerate(starts):
        mses[i] = mse_of_model(model, series, [int(s)], w, reps, seed,
                               log_applied)
    return LocationCurve(day_index=starts + w, mse=mses)


def sweep_window_lengths(series: TimeSeries, w_list, eval_base: EvalConfig,
                         config: FitConfig = FitConfig(), pq_rule: bool = True,
                         log_applied: bool = True) -> list[SweepRow]:
    """Both grid searches at each window length.

    Fitting does not depend on w, so the grid is fitted once and re-ranked
    per w; results are identical to running each search separately. The RSS
    ranking is therefore the same in every row, as the fit metric never sees
    the window.
    """
    fitting_series = grid.to_transform_space(series, log_applied)
    pairs = grid.fit_grid(fitting_series, config, pq_rule)

    rss_entries = []
    for entry, model in pairs:
        if model is not None:
            entry = grid.GridEntry(entry.index, entry.order, model.fit_rss,
                                   grid.STATUS_OK)
        rss_entries.append(entry)
    rss_best = grid.pick_best_entry(rss_entries)

    rows = []
    for w in w_list:
        eval_config = replace(eval_base, window_len=int(w))
        starts = sample_windows(len(series), eval_config)
        mse_entries = []
        for entry, model in pairs:
            if model is None:
                mse_entries.append(entry)
                continue
            try:
                metric = mse_of_model(model, series, starts, eval_config.window_len,
                                      eval_config.reps, eval_config.master_seed,
                                      log_applied)
            except WindowTooShortError as exc:
                logger.warning("entry %d cannot forecast at w=%d: %s",
                               entry.index, w, exc)
                mse_entries.append(grid.GridEntry(entry.index, entry.order,
                                                  None, grid.STATUS_FAILED))
                continue
            mse_entries.append(grid.GridEntry(entry.index, entry.order,
                                              metric, grid.STATUS_OK))
        mse_best = grid.pick_best_entry(mse_entries)
        rows.append(SweepRow(
            w=int(w),
            rss_best_index=rss_best.index,
            rss_best_order=rss_best.order,
            mse_best_index=mse_best.index,
            mse_best_order=mse_best.order,
            avg_mse=float(mse_best.metric),
        ))
    return rows
