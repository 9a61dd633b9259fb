"""Grid enumeration over (p, q, d) and the two model-selection strategies.

The index linearizes the nested loop p (0..9), q (0..9), d (0..2) as
30p + 3q + 1d. The RSS search ranks models by their conditional sum of
squares on the fitting series; the MSE search ranks the same fitted models
by backtest mean squared error in price space over sampled windows. Entries
that fail to fit or to evaluate are recorded, never fatal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .arima import ArimaModel, ArimaOrder, FitConfig, fit, mse_of_model
from .errors import (
    BtcArimaError,
    OptimizerFailureError,
    OutOfGridError,
    SeriesTooShortError,
    WindowTooShortError,
)
from .series import TimeSeries

if TYPE_CHECKING:
    from .harness import EvalConfig

GRID_SIZE = 300

STATUS_OK = "ok"
STATUS_EXCLUDED = "excluded_by_pq_rule"
STATUS_FAILED = "fit_failed"


@dataclass(frozen=True)
class GridEntry:
    index: int
    order: ArimaOrder
    metric: float | None
    status: str


@dataclass(frozen=True)
class GridReport:
    """All 300 entries plus the winner under one strategy ('rss' or 'mse')."""

    entries: tuple[GridEntry, ...]
    best: GridEntry
    strategy: str
    eval_config: "EvalConfig | None" = None


def model_index(order: ArimaOrder) -> int:
    """Linear index 30p + 3q + d (the constructor enforces grid bounds)."""
    return 30 * order.p + 3 * order.q + order.d


def index_to_order(index: int) -> ArimaOrder:
    """Inverse of model_index; raises OutOfGridError outside 0..299."""
    if not (0 <= index < GRID_SIZE):
        raise OutOfGridError(f"index {index} outside 0..{GRID_SIZE - 1}")
    p, rest = divmod(index, 30)
    q, d = divmod(rest, 3)
    return ArimaOrder(p=p, d=d, q=q)


def enumerate_grid(pq_rule: bool = True) -> list[GridEntry]:
    """All 300 orders in index sequence; with pq_rule, p < q entries are
    marked excluded (the searched family keeps p >= q)."""
    entries = []
    for index in range(GRID_SIZE):
        order = index_to_order(index)
        excluded = pq_rule and order.p < order.q
        entries.append(GridEntry(
            index=index, order=order, metric=None,
            status=STATUS_EXCLUDED if excluded else STATUS_OK))
    return entries


def fit_grid(series: TimeSeries, config: FitConfig, pq_rule: bool = True,
             ) -> list[tuple[GridEntry, ArimaModel | None]]:
    """Fit every non-excluded order on `series` (transform space).

    Returns (entry, model) pairs in index sequence; a fit failure yields
    status 'fit_failed' and model None. Entry metrics are left unset here;
    each strategy fills its own.
    """
    out = []
    for entry in enumerate_grid(pq_rule):
        if entry.status == STATUS_EXCLUDED:
            out.append((entry, None))
            continue
        try:
            model = fit(entry.order, series, config)
        except (SeriesTooShortError, OptimizerFailureError):
            out.append((GridEntry(entry.index, entry.order, None,
                                  STATUS_FAILED), None))
            continue
        out.append((entry, model))
    return out


def pick_best_entry(entries: list[GridEntry]) -> GridEntry:
    ok = [e for e in entries if e.status == STATUS_OK]
    if not ok:
        raise BtcArimaError("no grid entry produced a metric")
    # ties break toward the smaller index (entries are in index order)
    return min(ok, key=lambda e: e.metric)


def rss_grid_search(series: TimeSeries, config: FitConfig = FitConfig(),
                    pq_rule: bool = True, seed: int = 0) -> GridReport:
    """Rank the grid by fitted CSS on `series` (already in transform space,
    e.g. log prices; differencing is per-order inside the fit)."""
    del seed  # fits are deterministic; kept for interface uniformity
    entries = []
    for entry, model in fit_grid(series, config, pq_rule):
        if model is not None:
            entry = GridEntry(entry.index, entry.order, model.fit_rss, STATUS_OK)
        entries.append(entry)
    return GridReport(entries=tuple(entries), best=pick_best_entry(entries),
                      strategy="rss", eval_config=None)


def mse_grid_search(price_series: TimeSeries, eval_config: "EvalConfig",
                    config: FitConfig = FitConfig(), pq_rule: bool = True,
                    log_applied: bool = True) -> GridReport:
    """Fit the grid on the (logged) full series, then rank by backtest MSE.

    Window starts are sampled once from eval_config and shared by every
    entry; per-forecast seeds derive from (master_seed, start, rep) so the
    report is identical under any evaluation order.
    """
    from .harness import sample_windows

    fitting_series = to_transform_space(price_series, log_applied)
    starts = sample_windows(len(price_series), eval_config)
    pairs = fit_grid(fitting_series, config, pq_rule)
    entries = []
    for entry, model in pairs:
        if model is None:
            entries.append(entry)
            continue
        try:
            metric = mse_of_model(model, price_series, starts,
                                  eval_config.window_len, eval_config.reps,
                                  eval_config.master_seed, log_applied)
        except WindowTooShortError:
            # window shorter than d+1: this order cannot forecast at this w
            entries.append(GridEntry(entry.index, entry.order, None,
                                     STATUS_FAILED))
            continue
        entries.append(GridEntry(entry.index, entry.order, metric, STATUS_OK))
    return GridReport(entries=tuple(entries), best=pick_best_entry(entries),
                      strategy="mse", eval_config=eval_config)


def to_transform_space(price_series: TimeSeries, log_applied: bool) -> TimeSeries:
    if not log_applied:
        return price_series
    from .series import log_transform

    return log_transform(price_series)
