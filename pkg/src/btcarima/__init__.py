"""ARIMA grid-search forecasting of daily bitcoin closing prices.

Pipeline: ingest a date,close CSV, make it stationary (log + differencing,
checked by an augmented Dickey-Fuller test), fit every (p, d, q) in the
10 x 3 x 10 grid by conditional sum of squares, and select a model either by
fit RSS or by backtest mean squared error over randomly placed forecast
windows. See the CLI (`btcarima --help`) for the report-emitting commands.
"""

__version__ = "0.1.0"

from .arima import (
    ArimaModel,
    ArimaOrder,
    FitConfig,
    css_residuals,
    fit,
    forecast_next,
    mse_of_model,
    pipeline_state,
)
from .errors import BtcArimaError
from .grid import (
    GridEntry,
    GridReport,
    enumerate_grid,
    index_to_order,
    model_index,
    mse_grid_search,
    rss_grid_search,
)
from .harness import (
    EvalConfig,
    LocationCurve,
    SweepRow,
    mse_by_location,
    sample_windows,
    sweep_window_lengths,
)
from .io import DatasetSpec, fetch_prices, ingest_csv
from .series import (
    TimeSeries,
    TransformState,
    difference,
    exp_transform,
    inverse_difference,
    log_transform,
)
from .stattools import AdfResult, acf, adf_test, pacf

__all__ = [
    "AdfResult",
    "ArimaModel",
    "ArimaOrder",
    "BtcArimaError",
    "DatasetSpec",
    "EvalConfig",
    "FitConfig",
    "GridEntry",
    "GridReport",
    "LocationCurve",
    "SweepRow",
    "TimeSeries",
    "TransformState",
    "acf",
    "adf_test",
    "css_residuals",
    "difference",
    "enumerate_grid",
    "exp_transform",
    "fetch_prices",
    "fit",
    "forecast_next",
    "index_to_order",
    "ingest_csv",
    "inverse_difference",
    "log_transform",
    "model_index",
    "mse_by_location",
    "mse_grid_search",
    "mse_of_model",
    "pacf",
    "pipeline_state",
    "rss_grid_search",
    "sample_windows",
    "sweep_window_lengths",
]
