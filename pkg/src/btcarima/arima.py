"""ARIMA representation, conditional-sum-of-squares fitting, and forecasting.

Estimation minimizes the conditional sum of squares (pre-sample values zeroed)
with Nelder-Mead restarts from a Hannan-Rissanen regression start and from the
zero-coefficient start; no stationarity or invertibility constraint is imposed,
so explosive parameterizations simply score badly and lose the model selection.

Forecasting works on short raw-price windows: the window is logged and
differenced per the model, in-window residuals are rebuilt recursively, and
every AR lag or MA residual that falls before the window is initialized with
a seeded draw from N(0, innovation_variance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .errors import (
    OptimizerFailureError,
    SeriesTooShortError,
    StateMismatchError,
    WindowTooShortError,
)
from .series import TimeSeries, TransformState, difference, log_transform

GRID_MAX_P = 9
GRID_MAX_Q = 9
GRID_MAX_D = 2


@dataclass(frozen=True)
class ArimaOrder:
    """(p, d, q): AR order, differencing order, MA order."""

    p: int
    d: int
    q: int

    def __post_init__(self):
        if not (0 <= self.p <= GRID_MAX_P):
            raise ValueError(f"p must be in 0..{GRID_MAX_P}, got {self.p}")
        if not (0 <= self.q <= GRID_MAX_Q):
            raise ValueError(f"q must be in 0..{GRID_MAX_Q}, got {self.q}")
        if not (0 <= self.d <= GRID_MAX_D):
            raise ValueError(f"d must be in 0..{GRID_MAX_D}, got {self.d}")

    def __str__(self) -> str:
        return f"({self.p},{self.d},{self.q})"


@dataclass(frozen=True, eq=False)
class ArimaModel:
    """A fitted ARIMA model in transform space.

    ar_coeffs/ma_coeffs are float64 arrays of length p and q; fit_rss is the
    minimized conditional sum of squares on the d-differenced fitting series,
    and innovation_variance is exactly fit_rss divided by the residual count.
    """

    order: ArimaOrder
    ar_coeffs: np.ndarray
    ma_coeffs: np.ndarray
    intercept: float
    innovation_variance: float
    fit_rss: float
    converged: bool
    invertible: bool

    def __post_init__(self):
        ar = np.asarray(self.ar_coeffs, dtype=np.float64)
        ma = np.asarray(self.ma_coeffs, dtype=np.float64)
        if len(ar) != self.order.p or len(ma) != self.order.q:
            raise ValueError("coefficient lengths do not match order")
        if self.fit_rss < 0 or self.innovation_variance < 0:
            raise ValueError("fit_rss and innovation_variance must be >= 0")
        ar.flags.writeable = False
        ma.flags.writeable = False
        object.__setattr__(self, "ar_coeffs", ar)
        object.__setattr__(self, "ma_coeffs", ma)


@dataclass(frozen=True)
class FitConfig:
    """Optimizer knobs.

    max_iterations defaults to 500 x (number of free parameters) when None.
    initialization 'hannan_rissanen' tries both the regression start and the
    zero start and keeps the better optimum; 'zeros' runs the zero start only.
    """

    max_iterations: int | None = None
    tolerance: float = 1e-10
    initialization: str = "hannan_rissanen"

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations <= 0:
            raise ValueError("max_iterations must be > 0")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.initialization not in ("zeros", "hannan_rissanen"):
            raise ValueError(f"unknown initialization {self.initialization!r}")


def css_residuals(model: ArimaModel, series) -> np.ndarray:
    """Conditional residuals of `model` on an already-differenced series.

    Pre-sample residuals are zero; the result has length len(series) - p.
    """
    x = series.values if isinstance(series, TimeSeries) else np.asarray(series, float)
    p = model.order.p
    if len(x) <= p:
        raise SeriesTooShortError(f"need more than p={p} observations, got {len(x)}")
    return _kernels.css_residuals(x, model.ar_coeffs, model.ma_coeffs,
                                  model.intercept)


def _hannan_rissanen_start(x: np.ndarray, p: int, q: int) -> np.ndarray | None:
    """Regression-based starting values [c, phi..., theta...].

    Long-AR residuals stand in for the innovations; a joint OLS on lagged
    values and lagged residuals gives the start. Returns None when the
    sample is too short or the regression is degenerate.
    """
    n = len(x)
    h = max(p, q, 4) + 4  # long AR order for the residual proxy
    if n - h < p + q + 8:
        return None
    try:
        rows = n - h
        X = np.column_stack([np.ones(rows)] +
                            [x[h - i:n - i] for i in range(1, h + 1)])
        beta, *_ = np.linalg.lstsq(X, x[h:], rcond=None)
        resid = x[h:] - X @ beta
        # align: resid[t] is the innovation proxy for x[h + t]
        k = max(p, q)
        m = rows - k
        if m < p + q + 4:
            return None
        cols = [np.ones(m)]
        for i in range(1, p + 1):
            cols.append(x[h + k - i:n - i])
        for j in range(1, q + 1):
            cols.append(resid[k - j:rows - j])
        Z = np.column_stack(cols)
        gamma, *_ = np.linalg.lstsq(Z, x[h + k:], rcond=None)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(gamma)):
        return None
    return gamma


def _ma_invertible(theta: np.ndarray) -> bool:
    """True when all roots of 1 + theta_1 z + ... + theta_q z^q lie outside
    the unit circle."""
    if len(theta) == 0:
        return True
    poly = np.concatenate(([1.0], theta))
    roots = np.roots(poly[::-1])
    if len(roots) == 0:
        return True
    return bool(np.all(np.abs(roots) > 1.0))


def fit(order: ArimaOrder, series: TimeSeries, config: FitConfig = FitConfig(),
        seed: int = 0) -> ArimaModel:
    """Fit by CSS minimization on the d-differenced series.

    `series` is the raw transform-space (e.g. log-price) series; differencing
    happens here. The optimizer is deterministic, so `seed` only keeps the
    signature uniform with the rest of the pipeline.
    """
    del seed  # fitting is deterministic
    p, d, q = order.p, order.d, order.q
    diffed, _ = difference(series, d)
    x = diffed.values
    n = len(x)
    if n <= p + q + 1:
        raise SeriesTooShortError(
            f"need more than p+q+1={p + q + 1} observations after differencing, got {n}")

    def objective(params: np.ndarray) -> float:
        c = params[0]
        phi = params[1:1 + p]
        theta = params[1 + p:]
        sse = _kernels.css_sse(x, phi, theta, c)
        return sse if math.isfinite(sse) else math.inf

    n_params = 1 + p + q
    max_iter = config.max_iterations or 500 * n_params

    zero_start = np.zeros(n_params)
    zero_start[0] = x.mean()
    baseline_sse = objective(zero_start)

    starts = [zero_start]
    if config.initialization == "hannan_rissanen":
        hr = _hannan_rissanen_start(x, p, q)
        if hr is not None and math.isfinite(objective(hr)):
            starts.insert(0, hr)

    best_params, best_sse, converged = zero_start, baseline_sse, True
    if n_params > 1 or not math.isfinite(baseline_sse):
        best_sse = math.inf
        converged = False
        for start in starts:
            res = minimize(objective, start, method="Nelder-Mead",
                           options={"maxiter": max_iter, "maxfev": 2 * max_iter,
                                    "fatol": config.tolerance, "xatol": 1e-8})
            if res.fun < best_sse:
                best_params, best_sse, converged = res.x, res.fun, bool(res.success)
        # the zero-coefficient candidate is always in the comparison set and
        # keeps the fit unless the optimizer beat it by more than the
        # convergence tolerance; degenerate flat objectives (constant input)
        # otherwise hand back an arbitrary point of the zero-loss hyperplane
        if baseline_sse <= best_sse + config.tolerance * max(1.0, baseline_sse):
            best_params, best_sse, converged = zero_start, baseline_sse, True
    # else: pure intercept model, exactly minimized by the sample mean already

    if not math.isfinite(best_sse):
        raise OptimizerFailureError(
            f"CSS objective non-finite at every probe for order {order}")

    c = float(best_params[0])
    phi = np.array(best_params[1:1 + p], dtype=np.float64)
    theta = np.array(best_params[1 + p:], dtype=np.float64)
    resid_count = n - p
    return ArimaModel(
        order=order,
        ar_coeffs=phi,
        ma_coeffs=theta,
        intercept=c,
        innovation_variance=best_sse / resid_count,
        fit_rss=float(best_sse),
        converged=converged,
        invertible=_ma_invertible(theta),
    )


def _transform_window(window: TimeSeries, state: TransformState,
                      d: int) -> tuple[np.ndarray, np.ndarray]:
    """Log + d-fold difference a raw window; returns (z, level_tails) where
    level_tails[k] is the last value of the k-times-differenced window,
    needed to integrate the prediction back up to level 0."""
    vals = window.values
    if state.log_applied:
        vals = np.log(vals)
    tails = np.empty(d)
    for k in range(d):
        tails[k] = vals[-1]
        vals = np.diff(vals)
    return vals, tails


def forecast_next(model: ArimaModel, window: TimeSeries, state: TransformState,
                  seed: int = 0) -> float:
    """One-step-ahead price forecast from a raw price window.

    AR lags and MA residuals that fall before the window are filled with
    independent N(0, innovation_variance) draws in a fixed order (AR lags
    from nearest to farthest, then MA residuals), so the result is a pure
    function of (model, window, seed). With q == 0 and all AR lags inside
    the window no draw is consumed and the seed is irrelevant.
    """
    p, d, q = model.order.p, model.order.d, model.order.q
    if state.diff_order != d:
        raise StateMismatchError(
            f"state.diff_order={state.diff_order} but model has d={d}")
    if len(state.retained_heads) != state.diff_order:
        raise StateMismatchError("retained_heads length != diff_order")
    w = len(window)
    if w < d + 1:
        raise WindowTooShortError(f"window length {w} < d+1 = {d + 1}")

    z, tails = _transform_window(window, state, d)
    m = len(z)

    pre_x = np.zeros(max(p, 1))
    pre_e = np.zeros(max(q, 1))
    sigma = math.sqrt(model.innovation_variance)
    if q > 0:
        rng = np.random.default_rng(seed)
        if p > 0:
            pre_x[:p] = rng.normal(0.0, sigma, p)
        pre_e[:q] = rng.normal(0.0, sigma, q)
    elif p > m:
        rng = np.random.default_rng(seed)
        pre_x[:p - m] = rng.normal(0.0, sigma, p - m)

    pred = _kernels.one_step_forecast(z, pre_x[:p], pre_e[:q],
                                      model.ar_coeffs, model.ma_coeffs,
                                      model.intercept)
    for k in range(d - 1, -1, -1):
        pred = tails[k] + pred
    if state.log_applied:
        pred = math.exp(pred)
    return float(pred)


def derive_forecast_seed(master_seed: int, window_start: int, rep: int) -> int:
    """Per-(window, rep) seed, independent of evaluation order."""
    words = np.random.SeedSequence([master_seed, window_start, rep]).generate_state(2)
    return int(words[0]) << 32 | int(words[1])


def mse_of_model(model: ArimaModel, series: TimeSeries, window_starts,
                 w: int, reps: int, seed: int, log_applied: bool = True) -> float:
    """Mean squared one-step price error over windows and repetitions.

    For each start s the window is series[s:s+w] and the target is the true
    close at s+w; `reps` forecasts are run per window with seeds derived from
    (seed, s, rep). Returns the grand mean in squared price units.
    """
    n = len(series)
    state = pipeline_state(series, log_applied, model.order.d)
    total = 0.0
    count = 0
    values = series.values
    for s in window_starts:
        s = int(s)
        if s + w + 1 > n:
            raise WindowTooShortError(
                f"window start {s} with w={w} overruns series of length {n}")
        window = series.slice(s, s + w)
        truth = values[s + w]
        for rep in range(reps):
            pred = forecast_next(model, window, state,
                                 derive_forecast_seed(seed, s, rep))
            err = pred - truth
            total += err * err
            count += 1
    return total / count


def pipeline_state(series: TimeSeries, log_applied: bool, d: int) -> TransformState:
    """TransformState for the log+difference preprocessing of a full series."""
    ts = log_transform(series) if log_applied else series
    _, st = difference(ts, d)
    return TransformState(log_applied=log_applied, diff_order=d,
                          retained_heads=st.retained_heads)
