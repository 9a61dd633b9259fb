"""Autocorrelation estimators and the augmented Dickey-Fuller test.

The ACF uses the biased (divide-by-n) estimator so the implied autocovariance
sequence is positive semi-definite, which keeps the Durbin-Levinson recursion
for the PACF numerically safe. The ADF test runs the constant-only regression
with AIC lag selection and maps the t-ratio through the MacKinnon response
surfaces for finite-sample critical values and approximate p-values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateToeplitzError,
    LagTooLargeError,
    SeriesTooShortError,
    SingularRegressionError,
)
from .series import TimeSeries

DEFAULT_ADF_MAX_LAG = 12

# Response-surface constants for the constant-only (no trend) Dickey-Fuller
# regression, MacKinnon (2010): cv = b0 + b1/n + b2/n^2 + b3/n^3.
_CRIT_SURFACE = {
    "1%": (-3.43035, -6.5393, -16.786, -79.433),
    "5%": (-2.86154, -2.8903, -4.234, -40.040),
    "10%": (-2.56677, -1.5384, -2.809, 0.0),
}

# p-value surface, MacKinnon (1994): p = Phi(poly(tau)), with a quadratic fit
# in the left tail and a cubic elsewhere. Outside [tau_min, tau_max] the
# p-value saturates at 0 or 1.
_TAU_MIN, _TAU_STAR, _TAU_MAX = -18.83, -1.61, 2.74
_P_SMALL = (2.1659, 1.4412, 0.038269)
_P_LARGE = (1.7339, 0.93202, -0.12745, -0.010368)


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p_value: float
    critical_values: dict[str, float]
    lags_used: int

    def rejects_unit_root(self, level: float = 0.05) -> bool:
        return self.p_value < level


def _values(x) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.values
    return np.asarray(x, dtype=np.float64)


def acf(ts, max_lag: int) -> np.ndarray:
    """Sample autocorrelation for lags 0..max_lag, biased normalization.

    result[0] is exactly 1. Raises DegenerateToeplitzError on a constant
    series (zero lag-0 autocovariance).
    """
    x = _values(ts)
    n = len(x)
    if n < 2:
        raise SeriesTooShortError("acf needs at least 2 observations")
    if max_lag >= n:
        raise LagTooLargeError(f"max_lag {max_lag} >= series length {n}")
    xc = x - x.mean()
    c0 = float(np.dot(xc, xc)) / n
    if c0 <= 0.0:
        raise DegenerateToeplitzError("constant series has no autocorrelation")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = float(np.dot(xc[:-k], xc[k:])) / n / c0
    return out


def pacf(ts, max_lag: int) -> np.ndarray:
    """Partial autocorrelations for lags 1..max_lag (Durbin-Levinson).

    result[k-1] is the partial autocorrelation at lag k; the base case
    equals acf at lag 1.
    """
    r = acf(ts, max_lag)
    out = np.empty(max_lag)
    phi_prev = np.empty(max_lag)
    phi_curr = np.empty(max_lag)
    v = 1.0  # prediction error variance relative to c0
    for k in range(1, max_lag + 1):
        if abs(v) < 1e-14:
            raise DegenerateToeplitzError(
                f"Durbin-Levinson denominator vanished at lag {k}")
        num = r[k] - float(np.dot(phi_prev[:k - 1], r[k - 1:0:-1]))
        a = num / v
        phi_curr[:k - 1] = phi_prev[:k - 1] - a * phi_prev[:k - 1][::-1]
        phi_curr[k - 1] = a
        out[k - 1] = a
        v *= 1.0 - a * a
        phi_prev, phi_curr = phi_curr, phi_prev
    return out


def _ols(y: np.ndarray, X: np.ndarray):
    """OLS via normal equations; returns (beta, t_stat_first_col, sse, nobs)."""
    n, k = X.shape
    xtx = X.T @ X
    # condition check catches the collinear constant/level columns of a
    # constant input before lstsq silently regularizes them
    if np.linalg.cond(xtx) > 1e12:
        raise SingularRegressionError("ADF design matrix is singular")
    xty = X.T @ y
    beta = np.linalg.solve(xtx, xty)
    resid = y - X @ beta
    sse = float(resid @ resid)
    sigma2 = sse / (n - k)
    var_beta0 = sigma2 * np.linalg.inv(xtx)[0, 0]
    t0 = float(beta[0] / math.sqrt(var_beta0))
    return beta, t0, sse, n


def _adf_design(x: np.ndarray, k: int):
    """Regression pieces for k lagged differences: y = dx_t, X columns are
    [x_{t-1}, dx_{t-1} .. dx_{t-k}, 1]."""
    dx = np.diff(x)
    nobs = len(dx) - k
    y = dx[k:]
    cols = [x[k:-1]]
    for i in range(1, k + 1):
        cols.append(dx[k - i:-i])
    cols.append(np.ones(nobs))
    return y, np.column_stack(cols)


def mackinnon_crit_values(nobs: int) -> dict[str, float]:
    """Finite-sample critical values for the constant-only DF regression."""
    return {
        level: b[0] + b[1] / nobs + b[2] / nobs**2 + b[3] / nobs**3
        for level, b in _CRIT_SURFACE.items()
    }


def mackinnon_p_value(stat: float) -> float:
    """Approximate p-value for the constant-only DF t-ratio."""
    if stat > _TAU_MAX:
        return 1.0
    if stat < _TAU_MIN:
        return 0.0
    coeffs = _P_SMALL if stat <= _TAU_STAR else _P_LARGE
    z = sum(c * stat**i for i, c in enumerate(coeffs))
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def adf_test(ts, max_lag: int = DEFAULT_ADF_MAX_LAG) -> AdfResult:
    """Augmented Dickey-Fuller unit-root test (constant, no trend).

    The lagged-difference count is chosen by AIC over 0..max_lag on a common
    sample, then the test regression is re-run at the chosen lag on all
    available observations. The statistic is the t-ratio on the lagged level.
    """
    x = _values(ts)
    n = len(x)
    if n < max_lag + 10:
        raise SeriesTooShortError(
            f"adf_test needs >= max_lag + 10 = {max_lag + 10} observations, got {n}")

    # lag selection on the sample trimmed to max_lag so AICs are comparable
    dx = np.diff(x)
    common = len(dx) - max_lag
    best_aic, best_k = math.inf, 0
    for k in range(max_lag + 1):
        y, X = _adf_design(x, k)
        y, X = y[-common:], X[-common:]
        _, _, sse, nobs = _ols(y, X)
        aic = nobs * math.log(sse / nobs) + 2 * X.shape[1]
        if aic < best_aic:
            best_aic, best_k = aic, k

    y, X = _adf_design(x, best_k)
    _, stat, _, nobs = _ols(y, X)
    return AdfResult(
        statistic=stat,
        p_value=mackinnon_p_value(stat),
        critical_values=mackinnon_crit_values(nobs),
        lags_used=best_k,
    )
