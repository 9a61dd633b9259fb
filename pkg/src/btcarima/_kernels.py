"""Hot inner loops: CSS residual recursion and one-step ARMA forecasting.

The ARMA residual recursion is sequential in t (each residual feeds the MA
terms of the next) so it cannot be vectorised; it runs tens of thousands of
times per grid search inside the simplex optimizer. The functions here are
compiled with numba's ``@njit`` by default. Setting the environment variable
``BTCARIMA_NO_NUMBA=1`` before import selects the pure-numpy fallback instead
(same code, interpreted). Both backends produce identical floating-point
results; ``benchmarks/bench_kernels.py`` compares their speed.

Pre-sample convention: residuals before the first computable index are zero,
matching a conditional (not exact) sum-of-squares objective.
"""

from __future__ import annotations

import os

import numpy as np

_OVERFLOW_LIMIT = 1e150  # bail out before inf - inf turns residuals into NaN


def _css_residuals(x, phi, theta, c):
    """Conditional residuals of an ARMA(p, q) model with intercept c.

    e[t] = x[t] - c - sum_i phi[i] * x[t-1-i] - sum_j theta[j] * e[t-1-j]
    for t = p .. n-1, with pre-sample residuals fixed at zero. Returns an
    array of length n - p.
    """
    n = x.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    e = np.zeros(n - p)
    for t in range(p, n):
        pred = c
        for i in range(p):
            pred += phi[i] * x[t - 1 - i]
        for j in range(q):
            k = t - 1 - j - p
            if k >= 0:
                pred += theta[j] * e[k]
        e[t - p] = x[t] - pred
    return e


def _css_sse(x, phi, theta, c):
    """Conditional sum of squares; returns inf when the recursion explodes."""
    n = x.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    e = np.zeros(n - p)
    sse = 0.0
    for t in range(p, n):
        pred = c
        for i in range(p):
            pred += phi[i] * x[t - 1 - i]
        for j in range(q):
            k = t - 1 - j - p
            if k >= 0:
                pred += theta[j] * e[k]
        r = x[t] - pred
        if not (-_OVERFLOW_LIMIT < r < _OVERFLOW_LIMIT):
            return np.inf
        e[t - p] = r
        sse += r * r
    return sse


def _one_step_forecast(z, pre_x, pre_e, phi, theta, c):
    """One-step-ahead ARMA prediction over a short window z.

    pre_x[i] stands in for z[-1-i] and pre_e[j] for e[-1-j], the lag values
    that fall before the window (zeros, or random draws supplied by the
    caller). In-window residuals are computed by the same recursion as
    _css_residuals but seeded with the pre-window values instead of zeros.
    """
    m = z.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    e = np.zeros(m)
    if q > 0:
        for t in range(m):
            pred = c
            for i in range(p):
                k = t - 1 - i
                pred += phi[i] * (z[k] if k >= 0 else pre_x[-k - 1])
            for j in range(q):
                k = t - 1 - j
                pred += theta[j] * (e[k] if k >= 0 else pre_e[-k - 1])
            e[t] = z[t] - pred
    out = c
    for i in range(p):
        k = m - 1 - i
        out += phi[i] * (z[k] if k >= 0 else pre_x[-k - 1])
    for j in range(q):
        k = m - 1 - j
        out += theta[j] * (e[k] if k >= 0 else pre_e[-k - 1])
    return out


def _env_disables_numba() -> bool:
    return os.environ.get("BTCARIMA_NO_NUMBA", "").strip().lower() in (
        "1", "true", "yes", "on",
    )


# Pure-python/numpy versions are always importable (the benchmark needs both
# backends side by side regardless of the env flag).
css_residuals_pure = _css_residuals
css_sse_pure = _css_sse
one_step_forecast_pure = _one_step_forecast

if _env_disables_numba():
    NUMBA_ENABLED = False
else:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dep, belt+braces
        NUMBA_ENABLED = False

if NUMBA_ENABLED:
    css_residuals = njit(cache=True)(_css_residuals)
    css_sse = njit(cache=True)(_css_sse)
    one_step_forecast = njit(cache=True)(_one_step_forecast)
else:
    css_residuals = _css_residuals
    css_sse = _css_sse
    one_step_forecast = _one_step_forecast

ACTIVE_BACKEND = "numba" if NUMBA_ENABLED else "numpy"
