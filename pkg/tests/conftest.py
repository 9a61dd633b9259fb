from pathlib import Path

import numpy as np
import pytest

from btcarima import DatasetSpec, TimeSeries, ingest_csv

DATA_PATH = Path(__file__).resolve().parent.parent / "data" / \
    "btc_usd_2015-09-01_2018-08-31.csv"


@pytest.fixture(scope="session")
def btc_series() -> TimeSeries:
    return ingest_csv(DatasetSpec(DATA_PATH))


def simulate_arma(n, phi=(), theta=(), sigma=1.0, c=0.0, seed=0, burn=100):
    """Simulate an ARMA(p, q) path; returns (values, innovations) after
    burn-in so tests can compare residuals against the true noise."""
    rng = np.random.default_rng(seed)
    e = rng.normal(0.0, sigma, n + burn)
    x = np.zeros(n + burn)
    p, q = len(phi), len(theta)
    for t in range(n + burn):
        acc = c + e[t]
        for i in range(p):
            if t - 1 - i >= 0:
                acc += phi[i] * x[t - 1 - i]
        for j in range(q):
            if t - 1 - j >= 0:
                acc += theta[j] * e[t - 1 - j]
        x[t] = acc
    return x[burn:], e[burn:]


def make_series(values, start="2020-01-01") -> TimeSeries:
    return TimeSeries.from_start(start, np.asarray(values, dtype=float))
