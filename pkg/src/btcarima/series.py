"""Daily time-series container and stationarity transforms.

A :class:`TimeSeries` couples a consecutive daily date axis with float64
values. Transforms (natural log, repeated differencing) are pure functions
returning new instances; :class:`TransformState` retains what differencing
consumed so forecasts can be mapped back to price space exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveValueError, SeriesTooShortError, StateMismatchError

_DAY = np.timedelta64(1, "D")


@dataclass(frozen=True)
class TimeSeries:
    """Ordered daily observations.

    dates: numpy datetime64[D] array, strictly increasing, no gaps.
    values: float64 array of the same length, all finite.
    """

    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        values = np.asarray(self.values, dtype=np.float64)
        if dates.ndim != 1 or values.ndim != 1:
            raise ValueError("dates and values must be one-dimensional")
        if len(dates) != len(values):
            raise ValueError("dates and values length mismatch")
        if len(dates) == 0:
            raise SeriesTooShortError("empty series")
        if len(dates) > 1 and not np.all(np.diff(dates) == _DAY):
            raise ValueError("dates must be consecutive calendar days")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must all be finite")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_start(cls, start_date: str, values) -> "TimeSeries":
        """Build a series of consecutive days beginning at start_date."""
        values = np.asarray(values, dtype=np.float64)
        start = np.datetime64(start_date, "D")
        return cls(start + np.arange(len(values)), values)

    def slice(self, start: int, stop: int) -> "TimeSeries":
        return TimeSeries(self.dates[start:stop], self.values[start:stop])


@dataclass(frozen=True)
class TransformState:
    """What stationarity preprocessing consumed, for exact inversion.

    retained_heads[k] is the first element of the k-times-differenced series
    (transform space, i.e. after the log when log_applied). Length equals
    diff_order.
    """

    log_applied: bool
    diff_order: int
    retained_heads: tuple[float, ...]

    def __post_init__(self):
        if self.diff_order < 0:
            raise ValueError("diff_order must be >= 0")
        object.__setattr__(self, "retained_heads",
                           tuple(float(h) for h in self.retained_heads))


def log_transform(ts: TimeSeries) -> TimeSeries:
    """Element-wise natural log. Raises NonPositiveValueError on values <= 0."""
    if np.any(ts.values <= 0.0):
        bad = ts.values[ts.values <= 0.0][0]
        raise NonPositiveValueError(f"cannot log-transform value {bad!r}")
    return TimeSeries(ts.dates, np.log(ts.values))


def exp_transform(ts: TimeSeries) -> TimeSeries:
    """Inverse of log_transform."""
    return TimeSeries(ts.dates, np.exp(ts.values))


def difference(ts: TimeSeries, order: int) -> tuple[TimeSeries, TransformState]:
    """Apply order-fold first differencing.

    The result is shorter by `order`; its dates start at ts.dates[order].
    The returned state retains the leading value of each intermediate level
    so inverse_difference can rebuild the input exactly.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if len(ts) <= order:
        raise SeriesTooShortError(
            f"need > {order} observations to difference {order} times, got {len(ts)}")
    heads = []
    values = ts.values
    for _ in range(order):
        heads.append(float(values[0]))
        values = np.diff(values)
    out = TimeSeries(ts.dates[order:], values)
    return out, TransformState(log_applied=False, diff_order=order,
                               retained_heads=tuple(heads))


def inverse_difference(diffed: TimeSeries, state: TransformState) -> TimeSeries:
    """Undo `difference`, reconstructing the pre-differencing series.

    Only the differencing is inverted; when state.log_applied is set the
    caller composes exp_transform to get back to price space. The dates of
    the reconstructed leading points are extrapolated backwards (the
    container guarantees daily spacing).
    """
    if len(state.retained_heads) != state.diff_order:
        raise StateMismatchError(
            f"state has {len(state.retained_heads)} retained heads "
            f"for diff_order={state.diff_order}")
    values = diffed.values
    for head in reversed(state.retained_heads):
        values = np.concatenate(([head], head + np.cumsum(values)))
    start = diffed.dates[0] - state.diff_order * _DAY
    return TimeSeries(start + np.arange(len(values)), values)
