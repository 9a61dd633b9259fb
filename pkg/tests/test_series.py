import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from btcarima import (
    TimeSeries,
    TransformState,
    difference,
    exp_transform,
    inverse_difference,
    log_transform,
)
from btcarima.errors import (
    NonPositiveValueError,
    SeriesTooShortError,
    StateMismatchError,
)
from .conftest import make_series


class TestTimeSeries:
    def test_rejects_gapped_dates(self):
        dates = np.array(["2020-01-01", "2020-01-03"], dtype="datetime64[D]")
        with pytest.raises(ValueError, match="consecutive"):
            TimeSeries(dates, np.array([1.0, 2.0]))

    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="finite"):
            make_series([1.0, float("nan"), 2.0])

    def test_rejects_empty(self):
        with pytest.raises(SeriesTooShortError):
            make_series([])

    def test_slice_keeps_date_alignment(self):
        ts = make_series([1.0, 2.0, 3.0, 4.0])
        s = ts.slice(1, 3)
        assert list(s.values) == [2.0, 3.0]
        assert s.dates[0] == np.datetime64("2020-01-02")


class TestLogTransform:
    def test_one_maps_to_zero(self):
        out = log_transform(make_series([1.0, 1.0]))
        assert out.values[0] == 0.0

    def test_e_maps_to_one(self):
        out = log_transform(make_series([math.e, math.e]))
        assert out.values[0] == pytest.approx(1.0, rel=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveValueError):
            log_transform(make_series([1.0, 0.0]))

    @given(hst.lists(hst.floats(min_value=1e-6, max_value=1e6), min_size=2,
                     max_size=50))
    @settings(max_examples=50, deadline=None)
    def test_exp_round_trip(self, values):
        ts = make_series(values)
        back = exp_transform(log_transform(ts))
        np.testing.assert_allclose(back.values, ts.values, rtol=1e-12)


class TestDifference:
    def test_constant_series_vanishes(self):
        out, _ = difference(make_series([5.0, 5.0, 5.0, 5.0]), 1)
        np.testing.assert_array_equal(out.values, [0.0, 0.0, 0.0])

    def test_linear_ramp(self):
        out, _ = difference(make_series([1.0, 2.0, 3.0, 4.0]), 1)
        np.testing.assert_array_equal(out.values, [1.0, 1.0, 1.0])

    def test_second_difference_of_squares(self):
        out, state = difference(make_series([0.0, 1.0, 4.0, 9.0, 16.0]), 2)
        np.testing.assert_array_equal(out.values, [2.0, 2.0, 2.0])
        assert state.diff_order == 2
        assert state.retained_heads == (0.0, 1.0)

    def test_dates_shift_by_order(self):
        out, _ = difference(make_series([1.0, 2.0, 4.0]), 1)
        assert out.dates[0] == np.datetime64("2020-01-02")

    def test_too_short(self):
        with pytest.raises(SeriesTooShortError):
            difference(make_series([1.0, 2.0]), 2)


class TestInverseDifference:
    def test_cumulative_sum_example(self):
        diffed = make_series([1.0, 1.0, 1.0], start="2020-01-02")
        state = TransformState(False, 1, (1.0,))
        out = inverse_difference(diffed, state)
        np.testing.assert_array_equal(out.values, [1.0, 2.0, 3.0, 4.0])
        assert out.dates[0] == np.datetime64("2020-01-01")

    def test_state_mismatch(self):
        with pytest.raises(StateMismatchError):
            inverse_difference(make_series([1.0, 1.0]),
                               TransformState(False, 2, (1.0,)))

    @pytest.mark.parametrize("order", [0, 1, 2])
    def test_round_trip_random_series(self, order):
        rng = np.random.default_rng(7)
        ts = make_series(rng.normal(0, 10, 100))
        diffed, state = difference(ts, order)
        back = inverse_difference(diffed, state)
        np.testing.assert_allclose(back.values, ts.values, rtol=1e-9, atol=1e-9)
        np.testing.assert_array_equal(back.dates, ts.dates)

    @given(hst.lists(hst.floats(min_value=-1e4, max_value=1e4), min_size=3,
                     max_size=40),
           hst.integers(min_value=0, max_value=2))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_property(self, values, order):
        ts = make_series(values)
        diffed, state = difference(ts, order)
        back = inverse_difference(diffed, state)
        np.testing.assert_allclose(back.values, ts.values, rtol=1e-9,
                                   atol=1e-7)
