"""Acceptance gate: one test per release criterion, at the stated tolerance.

Run with `pytest tests/test_acceptance.py -v` for the per-criterion pass/fail
lines (add -s for the measured numbers). The grid-backed criteria dominate
the runtime; the whole module finishes well inside half an hour.
"""

import json

import numpy as np
import pytest

from btcarima import (
    ArimaOrder,
    EvalConfig,
    FitConfig,
    adf_test,
    difference,
    exp_transform,
    fit,
    inverse_difference,
    log_transform,
    model_index,
    mse_grid_search,
    rss_grid_search,
)
from btcarima.cli import RunConfig, run_command
from btcarima.grid import index_to_order
from btcarima.harness import mse_by_location, sweep_window_lengths
from btcarima.io import DatasetSpec
from .conftest import DATA_PATH, simulate_arma, make_series


@pytest.fixture(scope="module")
def log_btc(btc_series):
    return log_transform(btc_series)


@pytest.fixture(scope="module")
def eval9():
    return EvalConfig(window_len=9, num_locations=50, reps=40,
                      region="full_span", master_seed=0)


@pytest.fixture(scope="module")
def mse9_report(btc_series, eval9):
    return mse_grid_search(btc_series, eval9, FitConfig(), pq_rule=True)


@pytest.fixture(scope="module")
def rss_report(log_btc):
    return rss_grid_search(log_btc, FitConfig(), pq_rule=True, seed=0)


@pytest.fixture(scope="module")
def full_sweep(btc_series, eval9):
    return sweep_window_lengths(btc_series, (2, 3, 5, 6, 9), eval9,
                                FitConfig(), pq_rule=True)


@pytest.fixture(scope="module")
def first_half_sweep(btc_series):
    base = EvalConfig(window_len=9, num_locations=50, reps=40,
                      region="first_half", master_seed=0)
    return sweep_window_lengths(btc_series, (2, 3), base, FitConfig(),
                                pq_rule=True)


def test_criterion_01_index_scheme_anchors():
    assert model_index(ArimaOrder(p=0, d=0, q=0)) == 0
    assert model_index(ArimaOrder(p=0, d=1, q=0)) == 1
    assert model_index(ArimaOrder(p=8, d=1, q=8)) == 265
    print("\nACCEPTANCE 1 PASS: model indices 0, 1, 265 exact")


def test_criterion_02_transform_round_trip(btc_series):
    for order in (1, 2):
        diffed, state = difference(log_transform(btc_series), order)
        back = exp_transform(inverse_difference(diffed, state))
        np.testing.assert_allclose(back.values, btc_series.values, rtol=1e-9)
        assert len(back) == 1096
    print("ACCEPTANCE 2 PASS: log+difference round-trip exact to 1e-9 "
          "on all 1096 points")


def test_criterion_03_estimator_recovery():
    ar_ok = ma_ok = arma_ok = 0
    for seed in range(20):
        x, _ = simulate_arma(1000, phi=(0.5,), seed=seed)
        m = fit(ArimaOrder(1, 0, 0), make_series(x))
        ar_ok += abs(m.ar_coeffs[0] - 0.5) <= 0.1

        x, _ = simulate_arma(1000, theta=(0.4,), seed=1000 + seed)
        m = fit(ArimaOrder(0, 0, 1), make_series(x))
        ma_ok += abs(m.ma_coeffs[0] - 0.4) <= 0.15

        x, _ = simulate_arma(1000, phi=(0.5,), theta=(0.3,), seed=2000 + seed)
        m = fit(ArimaOrder(1, 0, 1), make_series(x))
        arma_ok += (abs(m.ar_coeffs[0] - 0.5) <= 0.2
                    and abs(m.ma_coeffs[0] - 0.3) <= 0.2)
    assert ar_ok >= 18, f"AR(1) recovered in only {ar_ok}/20 runs"
    assert ma_ok >= 17, f"MA(1) recovered in only {ma_ok}/20 runs"
    assert arma_ok >= 16, f"ARMA(1,1) recovered in only {arma_ok}/20 runs"
    print(f"ACCEPTANCE 3 PASS: recovery AR {ar_ok}/20, MA {ma_ok}/20, "
          f"ARMA {arma_ok}/20")


def test_criterion_04_adf_calibration():
    rw_kept, ar_rejected = 0, 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        rw = np.cumsum(rng.normal(size=1000))
        rw_kept += adf_test(rw).p_value > 0.05
        x, _ = simulate_arma(1000, phi=(0.5,), seed=10_000 + seed)
        ar_rejected += adf_test(x).p_value < 0.05
    assert rw_kept >= 85, f"unit root wrongly rejected in {100 - rw_kept} walks"
    assert ar_rejected >= 95, f"stationarity missed in {100 - ar_rejected} runs"
    print(f"ACCEPTANCE 4 PASS: ADF kept unit root {rw_kept}/100, "
          f"rejected for AR(1) {ar_rejected}/100")


def test_criterion_05_stationarity_pipeline(btc_series, log_btc):
    raw = adf_test(btc_series)
    log_diff, _ = difference(log_btc, 1)
    diffed = adf_test(log_diff)
    assert raw.p_value > 0.05
    assert diffed.p_value < 0.01
    print(f"ACCEPTANCE 5 PASS: raw p={raw.p_value:.3f} > 0.05, "
          f"log-diff p={diffed.p_value:.2e} < 0.01")


def test_criterion_06_overfitting_gap(mse9_report, rss_report):
    by_index = {e.index: e for e in mse9_report.entries}
    rss_winner_entry = by_index[rss_report.best.index]
    assert rss_winner_entry.status == "ok"
    ratio = rss_winner_entry.metric / mse9_report.best.metric
    assert ratio >= 10.0, f"overfitting gap only {ratio:.1f}x"
    print(f"ACCEPTANCE 6 PASS: RSS winner {rss_report.best.order} backtests "
          f"{ratio:.1f}x worse than MSE winner {mse9_report.best.order}")


def test_criterion_07_window_length_trend(full_sweep):
    mses = [row.avg_mse for row in full_sweep]
    assert all(a > b for a, b in zip(mses, mses[1:])), \
        f"avg MSE not strictly decreasing: {mses}"
    factor = mses[0] / mses[-1]
    assert factor >= 4.0, f"w=2 to w=9 improvement only {factor:.2f}x"
    print("ACCEPTANCE 7 PASS: avg MSE " +
          " > ".join(f"{m:.0f}" for m in mses) + f" ({factor:.1f}x overall)")


def test_criterion_08_first_half_regime(full_sweep, first_half_sweep):
    full = {row.w: row.avg_mse for row in full_sweep}
    for row in first_half_sweep:
        ratio = full[row.w] / row.avg_mse
        assert ratio >= 100.0, f"w={row.w} regime ratio only {ratio:.0f}x"
        print(f"ACCEPTANCE 8 PASS: w={row.w} first-half avg MSE {row.avg_mse:.0f} "
              f"is {ratio:.0f}x below full span")


def test_criterion_09_location_curve_shape(btc_series, log_btc, mse9_report):
    winner = fit(index_to_order(mse9_report.best.index), log_btc, FitConfig())
    curve = mse_by_location(winner, btc_series, w=9, reps=40, seed=0)
    n = len(btc_series)
    max_day = int(curve.day_index[int(np.argmax(curve.mse))])
    assert max_day >= (2 * n) // 3, f"curve max at day {max_day}, too early"
    half = n // 2
    first = curve.mse[curve.day_index < half].mean()
    second = curve.mse[curve.day_index >= half].mean()
    assert first <= second / 10.0, \
        f"first-half mean {first:.0f} not 10x below second-half {second:.0f}"
    print(f"ACCEPTANCE 9 PASS: curve max at day {max_day} (final third), "
          f"half means {first:.1f} vs {second:.0f}")


def test_criterion_10_byte_identical_reports(tmp_path):
    out = tmp_path / "run"
    cfg = RunConfig(
        command="grid-mse", output_dir=out,
        formats=frozenset({"csv", "json"}),
        dataset=DatasetSpec(DATA_PATH, start_date="2015-09-01", span_days=300),
        seed=77, w=6, locations=10, reps=3,
    )
    assert run_command(cfg) == 0
    first_csv = (out / "fig6_mse.csv").read_bytes()
    first_report = (out / "report.json").read_bytes()
    assert run_command(cfg) == 0
    assert (out / "fig6_mse.csv").read_bytes() == first_csv
    assert (out / "report.json").read_bytes() == first_report
    report = json.loads(first_report)
    assert report["master_seed"] == 77
    assert "sha256" in report["dataset"]
    print("ACCEPTANCE 10 PASS: grid-mse reruns byte-identical "
          "(fig6_mse.csv, report.json)")
