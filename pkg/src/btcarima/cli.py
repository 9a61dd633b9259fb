"""Command-line interface: batch reports for the full pricing pipeline.

Subcommands mirror the study stages: `preprocess` (stationarity diagnostics),
`grid-rss` / `grid-mse` (the two selection strategies), `eval-locations`
(window-position sweep for one model), `sweep-w` (window-length table), and
`fetch` (download raw CSV for later ingestion). Every command emits a
report.json embedding the master seed, dataset hash, and full configuration;
CSV/JSON output is byte-identical across reruns with the same inputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__, grid, harness, io, stattools
from .arima import ArimaOrder, FitConfig, fit
from .errors import BtcArimaError
from .series import TimeSeries, difference, log_transform

logger = logging.getLogger(__name__)

DEFAULT_START = "2015-09-01"
DEFAULT_DAYS = 1096
FORMATS = ("csv", "json", "svg")


@dataclass
class RunConfig:
    """Everything one command invocation needs."""

    command: str
    output_dir: Path
    formats: frozenset[str]
    dataset: io.DatasetSpec | None = None
    start: str = DEFAULT_START
    days: int = DEFAULT_DAYS
    seed: int = 0
    w: int = 9
    locations: int = 50
    reps: int = 40
    region: str = harness.REGION_FULL
    pq_rule: bool = True
    order: ArimaOrder | None = None
    w_list: tuple[int, ...] = (2, 3, 5, 6, 9)
    max_lag: int = 40
    fetch_url: str | None = None


def _fmt(x) -> str:
    return io.format_float(float(x))


def _round9(obj):
    """Recursively round floats to 9 significant digits for stable JSON."""
    if isinstance(obj, float):
        return float(io.format_float(obj))
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def _emit_report(cfg: RunConfig, payload: dict) -> None:
    report = {
        "tool": "btcarima",
        "version": __version__,
        "command": cfg.command,
        "master_seed": cfg.seed,
        "config": _round9(_config_dict(cfg)),
        **payload,
    }
    if "json" in cfg.formats:
        text = json.dumps(_round9(report), indent=2, sort_keys=True) + "\n"
        io.write_atomic(cfg.output_dir / "report.json", text)


def _config_dict(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d["output_dir"] = str(cfg.output_dir)
    d["formats"] = sorted(cfg.formats)
    d["order"] = str(cfg.order) if cfg.order else None
    d["w_list"] = list(cfg.w_list)
    if cfg.dataset is not None:
        d["dataset"]["path"] = str(cfg.dataset.path)
    return d


def _load_series(cfg: RunConfig) -> tuple[TimeSeries, dict]:
    series = io.ingest_csv(cfg.dataset)
    meta = {
        "path": str(cfg.dataset.path),
        "sha256": io.sha256_of_file(cfg.dataset.path),
        "rows": len(series),
        "first_date": str(series.dates[0]),
        "last_date": str(series.dates[-1]),
    }
    return series, meta


def _write_csv(cfg: RunConfig, name: str, header: list[str],
               rows: list[list[str]]) -> None:
    if "csv" not in cfg.formats:
        return
    lines = [",".join(header)] + [",".join(r) for r in rows]
    io.write_atomic(cfg.output_dir / name, "\n".join(lines) + "\n")


# --- commands ---

def _cmd_preprocess(cfg: RunConfig) -> dict:
    series, meta = _load_series(cfg)
    log_series = log_transform(series)
    log_diff, _ = difference(log_series, 1)

    adf = {
        "raw": stattools.adf_test(series),
        "log": stattools.adf_test(log_series),
        "log_diff": stattools.adf_test(log_diff),
    }
    rows = []
    for name, res in adf.items():
        rows.append([name, _fmt(res.statistic), _fmt(res.p_value),
                     str(res.lags_used),
                     _fmt(res.critical_values["1%"]),
                     _fmt(res.critical_values["5%"]),
                     _fmt(res.critical_values["10%"])])
    _write_csv(cfg, "stationarity.csv",
               ["series", "statistic", "p_value", "lags_used",
                "crit_1pct", "crit_5pct", "crit_10pct"], rows)

    max_lag = min(cfg.max_lag, len(log_diff) - 1)
    corr = {
        "log": (stattools.acf(log_series, max_lag),
                stattools.pacf(log_series, max_lag)),
        "log_diff": (stattools.acf(log_diff, max_lag),
                     stattools.pacf(log_diff, max_lag)),
    }
    rows = []
    for lag in range(1, max_lag + 1):
        rows.append([str(lag),
                     _fmt(corr["log"][0][lag]), _fmt(corr["log"][1][lag - 1]),
                     _fmt(corr["log_diff"][0][lag]),
                     _fmt(corr["log_diff"][1][lag - 1])])
    _write_csv(cfg, "acf_pacf.csv",
               ["lag", "acf_log", "pacf_log", "acf_log_diff", "pacf_log_diff"],
               rows)

    if "svg" in cfg.formats:
        from . import plots

        plots.plot_series_panels(cfg.output_dir / "series.svg", series.dates,
                                 series.values, log_series.values,
                                 log_diff.values)
        lags = np.arange(1, max_lag + 1)
        for name, (a, p) in corr.items():
            plots.plot_correlogram(cfg.output_dir / f"correlogram_{name}.svg",
                                   lags, a[1:], p, len(series),
                                   f"ACF/PACF of {name} series")

    return {
        "dataset": meta,
        "results": {
            "stationarity": {
                name: {"statistic": res.statistic, "p_value": res.p_value,
                       "lags_used": res.lags_used,
                       "critical_values": dict(res.critical_values)}
                for name, res in adf.items()
            },
        },
    }


def _grid_rows(report: grid.GridReport) -> list[list[str]]:
    rows = []
    for e in report.entries:
        rows.append([str(e.index), str(e.order.p), str(e.order.q),
                     str(e.order.d), e.status,
                     _fmt(e.metric) if e.metric is not None else ""])
    return rows


def _grid_payload(report: grid.GridReport) -> dict:
    best = report.best
    return {
        "best_index": best.index,
        "best_order_pdq": str(best.order),
        "best_order_pqd": f"({best.order.p},{best.order.q},{best.order.d})",
        "best_metric": best.metric,
        "ok_entries": sum(e.status == grid.STATUS_OK for e in report.entries),
        "failed_entries": sum(e.status == grid.STATUS_FAILED
                              for e in report.entries),
        "excluded_entries": sum(e.status == grid.STATUS_EXCLUDED
                                for e in report.entries),
    }


def _cmd_grid_rss(cfg: RunConfig) -> dict:
    series, meta = _load_series(cfg)
    report = grid.rss_grid_search(log_transform(series), FitConfig(),
                                  pq_rule=cfg.pq_rule, seed=cfg.seed)
    _write_csv(cfg, "fig5_rss.csv", ["index", "p", "q", "d", "status", "rss"],
               _grid_rows(report))
    if "svg" in cfg.formats:
        from . import plots

        ok = [e for e in report.entries if e.status == grid.STATUS_OK]
        plots.plot_grid_metric(cfg.output_dir / "fig5_rss.svg",
                               [e.index for e in ok], [e.metric for e in ok],
                               "fit RSS", report.best.index)
    return {"dataset": meta, "results": {"rss_grid": _grid_payload(report)}}


def _cmd_grid_mse(cfg: RunConfig) -> dict:
    series, meta = _load_series(cfg)
    eval_config = harness.EvalConfig(
        window_len=cfg.w, num_locations=cfg.locations, reps=cfg.reps,
        region=cfg.region, master_seed=cfg.seed)
    report = grid.mse_grid_search(series, eval_config, FitConfig(),
                                  pq_rule=cfg.pq_rule)
    _write_csv(cfg, "fig6_mse.csv", ["index", "p", "q", "d", "status", "mse"],
               _grid_rows(report))
    if "svg" in cfg.formats:
        from . import plots

        ok = [e for e in report.entries if e.status == grid.STATUS_OK]
        plots.plot_grid_metric(cfg.output_dir / "fig6_mse.svg",
                               [e.index for e in ok], [e.metric for e in ok],
                               "backtest MSE (USD^2)", report.best.index)
    return {"dataset": meta, "results": {"mse_grid": _grid_payload(report)}}


def _cmd_eval_locations(cfg: RunConfig) -> dict:
    if cfg.order is None:
        raise BtcArimaError("eval-locations requires --order p,d,q")
    series, meta = _load_series(cfg)
    model = fit(cfg.order, log_transform(series), FitConfig(), seed=cfg.seed)
    curve = harness.mse_by_location(model, series, cfg.w, cfg.reps, cfg.seed)
    rows = [[str(int(day)), str(series.dates[int(day)]), _fmt(m)]
            for day, m in zip(curve.day_index, curve.mse)]
    _write_csv(cfg, "fig7_location.csv", ["day_index", "date", "mse"], rows)
    if "svg" in cfg.formats:
        from . import plots

        plots.plot_location_curve(cfg.output_dir / "fig7_location.svg",
                                  curve.day_index, curve.mse)
    half = len(series) // 2
    first = curve.mse[curve.day_index < half]
    second = curve.mse[curve.day_index >= half]
    return {"dataset": meta, "results": {
        "order_pdq": str(cfg.order),
        "locations": len(curve.mse),
        "max_mse_day": int(curve.day_index[int(np.argmax(curve.mse))]),
        "first_half_mean_mse": float(first.mean()),
        "second_half_mean_mse": float(second.mean()),
    }}


def _cmd_sweep_w(cfg: RunConfig) -> dict:
    series, meta = _load_series(cfg)
    eval_base = harness.EvalConfig(
        window_len=max(cfg.w_list), num_locations=cfg.locations, reps=cfg.reps,
        region=cfg.region, master_seed=cfg.seed)
    rows = harness.sweep_window_lengths(series, cfg.w_list, eval_base,
                                        FitConfig(), pq_rule=cfg.pq_rule)
    name = ("table2.csv" if cfg.region == harness.REGION_FIRST_HALF
            else "table1.csv")
    csv_rows = []
    for r in rows:
        csv_rows.append([
            str(r.w), str(r.rss_best_index), str(r.rss_best_order),
            f"({r.rss_best_order.p},{r.rss_best_order.q},{r.rss_best_order.d})",
            str(r.mse_best_index), str(r.mse_best_order),
            f"({r.mse_best_order.p},{r.mse_best_order.q},{r.mse_best_order.d})",
            _fmt(r.avg_mse)])
    _write_csv(cfg, name,
               ["w", "rss_index", "rss_order_pdq", "rss_order_pqd",
                "mse_index", "mse_order_pdq", "mse_order_pqd", "avg_mse"],
               csv_rows)
    if "svg" in cfg.formats:
        from . import plots

        plots.plot_sweep(cfg.output_dir / name.replace(".csv", ".svg"),
                         [r.w for r in rows], [r.avg_mse for r in rows])
    return {"dataset": meta, "results": {"sweep": [
        {"w": r.w, "rss_best_index": r.rss_best_index,
         "rss_best_order_pdq": str(r.rss_best_order),
         "mse_best_index": r.mse_best_index,
         "mse_best_order_pdq": str(r.mse_best_order),
         "avg_mse": r.avg_mse} for r in rows]}}


def _cmd_fetch(cfg: RunConfig) -> dict:
    url = cfg.fetch_url or os.environ.get("BTCARIMA_FETCH_URL")
    if not url:
        raise BtcArimaError(
            "fetch needs --fetch-url or the BTCARIMA_FETCH_URL env var")
    start = np.datetime64(cfg.start, "D")
    end = start + np.timedelta64(cfg.days - 1, "D")
    out = cfg.output_dir / "fetched.csv"
    io.fetch_prices(url, (str(start), str(end)), out,
                    api_key=os.environ.get("BTCARIMA_API_KEY"))
    return {"results": {"written": str(out),
                        "sha256": io.sha256_of_file(out)}}


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "grid-rss": _cmd_grid_rss,
    "grid-mse": _cmd_grid_mse,
    "eval-locations": _cmd_eval_locations,
    "sweep-w": _cmd_sweep_w,
    "fetch": _cmd_fetch,
}


def run_command(cfg: RunConfig) -> int:
    """Dispatch one command; returns the process exit status."""
    try:
        payload = _COMMANDS[cfg.command](cfg)
    except (BtcArimaError, FileNotFoundError, ValueError) as exc:
        print(f"btcarima {cfg.command}: {exc}", file=sys.stderr)
        return 2
    _emit_report(cfg, payload)
    return 0


# --- argument parsing ---

def _parse_order(text: str) -> ArimaOrder:
    try:
        p, d, q = (int(v) for v in text.split(","))
        return ArimaOrder(p=p, d=d, q=q)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(
            f"--order expects p,d,q integers, got {text!r}: {exc}") from None


def _parse_w_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--w-list expects comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="btcarima",
        description="ARIMA grid-search forecasting of daily closing prices")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, needs_data: bool = True):
        if needs_data:
            p.add_argument("--data", required=True, help="price CSV (date,close)")
        p.add_argument("--start", default=DEFAULT_START,
                       help="first day of the span (ISO date)")
        p.add_argument("--days", type=int, default=DEFAULT_DAYS,
                       help="span length in days")
        p.add_argument("--fill", choices=[io.FILL_FORWARD, io.FILL_ERROR],
                       default=io.FILL_FORWARD, help="missing-day policy")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", default="csv,json",
                       help="comma-separated subset of csv,json,svg")

    def add_eval(p: argparse.ArgumentParser):
        p.add_argument("--w", type=int, default=9, help="window length")
        p.add_argument("--locations", type=int, default=50,
                       help="sampled window locations")
        p.add_argument("--reps", type=int, default=40,
                       help="forecast repetitions per location")
        p.add_argument("--region", choices=["full", "first-half"],
                       default="full", help="where window targets may fall")

    p = sub.add_parser("preprocess", help="stationarity diagnostics")
    add_common(p)
    p.add_argument("--max-lag", type=int, default=40,
                   help="ACF/PACF lags to report")

    p = sub.add_parser("grid-rss", help="RSS-minimizing grid search")
    add_common(p)
    p.add_argument("--pq-rule", choices=["on", "off"], default="on",
                   help="exclude p < q orders")

    p = sub.add_parser("grid-mse", help="backtest-MSE-minimizing grid search")
    add_common(p)
    add_eval(p)
    p.add_argument("--pq-rule", choices=["on", "off"], default="on")

    p = sub.add_parser("eval-locations",
                       help="MSE of one model at every window location")
    add_common(p)
    p.add_argument("--order", type=_parse_order, required=True,
                   help="model order as p,d,q")
    p.add_argument("--w", type=int, default=9)
    p.add_argument("--reps", type=int, default=40)

    p = sub.add_parser("sweep-w", help="grid searches across window lengths")
    add_common(p)
    add_eval(p)
    p.add_argument("--pq-rule", choices=["on", "off"], default="on")
    p.add_argument("--w-list", type=_parse_w_list, default=(2, 3, 5, 6, 9),
                   help="comma-separated window lengths")

    p = sub.add_parser("fetch", help="download raw price CSV")
    add_common(p, needs_data=False)
    p.add_argument("--fetch-url", default=None,
                   help="endpoint URL (or BTCARIMA_FETCH_URL)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    formats = frozenset(f.strip() for f in args.format.split(",") if f.strip())
    bad = formats - set(FORMATS)
    if bad:
        raise ValueError(f"unknown format(s): {sorted(bad)}")
    if not formats:
        raise ValueError("at least one output format is required")
    dataset = None
    if getattr(args, "data", None) is not None:
        dataset = io.DatasetSpec(path=args.data, start_date=args.start,
                                 span_days=args.days, fill_policy=args.fill)
    region_map = {"full": harness.REGION_FULL,
                  "first-half": harness.REGION_FIRST_HALF}
    return RunConfig(
        command=args.command,
        output_dir=Path(args.out),
        formats=formats,
        dataset=dataset,
        start=args.start,
        days=args.days,
        seed=args.seed,
        w=getattr(args, "w", 9),
        locations=getattr(args, "locations", 50),
        reps=getattr(args, "reps", 40),
        region=region_map[getattr(args, "region", "full")],
        pq_rule=getattr(args, "pq_rule", "on") == "on",
        order=getattr(args, "order", None),
        w_list=tuple(getattr(args, "w_list", (2, 3, 5, 6, 9))),
        max_lag=getattr(args, "max_lag", 40),
        fetch_url=getattr(args, "fetch_url", None),
    )


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"btcarima: {exc}", file=sys.stderr)
        return 2
    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())
