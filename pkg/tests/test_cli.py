import json

import numpy as np
import pytest

from btcarima.cli import main
from .conftest import DATA_PATH


@pytest.fixture(scope="module")
def small_csv(tmp_path_factory):
    """160 synthetic daily closes, enough for the ADF preconditions."""
    rng = np.random.default_rng(30)
    prices = 150.0 * np.exp(np.cumsum(rng.normal(0.001, 0.02, 160)))
    lines = ["date,close"]
    days = np.datetime64("2015-09-01") + np.arange(160)
    lines += [f"{d},{p:.2f}" for d, p in zip(days, prices)]
    path = tmp_path_factory.mktemp("data") / "small.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def _run(*argv):
    return main([str(a) for a in argv])


class TestPreprocess:
    def test_emits_reports(self, small_csv, tmp_path):
        out = tmp_path / "out"
        code = _run("preprocess", "--data", small_csv, "--days", 160,
                    "--out", out, "--max-lag", 20)
        assert code == 0
        stat = (out / "stationarity.csv").read_text().splitlines()
        assert stat[0] == "series,statistic,p_value,lags_used,crit_1pct,crit_5pct,crit_10pct"
        assert [row.split(",")[0] for row in stat[1:]] == ["raw", "log", "log_diff"]
        acf_rows = (out / "acf_pacf.csv").read_text().splitlines()
        assert len(acf_rows) == 21  # header + 20 lags
        report = json.loads((out / "report.json").read_text())
        assert report["command"] == "preprocess"
        assert "sha256" in report["dataset"]
        assert report["results"]["stationarity"]["log_diff"]["p_value"] < 1

    def test_svg_emission(self, small_csv, tmp_path):
        out = tmp_path / "svg_out"
        code = _run("preprocess", "--data", small_csv, "--days", 160,
                    "--out", out, "--format", "csv,json,svg", "--max-lag", 10)
        assert code == 0
        assert (out / "series.svg").exists()
        assert (out / "correlogram_log_diff.svg").exists()


class TestGridCommands:
    def test_grid_rss_shape_and_determinism(self, small_csv, tmp_path):
        out = tmp_path / "rss"
        assert _run("grid-rss", "--data", small_csv, "--days", 160,
                    "--seed", 5, "--out", out) == 0
        csv1 = (out / "fig5_rss.csv").read_bytes()
        report1 = (out / "report.json").read_bytes()
        assert _run("grid-rss", "--data", small_csv, "--days", 160,
                    "--seed", 5, "--out", out) == 0
        assert (out / "fig5_rss.csv").read_bytes() == csv1
        assert (out / "report.json").read_bytes() == report1
        lines = csv1.decode().splitlines()
        assert lines[0] == "index,p,q,d,status,rss"
        assert len(lines) == 301

    def test_grid_mse_emits_fig6(self, small_csv, tmp_path):
        out = tmp_path / "mse"
        code = _run("grid-mse", "--data", small_csv, "--days", 160,
                    "--w", 5, "--locations", 4, "--reps", 2, "--out", out)
        assert code == 0
        lines = (out / "fig6_mse.csv").read_text().splitlines()
        assert lines[0] == "index,p,q,d,status,mse"
        assert len(lines) == 301
        report = json.loads((out / "report.json").read_text())
        assert report["results"]["mse_grid"]["excluded_entries"] == 135


class TestEvalLocations:
    def test_fig7_csv(self, small_csv, tmp_path):
        out = tmp_path / "loc"
        code = _run("eval-locations", "--data", small_csv, "--days", 160,
                    "--order", "1,1,0", "--w", 5, "--reps", 2, "--out", out)
        assert code == 0
        lines = (out / "fig7_location.csv").read_text().splitlines()
        assert lines[0] == "day_index,date,mse"
        assert len(lines) == 1 + (160 - 5)  # starts 0..154 inclusive
        first = lines[1].split(",")
        assert first[0] == "5" and first[1] == "2015-09-06"

    def test_missing_order_fails(self, small_csv, tmp_path, capsys):
        with pytest.raises(SystemExit):
            _run("eval-locations", "--data", small_csv, "--out", tmp_path)


class TestSweep:
    def test_table1_rows(self, small_csv, tmp_path):
        out = tmp_path / "sweep"
        code = _run("sweep-w", "--data", small_csv, "--days", 160,
                    "--w-list", "3,4", "--locations", 3, "--reps", 1,
                    "--out", out)
        assert code == 0
        lines = (out / "table1.csv").read_text().splitlines()
        assert len(lines) == 3
        report = json.loads((out / "report.json").read_text())
        assert [row["w"] for row in report["results"]["sweep"]] == [3, 4]

    def test_first_half_region_writes_table2(self, small_csv, tmp_path):
        out = tmp_path / "sweep2"
        code = _run("sweep-w", "--data", small_csv, "--days", 160,
                    "--w-list", "3", "--locations", 3, "--reps", 1,
                    "--region", "first-half", "--out", out)
        assert code == 0
        assert (out / "table2.csv").exists()


class TestFetchCommand:
    def test_fetch_through_cli(self, tmp_path, monkeypatch):
        import http.server
        import threading

        class Handler(http.server.BaseHTTPRequestHandler):
            def do_GET(self):
                self.send_response(200)
                self.end_headers()
                self.wfile.write(b"date,close\n2015-09-01,230.0\n")

            def log_message(self, *args):
                pass

        server = http.server.HTTPServer(("127.0.0.1", 0), Handler)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        monkeypatch.setenv("BTCARIMA_FETCH_URL",
                           f"http://127.0.0.1:{server.server_port}/x")
        out = tmp_path / "fetched"
        code = _run("fetch", "--out", out)
        server.shutdown()
        assert code == 0
        assert (out / "fetched.csv").read_text().startswith("date,close")

    def test_fetch_without_url_fails(self, tmp_path, monkeypatch):
        monkeypatch.delenv("BTCARIMA_FETCH_URL", raising=False)
        assert _run("fetch", "--out", tmp_path) == 2


class TestErrors:
    def test_missing_data_file(self, tmp_path):
        assert _run("preprocess", "--data", tmp_path / "none.csv",
                    "--out", tmp_path) == 2

    def test_unknown_format(self, small_csv, tmp_path):
        assert _run("preprocess", "--data", small_csv, "--out", tmp_path,
                    "--format", "xml") == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            _run("--version")
        assert exc.value.code == 0


def test_shipped_dataset_present():
    assert DATA_PATH.exists()
    rows = DATA_PATH.read_text().strip().splitlines()
    assert len(rows) == 1097  # header + 1096 days
