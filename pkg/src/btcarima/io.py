"""Dataset ingestion, price fetching, and deterministic file emission.

Ingestion is the single validation gate: whatever the source (local file or
the fetch command's raw download), prices only enter the pipeline through
ingest_csv. Emission formats floats at 9 significant digits and writes
atomically (temp file + rename) so interrupted runs never leave partial
reports.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from .errors import (
    GapError,
    MalformedResponseError,
    NetworkError,
    NonPositivePriceError,
    ParseError,
)
from .series import TimeSeries

logger = logging.getLogger(__name__)

FILL_ERROR = "error"
FILL_FORWARD = "forward_fill"

_DAY = np.timedelta64(1, "D")


@dataclass(frozen=True)
class DatasetSpec:
    """Where the price CSV lives and how to clip and repair it."""

    path: str | Path
    start_date: str = "2015-09-01"
    span_days: int = 1096
    fill_policy: str = FILL_FORWARD

    def __post_init__(self):
        if self.span_days <= 0:
            raise ValueError("span_days must be > 0")
        if self.fill_policy not in (FILL_ERROR, FILL_FORWARD):
            raise ValueError(f"unknown fill_policy {self.fill_policy!r}")


def _parse_rows(path: Path) -> list[tuple[np.datetime64, float]]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(csv.reader(fh), start=1):
            if not raw or (len(raw) == 1 and not raw[0].strip()):
                continue
            if len(raw) < 2:
                raise ParseError(f"expected date,close got {raw!r}", lineno)
            date_s, close_s = raw[0].strip(), raw[1].strip()
            try:
                date = np.datetime64(date_s, "D")
            except ValueError:
                if lineno == 1:
                    continue  # optional header row
                raise ParseError(f"bad date {date_s!r}", lineno) from None
            try:
                close = float(close_s)
            except ValueError:
                if lineno == 1:
                    continue
                raise ParseError(f"bad close {close_s!r}", lineno) from None
            if not np.isfinite(close):
                raise ParseError(f"non-finite close {close_s!r}", lineno)
            rows.append((date, close))
    return rows


def ingest_csv(spec: DatasetSpec) -> TimeSeries:
    """Parse, sort, clip to [start_date, start_date + span_days), and repair.

    Gaps inside the clipped range are forward-filled or rejected per the
    fill policy; duplicate dates are a parse error; non-positive closes are
    rejected before any transform can meet them.
    """
    path = Path(spec.path)
    if not path.exists():
        raise FileNotFoundError(path)
    rows = _parse_rows(path)
    rows.sort(key=lambda r: r[0])

    start = np.datetime64(spec.start_date, "D")
    end = start + spec.span_days * _DAY
    rows = [r for r in rows if start <= r[0] < end]
    if len(rows) < 2:
        raise ParseError(
            f"fewer than 2 usable rows in [{start}, {end}) from {path}")

    dates, values = [], []
    prev_date, prev_close = None, None
    for date, close in rows:
        if prev_date is not None:
            if date == prev_date:
                raise ParseError(f"duplicate date {date}")
            missing = int((date - prev_date) / _DAY) - 1
            if missing > 0:
                if spec.fill_policy == FILL_ERROR:
                    raise GapError(
                        f"{missing} missing day(s) after {prev_date}")
                logger.warning("forward-filling %d missing day(s) after %s",
                               missing, prev_date)
                for k in range(1, missing + 1):
                    dates.append(prev_date + k * _DAY)
                    values.append(prev_close)
        dates.append(date)
        values.append(close)
        prev_date, prev_close = date, close

    values_arr = np.asarray(values, dtype=np.float64)
    if np.any(values_arr <= 0.0):
        bad = values_arr[values_arr <= 0.0][0]
        raise NonPositivePriceError(f"non-positive close {bad!r}")
    return TimeSeries(np.array(dates, dtype="datetime64[D]"), values_arr)


def series_to_csv(ts: TimeSeries) -> str:
    """Render a series as date,close text (9 significant digits)."""
    lines = ["date,close"]
    for date, value in zip(ts.dates, ts.values):
        lines.append(f"{date},{format_float(value)}")
    return "\n".join(lines) + "\n"


def format_float(x: float) -> str:
    """Locale-independent decimal rendering at 9 significant digits."""
    return f"{x:.9g}"


def write_atomic(path: str | Path, data: str | bytes) -> Path:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def sha256_of_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def fetch_prices(endpoint_url: str, date_range: tuple[str, str] | None,
                 out_path: str | Path, api_key: str | None = None,
                 timeout: float = 30.0) -> Path:
    """Download raw date,close CSV to disk for later ingestion.

    The response is checked just enough to fail fast (two columns, closes
    parse as numbers); full validation happens in ingest_csv. The API key,
    when configured, is sent as an X-API-Key header.
    """
    params = {}
    if date_range is not None:
        params["start"], params["end"] = date_range
    headers = {"X-API-Key": api_key} if api_key else {}
    try:
        resp = requests.get(endpoint_url, params=params, headers=headers,
                            timeout=timeout)
    except requests.RequestException as exc:
        raise NetworkError(f"fetch failed: {exc}") from exc
    if resp.status_code != 200:
        raise NetworkError(f"endpoint returned status {resp.status_code}")

    body = resp.text
    data_rows = 0
    for lineno, row in enumerate(csv.reader(body.splitlines()), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) < 2:
            raise MalformedResponseError(
                f"row {lineno} has no close column: {row!r}")
        try:
            float(row[1])
        except ValueError:
            if lineno == 1:
                continue  # header
            raise MalformedResponseError(
                f"row {lineno} close is not numeric: {row[1]!r}") from None
        data_rows += 1
    if data_rows == 0:
        raise MalformedResponseError("response contains no data rows")
    return write_atomic(out_path, body)
