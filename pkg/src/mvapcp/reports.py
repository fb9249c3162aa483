"""File formats: price input, flat key-value configs, CSV tables and run manifests."""

from __future__ import annotations

import csv
import datetime as _dt
import os
import platform
from pathlib import Path

import numpy as np

from .errors import DataError, InvalidSpecError
from .market_models import TRADING_DAYS, discount_prices

DEFAULTS = {
    "gamma": 1.4,
    "r": 0.02,
    "horizon": 1.0,
    "steps": 252,
    "window": 252,
    "w0": 1.0,
    "paths": 10_000,
    "seed": 0,
    "out": "results",
    "signed": True,
    "sigma_threshold": 0.1,
    "strategies": None,
    # gbm
    "mus": (0.08, 0.1, 0.12),
    "sigma": 0.1,
    # table1
    "dts": (21 / 252, 12 / 252, 1 / 252),
    "reps": 10_000,
    # heston
    "a": 8.5,
    "iotas": (40.0, 42.5, 45.0),
    "kappas": (-0.6, -0.7, -0.8),
    "k_level": 0.01,
    "v": 0.6,
    "x0": 0.02,
    "samples": 6,
    # real
    "prices": None,
    "close_kind": "unspecified",
}

_INT_KEYS = {"steps", "window", "paths", "seed", "reps", "samples"}
_LIST_KEYS = {"mus", "dts", "iotas", "kappas"}


def _coerce(key, value):
    if key not in DEFAULTS:
        raise InvalidSpecError(f"unknown config key {key!r}")
    if not isinstance(value, str):
        return value
    value = value.strip()
    if key in _INT_KEYS:
        return int(value)
    if key in _LIST_KEYS:
        return tuple(_number(v) for v in value.split(",") if v.strip())
    if key == "strategies":
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if key == "signed":
        return value.lower() in ("1", "true", "yes", "on")
    if key in ("out", "prices", "close_kind"):
        return value
    return _number(value)


def _number(text):
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return float(num) / float(den)
    return float(text)


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidSpecError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key] = _coerce(key, value)
    return out


def resolve_config(file_values=None, overrides=None) -> dict:
    """Merge defaults < config file < command-line overrides."""
    cfg = dict(DEFAULTS)
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is not None:
                cfg[key] = _coerce(key, value)
    return cfg


def ingest_prices(path, r=0.02, dt=1.0 / TRADING_DAYS):
    """Read a ``date,close`` file and return its discounted price path.

    Rows are trading days in file order; data rows are numbered from 1 in
    error messages.
    """
    dates, closes = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["date", "close"]:
            raise DataError(f"{path}: header must be 'date,close', got {header}")
        for row_no, row in enumerate(reader, 1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DataError(f"row {row_no}: expected 2 fields, got {len(row)}", index=row_no)
            try:
                day = _dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise DataError(f"row {row_no}: bad date {row[0]!r}", index=row_no) from None
            try:
                close = float(row[1])
            except ValueError:
                raise DataError(f"row {row_no}: bad close {row[1]!r}", index=row_no) from None
            if not close > 0:
                raise DataError(f"row {row_no}: close must be positive, got {close}", index=row_no)
            if dates and day <= dates[-1]:
                what = "duplicate" if day == dates[-1] else "retrograde"
                raise DataError(f"row {row_no}: {what} date {day}", index=row_no)
            dates.append(day)
            closes.append(close)
    if len(closes) < 2:
        raise DataError(f"{path}: need at least 2 price rows, got {len(closes)}")
    path_obj = discount_prices(closes, r, dt=dt)
    path_obj.meta.update({"source": Path(path).name, "first_date": dates[0].isoformat(),
                          "last_date": dates[-1].isoformat()})
    return path_obj


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, rows, columns=None):
    """Write dict rows with full-precision floats; columns default to first-seen order."""
    if columns is None:
        columns = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c, "")) for c in columns])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def pivot_table(summary_rows, metric, row_keys, strategies):
    """Reshape summary rows into one row per setting and one column per strategy."""
    table = {}
    for row in summary_rows:
        key = tuple(row[k] for k in row_keys)
        table.setdefault(key, {k: row[k] for k in row_keys})[row["strategy"]] = row[metric]
    cols = list(row_keys) + [s for s in strategies if any(s in r for r in table.values())]
    return [table[k] for k in table], cols


def write_manifest(path, command, config, extra=None):
    """Config echo, seed and code version. The timestamp line is the only varying one."""
    from . import __version__

    lines = [f"command = {command}", f"version = {__version__}",
             f"python = {platform.python_version()}", f"numpy = {np.__version__}"]
    for key in sorted(config):
        value = config[key]
        if isinstance(value, tuple):
            value = ",".join(_fmt(v) for v in value)
        lines.append(f"{key} = {_fmt(value)}")
    for key, value in (extra or {}).items():
        lines.append(f"{key} = {_fmt(value)}")
    lines.append(f"timestamp = {_dt.datetime.now(_dt.timezone.utc).isoformat()}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def ensure_out_dir(path):
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InvalidSpecError(f"cannot create output directory {path}: {exc}") from None
    if not os.access(path, os.W_OK):
        raise InvalidSpecError(f"output directory {path} is not writable")
    return path
