"""CSV panel ingestion and the equal-weighted portfolio series.

Input is a per-instrument return panel, either long form
(``date,instrument,return``) or wide form (``date`` plus one column per
instrument, blank cells meaning the instrument has no observation that
date). Validation is strict and every error carries the offending file
line number; missing observations stay missing and are never zero-filled.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date as _date

import numpy as np

from .series import FREQUENCIES, ReturnSeries

FORMATS = ("long", "wide")


class PanelError(ValueError):
    """Malformed panel input: parse failure or invariant violation."""


@dataclass(frozen=True)
class PanelInput:
    """Validated long-form panel: parallel arrays of (date, instrument, return)."""

    dates: np.ndarray
    instruments: np.ndarray
    returns: np.ndarray

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        instruments = np.asarray(self.instruments, dtype=object)
        returns = np.asarray(self.returns, dtype=np.float64)
        if not (len(dates) == len(instruments) == len(returns)):
            raise PanelError(
                "dates, instruments and returns must have equal length, got "
                f"{len(dates)}, {len(instruments)}, {len(returns)}"
            )
        if len(returns) and not np.all(np.isfinite(returns)):
            bad = int(np.flatnonzero(~np.isfinite(returns))[0])
            raise PanelError(f"non-finite return at row {bad}")
        seen = {}
        for i in range(len(dates)):
            key = (dates[i].astype(str), instruments[i])
            if key in seen:
                raise PanelError(
                    f"duplicate (date, instrument) {key} at rows {seen[key]} and {i}"
                )
            seen[key] = i
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "instruments", instruments)
        object.__setattr__(self, "returns", returns)

    def __len__(self) -> int:
        return len(self.returns)


def _parse_date(text: str, line: int) -> str:
    try:
        return _date.fromisoformat(text.strip()).isoformat()
    except ValueError:
        raise PanelError(f"line {line}: invalid ISO-8601 date {text!r}") from None


def _parse_return(text: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise PanelError(f"line {line}: invalid return {text!r}") from None
    if not math.isfinite(value):
        raise PanelError(f"line {line}: non-finite return {text!r}")
    return value


def _read_csv(path: str) -> list:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return list(csv.reader(fh))
    except OSError as exc:
        raise PanelError(f"cannot read {path}: {exc}") from None


def load_panel(path: str, format: str = "long") -> PanelInput:
    """Read and validate a CSV panel; all diagnostics name file lines."""
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    rows = _read_csv(path)
    if not rows:
        raise PanelError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if format == "long":
        return _load_long(path, header, rows)
    return _load_wide(path, header, rows)


def _load_long(path, header, rows) -> PanelInput:
    if header != ["date", "instrument", "return"]:
        raise PanelError(
            f"{path}: long format needs header date,instrument,return, "
            f"got {','.join(header)}"
        )
    dates, instruments, returns = [], [], []
    seen = {}
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) != 3:
            raise PanelError(f"line {line}: expected 3 fields, got {len(row)}")
        iso = _parse_date(row[0], line)
        instrument = row[1].strip()
        if not instrument:
            raise PanelError(f"line {line}: empty instrument id")
        key = (iso, instrument)
        if key in seen:
            raise PanelError(
                f"duplicate (date, instrument) {key} at lines {seen[key]} and {line}"
            )
        seen[key] = line
        dates.append(iso)
        instruments.append(instrument)
        returns.append(_parse_return(row[2], line))
    return _build(dates, instruments, returns)


def _load_wide(path, header, rows) -> PanelInput:
    if len(header) < 2 or header[0] != "date":
        raise PanelError(
            f"{path}: wide format needs header date,<id>,... got {','.join(header)}"
        )
    ids = header[1:]
    if any(not c for c in ids):
        raise PanelError(f"{path}: empty instrument column name in header")
    if len(set(ids)) != len(ids):
        dupes = sorted({c for c in ids if ids.count(c) > 1})
        raise PanelError(f"{path}: duplicate instrument columns {dupes}")
    dates, instruments, returns = [], [], []
    seen = {}
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) != len(header):
            raise PanelError(
                f"line {line}: expected {len(header)} fields, got {len(row)}"
            )
        iso = _parse_date(row[0], line)
        if iso in seen:
            raise PanelError(f"duplicate date {iso} at lines {seen[iso]} and {line}")
        seen[iso] = line
        for instrument, cell in zip(ids, row[1:]):
            if cell.strip() == "":
                continue  # explicit absence, never zero-filled
            dates.append(iso)
            instruments.append(instrument)
            returns.append(_parse_return(cell, line))
    return _build(dates, instruments, returns)


def _build(dates, instruments, returns) -> PanelInput:
    return PanelInput(
        dates=np.array(dates, dtype="datetime64[D]"),
        instruments=np.array(instruments, dtype=object),
        returns=np.array(returns, dtype=np.float64),
    )


def equal_weight_series(panel: PanelInput, frequency: str) -> ReturnSeries:
    """Cross-sectional mean return per date over the instruments present."""
    if frequency not in FREQUENCIES:
        raise ValueError(f"frequency must be one of {FREQUENCIES}, got {frequency!r}")
    if len(panel) == 0:
        raise PanelError("empty panel: no observations to average")
    unique_dates, inverse = np.unique(panel.dates, return_inverse=True)
    sums = np.zeros(len(unique_dates))
    np.add.at(sums, inverse, panel.returns)
    counts = np.bincount(inverse, minlength=len(unique_dates))
    return ReturnSeries(
        values=sums / counts, dates=unique_dates, frequency=frequency
    )
