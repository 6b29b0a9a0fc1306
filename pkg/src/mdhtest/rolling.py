"""Calendar rolling-window engine over either test.

Windows are half-open calendar-year intervals anchored at January 1 of the
first observation's year and advanced in whole-year steps, so boundaries do
not depend on the first trading day. Each window gets its own bootstrap
seed derived from (master seed, window index): results are identical
whether windows run serially or in parallel, and a re-run with the same
seed reproduces every window bit for bit.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .avr import AvrOutcome, avr_test
from .bootstrap import WINDOW_DOMAIN, BootstrapConfig, derive_seed
from .gs import GsOutcome, gs_test
from .series import ReturnSeries

TESTS = ("avr", "gs")


@dataclass(frozen=True)
class WindowSpec:
    """Rolling-window geometry: width and stride in calendar years."""

    window_years: int
    step_years: int = 1
    min_observations: int = 30

    def __post_init__(self):
        if self.window_years < 1:
            raise ValueError(f"window_years must be >= 1, got {self.window_years}")
        if self.step_years < 1:
            raise ValueError(f"step_years must be >= 1, got {self.step_years}")
        if self.min_observations < 10:
            raise ValueError(
                f"min_observations must be >= 10, got {self.min_observations}"
            )

    @classmethod
    def for_frequency(cls, frequency: str) -> "WindowSpec":
        """Defaults sized to give a few hundred observations per window."""
        if frequency == "daily":
            return cls(window_years=2)
        if frequency == "weekly":
            return cls(window_years=5)
        raise ValueError(f"no window defaults for frequency {frequency!r}")


class Window(NamedTuple):
    """One calendar window: inclusive date bounds plus the index range."""

    start: np.datetime64
    end: np.datetime64
    lo: int
    hi: int


@dataclass(frozen=True)
class WindowResult:
    """Outcome of one window, or a skip marker explaining its absence."""

    start: np.datetime64
    end: np.datetime64
    n_obs: int
    outcome: Optional[Union[AvrOutcome, GsOutcome]]
    skip_reason: Optional[str]

    @property
    def significant_5pct(self) -> Optional[bool]:
        if self.outcome is None:
            return None
        return self.outcome.p_value < 0.05


@dataclass(frozen=True)
class RollingResult:
    """Ordered per-window outcomes for one test over one series."""

    test: str
    windows: tuple


def _year(date: np.datetime64) -> int:
    return date.astype("datetime64[Y]").astype(int) + 1970


def make_windows(series: ReturnSeries, spec: WindowSpec) -> list:
    """Enumerate calendar windows and their observation index ranges.

    Window i covers [anchor + i*step, anchor + i*step + window) in years,
    anchored at January 1 of the first observation's year; windows are
    generated while they end within the calendar year after the last
    observation's. Reported end dates are the inclusive final day. A window
    may map to an empty index range (data gaps); the caller decides how to
    treat thin windows.
    """
    dates = series.dates
    anchor = _year(dates[0])
    last = _year(dates[-1])
    windows = []
    i = 0
    while True:
        start_year = anchor + i * spec.step_years
        end_year = start_year + spec.window_years
        if end_year > last + 1:
            break
        start = np.datetime64(f"{start_year:04d}-01-01", "D")
        end_open = np.datetime64(f"{end_year:04d}-01-01", "D")
        lo = int(np.searchsorted(dates, start, side="left"))
        hi = int(np.searchsorted(dates, end_open, side="left"))
        windows.append(Window(start, end_open - np.timedelta64(1, "D"), lo, hi))
        i += 1
    return windows


def run_rolling(
    series: ReturnSeries,
    spec: WindowSpec,
    test: str,
    boot: BootstrapConfig,
    workers: int = 1,
) -> RollingResult:
    """Apply one test per window; thin or degenerate windows become markers.

    Window w's bootstrap seed is ``derive_seed(boot.seed, WINDOW_DOMAIN, w)``,
    so the full result depends only on (series, spec, test, boot), not on
    scheduling or ``workers``.
    """
    if test not in TESTS:
        raise ValueError(f"test must be one of {TESTS}, got {test!r}")
    windows = make_windows(series, spec)

    def one_window(w: int) -> WindowResult:
        win = windows[w]
        n = win.hi - win.lo
        if n < spec.min_observations:
            return WindowResult(
                start=win.start,
                end=win.end,
                n_obs=n,
                outcome=None,
                skip_reason=f"insufficient observations: {n} < {spec.min_observations}",
            )
        child = BootstrapConfig(
            n_boot=boot.n_boot,
            multiplier=boot.multiplier,
            seed=derive_seed(boot.seed, WINDOW_DOMAIN, w),
        )
        sub = series.slice(win.lo, win.hi)
        try:
            if test == "avr":
                outcome = avr_test(sub, child)
            else:
                outcome = gs_test(sub, child)
        except ValueError as exc:
            return WindowResult(
                start=win.start, end=win.end, n_obs=n, outcome=None,
                skip_reason=str(exc),
            )
        return WindowResult(
            start=win.start, end=win.end, n_obs=n, outcome=outcome, skip_reason=None
        )

    if workers <= 1:
        results = [one_window(w) for w in range(len(windows))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_window, range(len(windows))))
    return RollingResult(test=test, windows=tuple(results))
