"""Return-series container and the shared moment/autocorrelation estimators.

Everything downstream (variance-ratio and spectral tests, rolling windows)
consumes the :class:`ReturnSeries` defined here. Moment estimators use the
population convention (divide by T, kurtosis raw, not excess): that is the
convention under which the Jarque-Bera statistic recomputed from published
(size, skew, kurt) triples matches the reference values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft
from scipy import stats as _stats

FREQUENCIES = ("daily", "weekly")

# np.correlate (direct MAC loop) below this length, FFT above.
_DIRECT_ACV_LIMIT = 2048


class DegenerateSeriesError(ValueError):
    """Raised when a computation requires positive sample variance."""


def _as_dates(dates) -> np.ndarray:
    try:
        return np.asarray(dates, dtype="datetime64[D]")
    except (ValueError, TypeError) as exc:
        raise ValueError(f"dates are not parseable as calendar dates: {exc}") from None


@dataclass(frozen=True)
class ReturnSeries:
    """Ordered, dated sequence of simple returns at a declared frequency.

    Invariants enforced at construction: values and dates have equal length
    >= 1, dates are strictly increasing, and every value is finite.
    """

    values: np.ndarray
    dates: np.ndarray
    frequency: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        dates = _as_dates(self.dates)
        if values.ndim != 1 or dates.ndim != 1:
            raise ValueError("values and dates must be one-dimensional")
        if len(values) != len(dates):
            raise ValueError(
                f"values and dates differ in length ({len(values)} vs {len(dates)})"
            )
        if len(values) == 0:
            raise ValueError("a return series needs at least one observation")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ValueError(f"non-finite return at position {bad}")
        if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
            bad = int(np.flatnonzero(dates[1:] <= dates[:-1])[0])
            raise ValueError(
                f"dates must be strictly increasing (violation at position {bad + 1})"
            )
        if self.frequency not in FREQUENCIES:
            raise ValueError(
                f"unknown frequency {self.frequency!r}; expected one of {FREQUENCIES}"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dates", dates)

    def __len__(self) -> int:
        return len(self.values)

    def slice(self, lo: int, hi: int) -> "ReturnSeries":
        """Contiguous sub-series over index range [lo, hi)."""
        if not 0 <= lo < hi <= len(self):
            raise ValueError(f"invalid slice [{lo}, {hi}) for length {len(self)}")
        return ReturnSeries(self.values[lo:hi], self.dates[lo:hi], self.frequency)


@dataclass(frozen=True)
class MomentSummary:
    """Descriptive statistics of one series, population-style estimators."""

    size: int
    mean: float
    std: float
    skewness: float
    kurtosis: float  # raw, not excess
    jarque_bera: float
    jb_p: float


def jarque_bera_from_moments(size: int, skewness: float, kurtosis: float) -> float:
    """JB statistic from sample size, skewness and raw kurtosis."""
    return size / 6.0 * (skewness**2 + (kurtosis - 3.0) ** 2 / 4.0)


def describe(series: ReturnSeries) -> MomentSummary:
    """Moment summary plus Jarque-Bera normality statistic.

    Requires at least 4 observations and positive variance; the JB p-value
    uses the asymptotic chi-square(2) upper tail.
    """
    n = len(series)
    if n < 4:
        raise ValueError(f"need at least 4 observations to describe, got {n}")
    values = series.values
    mean = float(values.mean())
    d = values - mean
    m2 = float(np.mean(d * d))
    if m2 <= 0.0:
        raise DegenerateSeriesError("degenerate series: zero sample variance")
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    skewness = m3 / m2**1.5
    kurtosis = m4 / m2**2
    jb = jarque_bera_from_moments(n, skewness, kurtosis)
    jb_p = float(_stats.chi2.sf(jb, 2))
    return MomentSummary(
        size=n,
        mean=mean,
        std=math.sqrt(m2),
        skewness=skewness,
        kurtosis=kurtosis,
        jarque_bera=jb,
        jb_p=jb_p,
    )


def _demeaned(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Centered values and their sum of squares; errors if degenerate."""
    d = values - values.mean()
    den = float(d @ d)
    if den <= 0.0:
        raise DegenerateSeriesError("degenerate series: zero sample variance")
    return d, den


def autocorr(series: ReturnSeries, lag: int) -> float:
    """Sample autocorrelation at one lag.

    rho(lag) = sum_{t<=T-lag} (Y_t - mu)(Y_{t+lag} - mu) / sum_t (Y_t - mu)^2
    with mu the full-sample mean.
    """
    T = len(series)
    if not 1 <= lag <= T - 1:
        raise ValueError(f"lag must be in [1, {T - 1}], got {lag}")
    d, den = _demeaned(series.values)
    return float(d[:-lag] @ d[lag:]) / den


def autocorrelations(values: np.ndarray, max_lag: int | None = None) -> np.ndarray:
    """Sample autocorrelations for lags 1..max_lag (default T-1), as one array.

    Same estimator as :func:`autocorr`; computed jointly for all lags, by a
    direct correlation for short series and via FFT beyond
    ``_DIRECT_ACV_LIMIT`` observations.
    """
    values = np.asarray(values, dtype=np.float64)
    T = len(values)
    if max_lag is None:
        max_lag = T - 1
    if not 1 <= max_lag <= T - 1:
        raise ValueError(f"max_lag must be in [1, {T - 1}], got {max_lag}")
    d, den = _demeaned(values)
    if T <= _DIRECT_ACV_LIMIT:
        acv = np.correlate(d, d, mode="full")[T - 1 :]
    else:
        n = _fft.next_fast_len(2 * T - 1, real=True)
        spec = _fft.rfft(d, n)
        acv = _fft.irfft(spec * np.conj(spec), n)[:T]
    return acv[1 : max_lag + 1] / den
