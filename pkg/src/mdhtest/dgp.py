"""Seeded synthetic data-generating processes for size/power studies.

Four reference processes: iid Gaussian noise (the plain null), GARCH(1,1)
(a martingale difference with conditional heteroskedasticity, the null the
wild bootstrap exists for), AR(1) (a linear-in-mean alternative), and the
diagonal bilinear process Y_t = b*Y_{t-1}*eps_{t-1} + eps_t (predictable
through a nonlinear channel, with only a faint linear trace: lag-1
autocorrelation b^2*(1-b^2)/(1+b^2+b^4), under 0.12 for |b| <= 0.4, and
zero at every longer lag -- the case where the generalized spectral test
holds a large power advantage over autocorrelation-based tests).

Generation draws from ``substream(seed, DGP_DOMAIN)``: the same spec always
yields the same series, and nothing touches global RNG state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from scipy.signal import lfilter

from .bootstrap import DGP_DOMAIN, substream
from .series import FREQUENCIES, ReturnSeries

KINDS = ("iid_normal", "ar1", "garch11", "bilinear")
_RECURSIVE = ("ar1", "garch11", "bilinear")
_PARAM_NAMES = {
    "iid_normal": frozenset(),
    "ar1": frozenset({"phi"}),
    "garch11": frozenset({"omega", "alpha", "beta"}),
    "bilinear": frozenset({"b"}),
}
_START_DATE = np.datetime64("2000-01-03", "D")


@dataclass(frozen=True)
class DgpSpec:
    """Full description of one synthetic series; validated at construction."""

    kind: str
    length: int
    seed: int
    params: Mapping[str, float] = field(default_factory=dict)
    burn_in: Optional[int] = None
    frequency: str = "daily"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")
        if self.frequency not in FREQUENCIES:
            raise ValueError(
                f"frequency must be one of {FREQUENCIES}, got {self.frequency!r}"
            )
        expected = _PARAM_NAMES[self.kind]
        got = frozenset(self.params)
        if got != expected:
            raise ValueError(
                f"{self.kind} takes params {sorted(expected)}, got {sorted(got)}"
            )
        for name, value in self.params.items():
            v = float(value)
            if not math.isfinite(v):
                raise ValueError(f"param {name} must be finite, got {value!r}")
        if self.burn_in is None:
            # recursive processes need warmup to forget their start state
            object.__setattr__(
                self, "burn_in", 200 if self.kind in _RECURSIVE else 0
            )
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.kind in _RECURSIVE and self.burn_in < 100:
            raise ValueError(
                f"burn_in must be >= 100 for {self.kind}, got {self.burn_in}"
            )
        self._check_stationarity()

    def _check_stationarity(self):
        p = self.params
        if self.kind == "ar1":
            phi = float(p["phi"])
            if not abs(phi) < 1.0:
                raise ValueError(f"ar1 requires |phi| < 1, got phi={phi}")
        elif self.kind == "garch11":
            omega = float(p["omega"])
            alpha = float(p["alpha"])
            beta = float(p["beta"])
            if omega <= 0.0:
                raise ValueError(f"garch11 requires omega > 0, got {omega}")
            if alpha < 0.0 or beta < 0.0:
                raise ValueError(
                    f"garch11 requires alpha, beta >= 0, got {alpha}, {beta}"
                )
            if alpha + beta >= 1.0:
                raise ValueError(
                    f"garch11 requires alpha + beta < 1, got {alpha + beta}"
                )
        elif self.kind == "bilinear":
            b = float(p["b"])
            if not abs(b) < 1.0:
                raise ValueError(f"bilinear requires |b| < 1, got b={b}")


def generate(spec: DgpSpec) -> ReturnSeries:
    """Simulate the process, drop burn-in, attach evenly spaced dates."""
    rng = substream(spec.seed, DGP_DOMAIN)
    total = spec.burn_in + spec.length
    if spec.kind == "iid_normal":
        y = rng.standard_normal(total)
    elif spec.kind == "ar1":
        phi = float(spec.params["phi"])
        eps = rng.standard_normal(total)
        y = lfilter([1.0], [1.0, -phi], eps)
    elif spec.kind == "garch11":
        omega = float(spec.params["omega"])
        alpha = float(spec.params["alpha"])
        beta = float(spec.params["beta"])
        eps = rng.standard_normal(total)
        y = np.empty(total)
        h = omega / (1.0 - alpha - beta)  # unconditional variance
        for t in range(total):
            y[t] = math.sqrt(h) * eps[t]
            h = omega + alpha * y[t] * y[t] + beta * h
    else:
        b = float(spec.params["b"])
        eps = rng.standard_normal(total)
        y = np.empty(total)
        y[0] = eps[0]
        for t in range(1, total):
            y[t] = b * y[t - 1] * eps[t - 1] + eps[t]
    step = np.timedelta64(1 if spec.frequency == "daily" else 7, "D")
    dates = _START_DATE + np.arange(spec.length) * step
    return ReturnSeries(values=y[spec.burn_in:], dates=dates, frequency=spec.frequency)
