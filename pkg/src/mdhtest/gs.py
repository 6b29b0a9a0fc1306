"""Generalized spectral test for nonlinear conditional-mean dependence.

The statistic aggregates, over every lag j, the quadratic form of the
per-lag centered residuals against the Gaussian Gram matrix of the lagged
values, with weights (T-j)/(j*pi)^2. Cost is O(T^3) for the full-lag
statistic; the hot loop is a compiled (numba) kernel with compensated
accumulation, with a pure-numpy fallback.

The wild bootstrap rescales residuals (not conditioning values) by
external noise and re-centers them per lag exactly as the observed
statistic does, so the Gram matrix is fixed across replications. Because
re-centering is the projection P_j = I - 11'/n, each replication is a
quadratic form in the multipliers against the time-indexed matrix

    Q[t, s] = sum_j gamma_j * e_t^(j) * e_s^(j) * (P_j W_j P_j)[t-j, s-j]

built once at O(T^3); every replication is then a single O(T^2) form
eta' Q eta. Skipping the re-centering would center the bootstrap law on
sum_j gamma_j sum_t e_t^2 while the observed statistic has the Gram
matrix's mean level projected out, making the test blind (near-zero
rejection at any nominal size).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bootstrap import GS_DOMAIN, BootstrapConfig, draw_multipliers, substream
from .series import DegenerateSeriesError, ReturnSeries

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


@dataclass(frozen=True)
class GsOutcome:
    """One GS test run: CvM-norm statistic and its bootstrap p-value."""

    statistic: float
    p_value: float
    n_boot: int
    max_lag_used: int


def gram_matrix(series: ReturnSeries) -> np.ndarray:
    """T x T matrix of exp(-0.5 * (Y_a - Y_b)^2); symmetric, unit diagonal, PSD."""
    values = series.values
    if len(values) < 2:
        raise ValueError(f"need at least 2 observations, got {len(values)}")
    w = np.subtract.outer(values, values)
    np.square(w, out=w)
    w *= -0.5
    np.exp(w, out=w)
    return w


def _resolve_max_lag(T: int, max_lag) -> int:
    if max_lag is None or max_lag == "full":
        return T - 1
    j = int(max_lag)
    if not 1 <= j <= T - 1:
        raise ValueError(f"max_lag must be in [1, {T - 1}] or 'full', got {max_lag}")
    return j


def _check_series(series: ReturnSeries) -> np.ndarray:
    values = series.values
    if len(values) < 2:
        raise ValueError(f"need at least 2 observations, got {len(values)}")
    if np.ptp(values) == 0.0:
        raise DegenerateSeriesError("degenerate series: zero sample variance")
    return values


if _HAVE_NUMBA:

    @njit(cache=True)
    def _lag_terms_kernel(w, y, max_lag, build_q):
        """Per-lag weighted quadratic forms, and optionally the Q matrix.

        Each term accumulates with Neumaier compensation: the double sum
        mixes signs, and full-lag evaluation adds O(T^2) terms per lag.
        The bootstrap matrix uses the per-lag centered Gram block
        wt[a,b] = w[a,b] - (r[a] + r[b])/n + S/n^2, where r holds the
        block's column sums and S their total; r is peeled one row per lag.
        """
        T = y.shape[0]
        terms = np.zeros(max_lag)
        if build_q:
            q = np.zeros((T, T))
            r = np.zeros(T)
            for b in range(T):
                acc_r = 0.0
                for a in range(T - 1):
                    acc_r += w[a, b]
                r[b] = acc_r
        else:
            q = np.zeros((1, 1))
            r = np.zeros(1)
        for j in range(1, max_lag + 1):
            n = T - j
            mean = 0.0
            for t in range(j, T):
                mean += y[t]
            mean /= n
            gamma = (T - j) / (j * np.pi) ** 2
            if build_q:
                s_tot = 0.0
                for b in range(n):
                    s_tot += r[b]
                inv_n = 1.0 / n
                c0 = s_tot * inv_n * inv_n
            else:
                inv_n = 0.0
                c0 = 0.0
            acc = 0.0
            comp = 0.0
            for a in range(n):
                ca = y[a + j] - mean
                x = ca * ca * w[a, a]
                t1 = acc + x
                if abs(acc) >= abs(x):
                    comp += (acc - t1) + x
                else:
                    comp += (x - t1) + acc
                acc = t1
                if build_q:
                    wt = w[a, a] - (r[a] + r[a]) * inv_n + c0
                    q[a + j, a + j] += gamma * ca * ca * wt
                for b in range(a + 1, n):
                    cb = y[b + j] - mean
                    x = 2.0 * (ca * cb * w[a, b])
                    t1 = acc + x
                    if abs(acc) >= abs(x):
                        comp += (acc - t1) + x
                    else:
                        comp += (x - t1) + acc
                    acc = t1
                    if build_q:
                        wt = w[a, b] - (r[a] + r[b]) * inv_n + c0
                        q[a + j, b + j] += gamma * ca * cb * wt
            if build_q:
                for b in range(T):
                    r[b] -= w[n - 1, b]
            terms[j - 1] = gamma * (acc + comp)
        if build_q:
            for a in range(T):
                for b in range(a + 1, T):
                    q[b, a] = q[a, b]
        return terms, q

    def _lag_terms(w, y, max_lag):
        terms, _ = _lag_terms_kernel(w, y, max_lag, False)
        return terms

    def _lag_terms_and_q(w, y, max_lag):
        return _lag_terms_kernel(w, y, max_lag, True)

else:  # pragma: no cover - exercised only without numba

    def _lag_terms(w, y, max_lag):
        terms, _ = _lag_terms_numpy(w, y, max_lag, build_q=False)
        return terms

    def _lag_terms_and_q(w, y, max_lag):
        return _lag_terms_numpy(w, y, max_lag, build_q=True)


def _lag_terms_numpy(w, y, max_lag, build_q):
    """Vectorized per-lag evaluation; same contract as the compiled kernel."""
    T = len(y)
    terms = np.empty(max_lag)
    q = np.zeros((T, T)) if build_q else None
    for j in range(1, max_lag + 1):
        n = T - j
        c = y[j:] - y[j:].mean()
        gamma = (T - j) / (j * np.pi) ** 2
        block = w[:n, :n]
        terms[j - 1] = gamma * float(((c[:, None] * c[None, :]) * block).sum())
        if build_q:
            r = block.sum(axis=0)
            wt = block - (r[:, None] + r[None, :]) / n + r.sum() / n**2
            q[j:, j:] += gamma * ((c[:, None] * c[None, :]) * wt)
    return terms, q


def gs_statistic(series: ReturnSeries, max_lag="full") -> float:
    """Cramer-von Mises norm D^2 over lags 1..max_lag (default all T-1).

    Residuals are re-centered on the per-lag mean of the surviving
    observations. Per-lag terms are each nonnegative (Schur product of PSD
    factors), and are combined with exact summation.
    """
    values = _check_series(series)
    J = _resolve_max_lag(len(values), max_lag)
    w = gram_matrix(series)
    terms = _lag_terms(w, values, J)
    return float(math.fsum(terms))


def truncation_bound(series: ReturnSeries, max_lag) -> float:
    """Upper bound on the statistic mass dropped by truncating at max_lag.

    Bounds each omitted lag term by gamma_j * (sum_t |e_t^(j)|)^2, using
    that every Gram entry lies in (0, 1].
    """
    values = _check_series(series)
    T = len(values)
    J = _resolve_max_lag(T, max_lag)
    bound = 0.0
    for j in range(J + 1, T):
        c = values[j:] - values[j:].mean()
        s = float(np.abs(c).sum())
        bound += (T - j) / (j * np.pi) ** 2 * s * s
    return bound


def gs_test(
    series: ReturnSeries,
    boot: BootstrapConfig,
    max_lag="full",
    workers: int = 1,
) -> GsOutcome:
    """GS test with wild-bootstrap p-value (right-tailed; D^2 is a norm).

    Replication j rescales every residual e_t^(j) by eta_t drawn from
    ``substream(boot.seed, GS_DOMAIN, j)`` -- one multiplier per time index,
    shared across lags -- then re-centers per lag, while the Gram matrix of
    the original conditioning values stays fixed. With Q precomputed (see
    module docstring) each replication is the quadratic form eta' Q eta.
    Output is identical for any ``workers`` count.
    """
    values = _check_series(series)
    T = len(values)
    J = _resolve_max_lag(T, max_lag)
    w = gram_matrix(series)
    terms, q = _lag_terms_and_q(w, values, J)
    statistic = float(math.fsum(terms))

    def one_replication(j: int) -> float:
        rng = substream(boot.seed, GS_DOMAIN, j)
        eta = draw_multipliers(rng, boot.multiplier, T)
        return float(eta @ (q @ eta))

    boot_stats = _map_replications(one_replication, boot.n_boot, workers)
    exceed = int(np.sum(boot_stats >= statistic))
    p_value = (1.0 + exceed) / (boot.n_boot + 1.0)
    return GsOutcome(
        statistic=statistic, p_value=p_value, n_boot=boot.n_boot, max_lag_used=J
    )


def _map_replications(fn, n_boot: int, workers: int) -> np.ndarray:
    out = np.empty(n_boot)
    if workers <= 1:
        for j in range(n_boot):
            out[j] = fn(j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for j, value in enumerate(pool.map(fn, range(n_boot))):
                out[j] = value
    return out
