"""Six Hurst-parameter estimators with shared ACF, periodogram, and
log-log-regression utilities.

Every estimator returns a :class:`HurstEstimate`; regression-based methods
attach the underlying :class:`ScalingFit`. All methods are invariant under
affine rescaling of the input, and all except rescaled range are invariant
under time reversal (rescaled range is path-ordered by construction).

Scale ladders, frequency cutoffs, and octave ranges are fixed defaults chosen
once for reproducibility; each class exposes its own knobs through the
sklearn-style constructor parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft
from scipy import optimize
from sklearn.base import BaseEstimator

from .exceptions import (
    ConstantSeriesError,
    NoConvergenceError,
    TooShortError,
)
from .series import check_min_length, check_not_constant, series_values

METHODS = ("rs", "rs_modified", "aggvar", "periodogram", "local_whittle", "wavelet")

_SQRT2 = math.sqrt(2.0)
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ScalingFit:
    """A log-log regression record: points, fitted line, goodness of fit."""

    xs: np.ndarray
    ys: np.ndarray
    slope: float
    intercept: float
    r2: float

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        ys = np.asarray(self.ys, dtype=np.float64)
        if xs.size != ys.size or xs.size < 3:
            raise TooShortError("scaling fit needs >= 3 equally long coordinate arrays")
        if not np.all(np.diff(xs) > 0):
            raise ValueError("scaling fit xs must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)


@dataclass(frozen=True)
class HurstEstimate:
    """One estimator's output: method tag, point estimate, optional 95% CI,
    fit diagnostics, and the sample count it consumed."""

    method: str
    h: float
    ci_low: float | None = None
    ci_high: float | None = None
    fit: ScalingFit | None = None
    n_used: int = 0

    def __post_init__(self):
        if not math.isfinite(self.h):
            raise ValueError("estimate must be finite")
        if (self.ci_low is None) != (self.ci_high is None):
            raise ValueError("confidence bounds must come as a pair")
        if self.ci_low is not None and not (self.ci_low <= self.h <= self.ci_high):
            raise ValueError("need ci_low <= h <= ci_high")


def fit_log_line(xs, ys, weights=None) -> ScalingFit:
    """Least-squares line through (xs, ys), optionally weighted; returns a
    ScalingFit with (weighted) r2 clamped into [0, 1]."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    w = np.ones_like(xs) if weights is None else np.asarray(weights, dtype=np.float64)
    s0 = w.sum()
    xbar = (w * xs).sum() / s0
    ybar = (w * ys).sum() / s0
    sxx = (w * (xs - xbar) ** 2).sum()
    sxy = (w * (xs - xbar) * (ys - ybar)).sum()
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    resid = ys - (intercept + slope * xs)
    ss_res = (w * resid**2).sum()
    ss_tot = (w * (ys - ybar) ** 2).sum()
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ScalingFit(xs, ys, float(slope), float(intercept), float(min(max(r2, 0.0), 1.0)))


def _slope_stderr(fit: ScalingFit, weights=None) -> float:
    xs, ys = fit.xs, fit.ys
    w = np.ones_like(xs) if weights is None else np.asarray(weights, dtype=np.float64)
    s0 = w.sum()
    xbar = (w * xs).sum() / s0
    sxx = (w * (xs - xbar) ** 2).sum()
    resid = ys - (fit.intercept + fit.slope * xs)
    dof = max(xs.size - 2, 1)
    s2 = (w * resid**2).sum() / dof
    return math.sqrt(s2 / sxx)


# ---------------------------------------------------------------------------
# shared transforms

def acf(series, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 0..max_lag (rho(0) = 1), FFT-based,
    biased normalization (divide by n) so the sequence stays in [-1, 1]."""
    x = series_values(series)
    n = x.size
    if max_lag < 1 or max_lag >= n:
        raise TooShortError(f"need series length > max_lag >= 1, got n={n}, max_lag={max_lag}")
    check_not_constant(x, "acf")
    xc = x - x.mean()
    m = _fft.next_fast_len(2 * n)
    f = _fft.rfft(xc, m)
    s = _fft.irfft(f * np.conj(f), m)[: max_lag + 1]
    return s / s[0]


def periodogram(series):
    """Periodogram I(lambda_j) = |sum x_t e^{-i lambda_j t}|^2 / n at the
    positive Fourier frequencies lambda_j = 2 pi j / n, j = 1..n//2.

    With this normalization the mean of I over all n-1 nonzero frequencies
    equals the ddof=1 sample variance exactly.
    """
    x = series_values(series)
    n = x.size
    if n < 4:
        raise TooShortError(f"periodogram needs at least 4 samples, got {n}")
    xc = x - x.mean()
    f = _fft.rfft(xc)
    power = np.abs(f[1: n // 2 + 1]) ** 2 / n
    lam = 2.0 * np.pi * np.arange(1, n // 2 + 1) / n
    return lam, power


def _geometric_scales(lo: int, hi: int, ratio: float = _SQRT2) -> np.ndarray:
    out = []
    s = float(lo)
    while round(s) <= hi:
        v = int(round(s))
        if not out or v > out[-1]:
            out.append(v)
        s *= ratio
    return np.asarray(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# rescaled range

def _rs_points(x: np.ndarray):
    """Mean rescaled range per scale over all disjoint windows."""
    n = x.size
    scales = _geometric_scales(10, n // 4)
    keep_s, keep_v = [], []
    for s in scales:
        w = n // s
        win = x[: w * s].reshape(w, s)
        dev = win - win.mean(axis=1, keepdims=True)
        cs = np.cumsum(dev, axis=1)
        r = cs.max(axis=1) - cs.min(axis=1)
        sd = win.std(axis=1)
        ok = sd > 0
        if not ok.any():
            continue
        keep_s.append(s)
        keep_v.append(float((r[ok] / sd[ok]).mean()))
    return np.asarray(keep_s, dtype=np.float64), np.asarray(keep_v, dtype=np.float64)


def _rs_fit(scales: np.ndarray, values: np.ndarray, variant: str, n: int) -> HurstEstimate:
    if scales.size < 3:
        raise TooShortError("rescaled range needs at least 3 usable scales")
    ls, lv = np.log(scales), np.log(values)
    if variant == "modified":
        span = ls[-1] - ls[0]
        keep = (ls >= ls[0] + 0.15 * span) & (ls <= ls[-1] - 0.15 * span)
        if keep.sum() < 3:
            raise TooShortError("modified rescaled range needs at least 3 middle scales")
        ls, lv = ls[keep], lv[keep]
    fit = fit_log_line(ls, lv)
    method = "rs" if variant == "classic" else "rs_modified"
    return HurstEstimate(method, fit.slope, fit=fit, n_used=n)


def rs_estimate(series, variant: str = "classic") -> HurstEstimate:
    """Rescaled-range estimate: slope of log(R/S) against log(scale).

    classic fits every ladder scale from 10 up to n/4; modified drops the
    lowest and highest 15% of the log-scale range and fits the middle, which
    trims the scales where the statistic is known to be least reliable.
    """
    if variant not in ("classic", "modified"):
        raise ValueError(f"variant must be classic or modified, got {variant!r}")
    x = series_values(series)
    check_min_length(x, 2**9, "rs_estimate")
    check_not_constant(x, "rs_estimate")
    scales, values = _rs_points(x)
    return _rs_fit(scales, values, variant, x.size)


# ---------------------------------------------------------------------------
# aggregated variance

def aggvar_estimate(series) -> HurstEstimate:
    """Aggregated-variance estimate: Var of block means scales like m**(2H-2).

    Each block size is evaluated on both the start-aligned and end-aligned
    partitions and the two variances averaged; this makes the estimate exactly
    invariant under time reversal despite dropped partial blocks.

    Block sizes stop at n/32: with fewer than ~32 blocks the sample variance
    of the (correlated) block means is deflated by the grand-mean term, which
    systematically drags the fitted slope down.
    """
    x = series_values(series)
    check_min_length(x, 2**10, "aggvar_estimate")
    check_not_constant(x, "aggvar_estimate")
    n = x.size
    scales = _geometric_scales(10, n // 32)
    keep_m, keep_v = [], []
    for m in scales:
        w = n // m
        fwd = x[: w * m].reshape(w, m).mean(axis=1)
        bwd = x[n - w * m:].reshape(w, m).mean(axis=1)
        v = 0.5 * (fwd.var() + bwd.var())
        if v > 0:
            keep_m.append(m)
            keep_v.append(v)
    if len(keep_m) < 3:
        raise ConstantSeriesError("aggregated variance collapsed at all block sizes")
    fit = fit_log_line(np.log(keep_m), np.log(keep_v))
    return HurstEstimate("aggvar", 1.0 + fit.slope / 2.0, fit=fit, n_used=n)


# ---------------------------------------------------------------------------
# periodogram regression

def periodogram_estimate(series, frequency_fraction: float = 0.1) -> HurstEstimate:
    """Log-log periodogram regression over the lowest fraction of frequencies;
    the spectral slope near zero is 1 - 2H."""
    x = series_values(series)
    check_min_length(x, 2**10, "periodogram_estimate")
    check_not_constant(x, "periodogram_estimate")
    lam, power = periodogram(x)
    m = max(3, int(frequency_fraction * lam.size))
    lam, power = lam[:m], power[:m]
    ok = power > 0
    if ok.sum() < 3:
        raise ConstantSeriesError("periodogram vanished at the low frequencies")
    fit = fit_log_line(np.log(lam[ok]), np.log(power[ok]))
    h = (1.0 - fit.slope) / 2.0
    se = _slope_stderr(fit) / 2.0
    return HurstEstimate(
        "periodogram", h, ci_low=h - 1.96 * se, ci_high=h + 1.96 * se,
        fit=fit, n_used=x.size,
    )


# ---------------------------------------------------------------------------
# local Whittle

def local_whittle_estimate(series, bandwidth_power: float = 0.65) -> HurstEstimate:
    """Semiparametric frequency-domain estimate using the m = n**bandwidth_power
    lowest frequencies.

    Minimizes R(H) = log(mean_j lambda_j^{2H-1} I_j) - (2H-1) mean_j log lambda_j
    over H in [0.01, 0.99]. R is convex in H (its second derivative is a
    weighted variance), so the minimum is located by root-finding the closed
    form of R'(H), which is far better conditioned than comparing nearly equal
    objective values.
    """
    x = series_values(series)
    check_min_length(x, 2**10, "local_whittle_estimate")
    check_not_constant(x, "local_whittle_estimate")
    lam, power = periodogram(x)
    m = min(int(x.size**bandwidth_power), lam.size)
    if m < 3:
        raise TooShortError("local Whittle bandwidth came out below 3 frequencies")
    lam, power = lam[:m], power[:m]
    llam = np.log(lam)
    lbar = llam.mean()

    def dobjective(h):
        # R'(H)/2 = weighted mean of log lambda - plain mean of log lambda
        w = np.exp((2.0 * h - 1.0) * llam) * power
        tot = w.sum()
        if tot <= 0 or not np.isfinite(tot):
            raise NoConvergenceError("local Whittle objective is degenerate")
        return float((w * llam).sum() / tot - lbar)

    lo, hi = 0.01, 0.99
    dlo, dhi = dobjective(lo), dobjective(hi)
    if dlo >= 0.0:
        h = lo       # objective increasing on the whole interval
    elif dhi <= 0.0:
        h = hi       # objective decreasing on the whole interval
    else:
        try:
            h = float(optimize.brentq(dobjective, lo, hi, xtol=1e-12, rtol=8.9e-16))
        except (RuntimeError, ValueError) as exc:
            raise NoConvergenceError(f"local Whittle root search failed: {exc}") from exc
    se = 1.0 / (2.0 * math.sqrt(m))
    return HurstEstimate(
        "local_whittle", h, ci_low=h - 1.96 * se, ci_high=h + 1.96 * se,
        fit=None, n_used=x.size,
    )


# ---------------------------------------------------------------------------
# wavelet logscale

_D4_H = np.array([1.0 + math.sqrt(3.0), 3.0 + math.sqrt(3.0),
                  3.0 - math.sqrt(3.0), 1.0 - math.sqrt(3.0)]) / (4.0 * _SQRT2)
_D4_G = np.array([_D4_H[3], -_D4_H[2], _D4_H[1], -_D4_H[0]])


def _octave_energies(x: np.ndarray, n_octaves: int) -> np.ndarray:
    """Mean squared detail coefficient per octave of an undecimated circular
    Daubechies-4 filter bank.

    The undecimated (holes) cascade keeps every shift, so the per-octave mean
    energy equals a plain average over n coefficients; it is computed entirely
    in the frequency domain, which also makes it exactly invariant under time
    reversal of the input.
    """
    n = x.size
    hf = _fft.fft(_D4_H, n)
    gf = _fft.fft(_D4_G, n)
    xf = _fft.fft(x - x.mean())
    idx0 = np.arange(n)
    acc = xf
    energies = np.empty(n_octaves, dtype=np.float64)
    for j in range(1, n_octaves + 1):
        idx = (idx0 * (1 << (j - 1))) % n
        detail = gf[idx] * acc
        energies[j - 1] = (detail.real**2 + detail.imag**2).sum() / n / n
        acc = hf[idx] * acc
    return energies


def wavelet_estimate(series, min_octave: int = 3, trim_octaves: int = 4) -> HurstEstimate:
    """Wavelet logscale estimate: weighted regression of log2(energy) on
    octave number over octaves [min_octave, log2(n) - trim_octaves];
    H = (slope + 1) / 2.

    Weights follow the standard per-octave variance of the log energy,
    var(log2 mu_j) ~= 2 / (n 2^-j ln(2)^2), and the CI comes from the same
    weights.
    """
    x = series_values(series)
    check_min_length(x, 2**12, "wavelet_estimate")
    check_not_constant(x, "wavelet_estimate")
    n = x.size
    j_max = int(math.floor(math.log2(n))) - trim_octaves
    if j_max - min_octave + 1 < 3:
        raise TooShortError("wavelet estimate needs at least 3 octaves in range")
    energies = _octave_energies(x, j_max)
    octaves = np.arange(min_octave, j_max + 1)
    mu = energies[min_octave - 1:]
    if np.any(mu <= 0):
        raise ConstantSeriesError("wavelet energies vanished in the fitted octaves")
    n_eff = n / 2.0**octaves
    var_log = 2.0 / (n_eff * _LN2**2)
    weights = 1.0 / var_log
    fit = fit_log_line(octaves.astype(np.float64), np.log2(mu), weights=weights)
    h = (fit.slope + 1.0) / 2.0
    sxx = (weights * (fit.xs - (weights * fit.xs).sum() / weights.sum()) ** 2).sum()
    se = math.sqrt(1.0 / sxx) / 2.0
    return HurstEstimate(
        "wavelet", h, ci_low=h - 1.96 * se, ci_high=h + 1.96 * se,
        fit=fit, n_used=n,
    )


# ---------------------------------------------------------------------------
# sklearn-style wrappers

class _HurstEstimatorBase(BaseEstimator):
    """Common fit() plumbing: run the method, expose hurst_ / estimate_ /
    scaling_ / n_used_ attributes."""

    def _run(self, X) -> HurstEstimate:
        raise NotImplementedError

    def fit(self, X, y=None):
        est = self._run(X)
        self.estimate_ = est
        self.hurst_ = est.h
        self.scaling_ = est.fit
        self.n_used_ = est.n_used
        return self

    def fit_predict(self, X, y=None) -> float:
        return self.fit(X).hurst_


class RescaledRangeHurst(_HurstEstimatorBase):
    """Rescaled-range estimator; variant is 'classic' or 'modified'."""

    def __init__(self, variant: str = "classic"):
        self.variant = variant

    def _run(self, X):
        return rs_estimate(X, variant=self.variant)


class AggregatedVarianceHurst(_HurstEstimatorBase):
    def _run(self, X):
        return aggvar_estimate(X)


class PeriodogramHurst(_HurstEstimatorBase):
    def __init__(self, frequency_fraction: float = 0.1):
        self.frequency_fraction = frequency_fraction

    def _run(self, X):
        return periodogram_estimate(X, frequency_fraction=self.frequency_fraction)


class LocalWhittleHurst(_HurstEstimatorBase):
    def __init__(self, bandwidth_power: float = 0.65):
        self.bandwidth_power = bandwidth_power

    def _run(self, X):
        return local_whittle_estimate(X, bandwidth_power=self.bandwidth_power)


class WaveletHurst(_HurstEstimatorBase):
    def __init__(self, min_octave: int = 3, trim_octaves: int = 4):
        self.min_octave = min_octave
        self.trim_octaves = trim_octaves

    def _run(self, X):
        return wavelet_estimate(X, min_octave=self.min_octave, trim_octaves=self.trim_octaves)


def estimate_all(series, methods=METHODS, overrides=None):
    """Run the requested estimators; returns a dict method -> HurstEstimate.

    The two rescaled-range variants share one scale sweep, so requesting both
    costs barely more than one.  `overrides` maps a method name to keyword
    arguments for the underlying estimate function, e.g.
    {"local_whittle": {"bandwidth_power": 1.0}}.
    """
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")
    overrides = dict(overrides or {})
    x = series_values(series)
    out = {}
    rs_variants = [m for m in ("rs", "rs_modified") if m in methods]
    if rs_variants:
        check_min_length(x, 2**9, "rs_estimate")
        check_not_constant(x, "rs_estimate")
        scales, values = _rs_points(x)
        for m in rs_variants:
            variant = "classic" if m == "rs" else "modified"
            out[m] = _rs_fit(scales, values, variant, x.size)
    dispatch = {
        "aggvar": aggvar_estimate,
        "periodogram": periodogram_estimate,
        "local_whittle": local_whittle_estimate,
        "wavelet": wavelet_estimate,
    }
    for m in methods:
        if m in dispatch:
            out[m] = dispatch[m](x, **overrides.get(m, {}))
    return {m: out[m] for m in methods}
