"""Estimator suite: regression utilities, transforms, invariances, and the
sklearn-style wrappers.

Invariance bounds are machine-level (1e-9) because every method is built
from exactly shift/scale-free quantities; the statistical checks run on
fixed seeds verified to pass with margin.
"""
import math

import numpy as np
import pytest
from sklearn.base import clone

from lrdkit import (
    AggregatedVarianceHurst,
    ConstantSeriesError,
    FgnGenerator,
    HurstEstimate,
    LocalWhittleHurst,
    METHODS,
    PeriodogramHurst,
    RescaledRangeHurst,
    ScalingFit,
    TooShortError,
    WaveletHurst,
    acf,
    aggvar_estimate,
    estimate_all,
    fit_log_line,
    local_whittle_estimate,
    periodogram,
    periodogram_estimate,
    rs_estimate,
    wavelet_estimate,
)

ESTIMATORS = {
    "rs": rs_estimate,
    "aggvar": aggvar_estimate,
    "periodogram": periodogram_estimate,
    "local_whittle": local_whittle_estimate,
    "wavelet": wavelet_estimate,
}


@pytest.fixture(scope="module")
def series():
    return FgnGenerator(0.75, seed=8).generate_values(2**13)


class TestFitLogLine:
    def test_exact_line(self):
        xs = np.linspace(0.0, 5.0, 8)
        fit = fit_log_line(xs, 2.0 - 0.7 * xs)
        assert fit.slope == pytest.approx(-0.7, rel=1e-12)
        assert fit.intercept == pytest.approx(2.0, rel=1e-12)
        assert fit.r2 == 1.0

    def test_weighted_pulls_toward_heavy_points(self):
        xs = np.array([0.0, 1.0, 2.0, 3.0])
        ys = np.array([0.0, 1.0, 2.0, 10.0])
        flat = fit_log_line(xs, ys)
        # crushing the outlier's weight recovers the slope of the other three
        w = np.array([1.0, 1.0, 1.0, 1e-9])
        assert fit_log_line(xs, ys, weights=w).slope == pytest.approx(1.0, rel=1e-6)
        assert flat.slope > 1.5

    def test_r2_clamped(self):
        fit = fit_log_line([1.0, 2.0, 3.0], [5.0, -1.0, 4.0])
        assert 0.0 <= fit.r2 <= 1.0

    def test_scaling_fit_validation(self):
        with pytest.raises(TooShortError):
            ScalingFit(np.array([1.0, 2.0]), np.array([1.0, 2.0]), 1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            ScalingFit(np.array([1.0, 3.0, 2.0]), np.zeros(3), 1.0, 0.0, 1.0)

    def test_hurst_estimate_validation(self):
        with pytest.raises(ValueError):
            HurstEstimate("rs", math.nan)
        with pytest.raises(ValueError):
            HurstEstimate("rs", 0.7, ci_low=0.6, ci_high=None)
        with pytest.raises(ValueError):
            HurstEstimate("rs", 0.7, ci_low=0.8, ci_high=0.9)


class TestAcf:
    def test_matches_direct_computation(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(200)
        got = acf(x, 10)
        xc = x - x.mean()
        denom = float(np.dot(xc, xc))
        for k in range(11):
            direct = float(np.dot(xc[: 200 - k], xc[k:])) / denom
            assert got[k] == pytest.approx(direct, abs=1e-12)

    def test_lag_zero_is_one(self):
        x = np.random.default_rng(1).standard_normal(500)
        assert acf(x, 5)[0] == pytest.approx(1.0, rel=1e-14)

    def test_domain(self):
        x = np.random.default_rng(0).standard_normal(100)
        with pytest.raises(TooShortError):
            acf(x, 0)
        with pytest.raises(TooShortError):
            acf(x, 100)
        with pytest.raises(ConstantSeriesError):
            acf(np.ones(100), 5)


class TestPeriodogram:
    @pytest.mark.parametrize("n", [256, 257])
    def test_variance_identity(self, n):
        # mean of I over the n-1 nonzero frequencies == ddof=1 variance;
        # for even n the Nyquist ordinate appears once, the rest twice
        x = np.random.default_rng(2).standard_normal(n)
        lam, pw = periodogram(x)
        if n % 2 == 0:
            total = 2.0 * pw[:-1].sum() + pw[-1]
        else:
            total = 2.0 * pw.sum()
        assert total / (n - 1) == pytest.approx(float(x.var(ddof=1)), rel=1e-12)

    def test_frequencies(self):
        n = 64
        lam, pw = periodogram(np.random.default_rng(3).standard_normal(n))
        assert lam.size == pw.size == n // 2
        np.testing.assert_allclose(lam, 2.0 * np.pi * np.arange(1, 33) / n)

    def test_too_short(self):
        with pytest.raises(TooShortError):
            periodogram(np.array([1.0, 2.0, 3.0]))


class TestInvariances:
    """Affine maps a + b x and (where promised) time reversal leave every
    estimate unchanged to machine precision."""

    @pytest.mark.parametrize("method", list(ESTIMATORS))
    def test_affine(self, series, method):
        est = ESTIMATORS[method]
        base = est(series).h
        shifted = est(5.0 - 3.0 * series).h
        assert shifted == pytest.approx(base, abs=1e-9)

    @pytest.mark.parametrize("method", ["aggvar", "periodogram", "local_whittle", "wavelet"])
    def test_time_reversal(self, series, method):
        est = ESTIMATORS[method]
        assert est(series[::-1]).h == pytest.approx(est(series).h, abs=1e-9)


class TestMinimumLengths:
    def test_thresholds(self):
        rng = np.random.default_rng(0)
        cases = [
            (rs_estimate, 2**9),
            (aggvar_estimate, 2**10),
            (periodogram_estimate, 2**10),
            (local_whittle_estimate, 2**10),
            (wavelet_estimate, 2**12),
        ]
        for est, minimum in cases:
            with pytest.raises(TooShortError):
                est(rng.standard_normal(minimum - 1))
            est(rng.standard_normal(minimum))  # must not raise

    def test_constant_series(self):
        x = np.full(2**12, 3.0)
        for est in ESTIMATORS.values():
            with pytest.raises(ConstantSeriesError):
                est(x)

    def test_variant_validation(self):
        with pytest.raises(ValueError):
            rs_estimate(np.random.default_rng(0).standard_normal(2**10), variant="bogus")


class TestStatisticalBehavior:
    def test_monotone_in_h(self):
        # every method must rank H = 0.6 < 0.75 < 0.9 on a fixed seed
        rows = {m: [] for m in METHODS}
        for h in (0.6, 0.75, 0.9):
            x = FgnGenerator(h, seed=1).generate_values(2**14)
            for m, e in estimate_all(x).items():
                rows[m].append(e.h)
        for m, vals in rows.items():
            assert vals[0] < vals[1] < vals[2], f"{m}: {vals}"

    def test_iid_null(self):
        x = np.random.default_rng(5).standard_normal(2**14)
        for m, e in estimate_all(x).items():
            assert 0.44 < e.h < 0.56, f"{m}: {e.h}"

    def test_local_whittle_ci_width(self):
        x = np.random.default_rng(6).standard_normal(2**12)
        e = local_whittle_estimate(x)
        m = int((2**12) ** 0.65)
        width = 2.0 * 1.96 / (2.0 * math.sqrt(m))
        assert e.ci_high - e.ci_low == pytest.approx(width, rel=1e-9)

    def test_periodogram_fraction_changes_band(self):
        x = FgnGenerator(0.8, seed=2).generate_values(2**13)
        a = periodogram_estimate(x, frequency_fraction=0.1)
        b = periodogram_estimate(x, frequency_fraction=0.5)
        assert a.fit.xs.size < b.fit.xs.size
        assert a.h != b.h

    def test_wavelet_octave_window(self):
        x = FgnGenerator(0.8, seed=2).generate_values(2**13)
        a = wavelet_estimate(x, min_octave=3)
        b = wavelet_estimate(x, min_octave=1)
        assert b.fit.xs[0] == 1.0 and a.fit.xs[0] == 3.0
        with pytest.raises(TooShortError):
            wavelet_estimate(x, min_octave=9, trim_octaves=4)


class TestEstimateAll:
    def test_runs_all_in_order(self):
        x = FgnGenerator(0.7, seed=3).generate_values(2**13)
        out = estimate_all(x)
        assert tuple(out) == METHODS
        for m, e in out.items():
            assert e.method == m
            assert e.n_used == 2**13

    def test_subset_and_single(self):
        x = np.random.default_rng(4).standard_normal(2**12)
        out = estimate_all(x, methods=("wavelet",))
        assert tuple(out) == ("wavelet",)

    def test_shared_rs_sweep_consistent(self):
        x = FgnGenerator(0.7, seed=3).generate_values(2**13)
        both = estimate_all(x, methods=("rs", "rs_modified"))
        assert both["rs"].h == rs_estimate(x).h
        assert both["rs_modified"].h == rs_estimate(x, variant="modified").h

    def test_overrides_reach_methods(self):
        x = FgnGenerator(0.7, seed=3).generate_values(2**13)
        base = estimate_all(x, methods=("local_whittle",))["local_whittle"]
        wide = estimate_all(
            x, methods=("local_whittle",),
            overrides={"local_whittle": {"bandwidth_power": 1.0}},
        )["local_whittle"]
        assert wide.h != base.h
        assert wide.h == local_whittle_estimate(x, bandwidth_power=1.0).h

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            estimate_all(np.zeros(2**12), methods=("hausdorff",))


class TestSklearnInterface:
    CLASSES = [
        RescaledRangeHurst,
        AggregatedVarianceHurst,
        PeriodogramHurst,
        LocalWhittleHurst,
        WaveletHurst,
    ]

    @pytest.mark.parametrize("cls", CLASSES)
    def test_fit_sets_attributes(self, series, cls):
        est = cls().fit(series)
        assert isinstance(est.estimate_, HurstEstimate)
        assert est.hurst_ == est.estimate_.h
        assert est.n_used_ == series.size
        assert isinstance(est.fit_predict(series), float)

    @pytest.mark.parametrize("cls", CLASSES)
    def test_get_set_clone(self, series, cls):
        est = cls()
        params = est.get_params()
        assert est.set_params(**params) is est
        twin = clone(est)
        assert twin.get_params() == params

    def test_params_change_result(self, series):
        narrow = LocalWhittleHurst().fit(series).hurst_
        wide = LocalWhittleHurst(bandwidth_power=1.0).fit(series).hurst_
        assert narrow != wide
        assert LocalWhittleHurst().get_params() == {"bandwidth_power": 0.65}

    def test_variants_differ(self, series):
        classic = RescaledRangeHurst().fit(series)
        modified = RescaledRangeHurst(variant="modified").fit(series)
        assert classic.estimate_.method == "rs"
        assert modified.estimate_.method == "rs_modified"
