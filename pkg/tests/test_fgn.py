"""Fractional Gaussian noise: exact autocovariance, synthesis fidelity.

The synthesis check uses the known-zero-mean autocovariance estimator
(no mean subtraction): the generator output has exactly zero expectation by
construction, and subtracting the sample mean would bias every lag downward
by the variance of the mean, which for LRD series is material.
"""
import math

import numpy as np
import pytest

from lrdkit import (
    EmbeddingNotPSDError,
    FgnGenerator,
    OutOfRangeError,
    RealSeries,
    fgn_autocovariance,
    fgn_generate,
)
from lrdkit.fgn import _spectral_weights


class TestAutocovariance:
    def test_lag_zero_is_one(self):
        for h in (0.55, 0.75, 0.95):
            assert fgn_autocovariance(0, h) == 1.0

    def test_lag_one_oracle(self):
        # gamma(1) = (2**(2H) - 2)/2 = sqrt(2) - 1 at H = 3/4
        got = float(fgn_autocovariance(1, 0.75))
        assert got == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-15)

    def test_even_in_lag(self):
        lags = np.array([-5, -1, 1, 5])
        g = fgn_autocovariance(lags, 0.8)
        assert g[0] == g[3] and g[1] == g[2]

    def test_half_is_white_noise(self):
        g = fgn_autocovariance(np.arange(1, 50), 0.5)
        assert np.all(g == 0.0)

    def test_long_lag_asymptote(self):
        # gamma(k) ~ H(2H-1) k**(2H-2)
        h = 0.8
        k = 10_000.0
        expected = h * (2 * h - 1) * k ** (2 * h - 2)
        assert float(fgn_autocovariance(k, h)) == pytest.approx(expected, rel=1e-4)

    def test_positive_correlations_above_half(self):
        g = fgn_autocovariance(np.arange(1, 100), 0.9)
        assert np.all(g > 0)
        assert np.all(np.diff(g) < 0)


class TestSpectralWeights:
    def test_nonnegative_for_valid_h(self):
        for h in (0.55, 0.75, 0.95):
            gamma = fgn_autocovariance(np.arange(1024), h)
            eig = _spectral_weights(gamma)
            assert eig.min() >= 0.0
            assert eig.size == 2 * 1024 - 2

    def test_rejects_non_psd_sequence(self):
        # [1, 0.8, -0.5] embeds with eigenvalue 1 - 1.6 - 0.5 = -1.1
        with pytest.raises(EmbeddingNotPSDError):
            _spectral_weights(np.array([1.0, 0.8, -0.5]))


class TestGenerator:
    def test_deterministic(self):
        a = fgn_generate(0.75, 4096, seed=5)
        b = fgn_generate(0.75, 4096, seed=5)
        np.testing.assert_array_equal(a.values, b.values)
        assert isinstance(a, RealSeries)
        assert a.generator == "fgn"

    def test_successive_calls_independent(self):
        gen = FgnGenerator(0.75, seed=5)
        a = gen.generate_values(2048)
        b = gen.generate_values(2048)
        assert not np.array_equal(a, b)
        # but the pair is reproducible from the seed
        gen2 = FgnGenerator(0.75, seed=5)
        np.testing.assert_array_equal(a, gen2.generate_values(2048))
        np.testing.assert_array_equal(b, gen2.generate_values(2048))

    def test_cache_change_length(self):
        # switching n mid-stream must not corrupt the synthesis
        gen = FgnGenerator(0.6, seed=1)
        gen.generate_values(512)
        out = gen.generate_values(256)
        assert out.size == 256
        assert np.isfinite(out).all()

    def test_bounds(self):
        with pytest.raises(OutOfRangeError):
            FgnGenerator(0.0)
        with pytest.raises(OutOfRangeError):
            FgnGenerator(1.0)
        with pytest.raises(OutOfRangeError):
            FgnGenerator(0.75).generate_values(1)

    def test_white_noise_case(self):
        # H = 1/2 must deliver uncorrelated unit-variance Gaussians
        x = fgn_generate(0.5, 200_000, seed=3).values
        assert float(x.var()) == pytest.approx(1.0, abs=0.02)
        lag1 = float(np.mean(x[:-1] * x[1:]))
        assert abs(lag1) < 4.0 / math.sqrt(x.size)


class TestSynthesisExactness:
    def test_autocovariance_matches_target(self):
        # replica-averaged zero-mean estimator against the closed form
        h, n, reps = 0.75, 4096, 150
        gen = FgnGenerator(h, seed=12)
        lags = np.array([0, 1, 2, 5, 10, 50, 200])
        samples = np.empty((reps, lags.size))
        for r in range(reps):
            x = gen.generate_values(n)
            for j, k in enumerate(lags):
                m = n - k
                samples[r, j] = float(np.dot(x[: m], x[k: k + m]) / m)
        mean = samples.mean(axis=0)
        se = samples.std(axis=0, ddof=1) / math.sqrt(reps)
        target = fgn_autocovariance(lags, h)
        for j, k in enumerate(lags):
            assert abs(mean[j] - target[j]) <= 4.0 * se[j], (
                f"lag {k}: got {mean[j]:.5f}, want {target[j]:.5f}, se {se[j]:.5f}"
            )

    def test_mean_is_zero(self):
        h, n, reps = 0.875, 4096, 100
        gen = FgnGenerator(h, seed=4)
        means = [float(gen.generate_values(n).mean()) for _ in range(reps)]
        se = np.std(means, ddof=1) / math.sqrt(reps)
        assert abs(np.mean(means)) <= 4.0 * se + 1e-12
