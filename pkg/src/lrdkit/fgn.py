"""Fractional Gaussian noise by circulant embedding.

Stationary Gaussian series with autocovariance

    gamma(k) = (|k+1|**2H - 2|k|**2H + |k-1|**2H) / 2

(unit variance, Hurst parameter H). The covariance sequence is embedded in a
circulant matrix whose eigenvalues come from one FFT; when they are all
nonnegative, the synthesis is exact in distribution, not approximate.
"""
from __future__ import annotations

import math

import numpy as np

from .exceptions import EmbeddingNotPSDError, OutOfRangeError
from .series import RealSeries

# Eigenvalues may round slightly negative; anything below this is a real
# embedding failure rather than noise.
_PSD_TOL = -1e-10


def fgn_autocovariance(lags, hurst) -> np.ndarray:
    """Exact FGN autocovariance at integer lags (gamma(0) = 1)."""
    k = np.abs(np.asarray(lags, dtype=np.float64))
    h2 = 2.0 * float(hurst)
    return 0.5 * ((k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)


def _spectral_weights(gamma: np.ndarray) -> np.ndarray:
    """Eigenvalues of the circulant embedding of an autocovariance sequence.

    Raises EmbeddingNotPSDError if any eigenvalue is materially negative;
    rounding-level negatives are clipped to zero.
    """
    n = gamma.size
    circ = np.concatenate([gamma, gamma[n - 2: 0: -1]])
    eig = np.fft.fft(circ).real
    worst = eig.min()
    if worst < _PSD_TOL:
        raise EmbeddingNotPSDError(
            f"circulant embedding has negative eigenvalue {worst:.3e}"
        )
    return np.maximum(eig, 0.0)


class FgnGenerator:
    """Draws independent FGN realizations from one seeded stream.

    Each generate(n) call consumes fresh randomness, so repeated calls give
    independent realizations while the whole sequence of calls stays
    reproducible from the seed. Eigenvalues are cached per length.
    """

    def __init__(self, hurst: float, seed: int = 0):
        h = float(hurst)
        if not (0.0 < h < 1.0):
            raise OutOfRangeError(f"hurst must lie in (0, 1), got {h}")
        self.hurst = h
        self._rng = np.random.default_rng(seed)
        self._cache_n = -1
        self._cache_eig = None

    def generate_values(self, n: int) -> np.ndarray:
        if n < 2:
            raise OutOfRangeError(f"n must be >= 2, got {n}")
        if n != self._cache_n:
            gamma = fgn_autocovariance(np.arange(n), self.hurst)
            self._cache_eig = _spectral_weights(gamma)
            self._cache_n = n
        eig = self._cache_eig
        m = eig.size  # 2n - 2
        half = m // 2
        z = self._rng.standard_normal(m)
        w = np.empty(m, dtype=np.complex128)
        w[0] = z[0]
        w[half] = z[1]
        re = z[2: 2 + half - 1]
        im = z[2 + half - 1:]
        w[1:half] = (re + 1j * im) / math.sqrt(2.0)
        w[half + 1:] = np.conj(w[half - 1:0:-1])
        spectrum = np.sqrt(eig / m) * w
        x = np.fft.fft(spectrum)[:n].real
        return x

    def generate(self, n: int) -> RealSeries:
        return RealSeries(self.generate_values(n), generator="fgn")


def fgn_generate(hurst: float, n: int, seed: int = 0) -> RealSeries:
    """One exact FGN realization of length n (unit variance, mean zero)."""
    return FgnGenerator(hurst, seed).generate(n)
