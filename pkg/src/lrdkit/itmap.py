"""Double intermittency map: a chaotic interval map with marginal fixed points
at 0 and 1 whose long laminar phases yield long-range dependence after
thresholding.

The map on (0, 1) is

    x + ((1-d)/d**m1)   * x**m1        if x < d (also taken at x == d)
    x - (d/(1-d)**m2)   * (1-x)**m2    otherwise

with exponents in (3/2, 2). Thresholding the orbit at d gives a {0,1} series
with Hurst parameter H = (3m-4)/(2m-2) when m1 = m2 = m.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import OutOfRangeError
from .series import BinarySeries

# Orbits are clamped into [EPS, 1-EPS]: the fixed points at 0 and 1 are
# marginal, so a floating-point orbit that lands exactly on either would stay
# there forever.
EPS = 1e-15

# Iterations discarded before the first emitted symbol, so emission starts
# past the transient of the arbitrary starting point.
TRANSIENT = 10_000


@dataclass(frozen=True)
class MapParams:
    """Map parameters: threshold d, exponents m1/m2, optional start x0, seed.

    x0=None draws the start uniformly from (0.1, 0.9), away from the
    slow-escape neighborhoods of 0 and 1. The seed is used only for that draw.
    """

    d: float = 0.5
    m1: float = 5.0 / 3.0
    m2: float = 5.0 / 3.0
    x0: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.d < 1.0):
            raise OutOfRangeError(f"d must lie in (0, 1), got {self.d}")
        for name, m in (("m1", self.m1), ("m2", self.m2)):
            if not (1.5 < m < 2.0):
                raise OutOfRangeError(f"{name} must lie in (3/2, 2), got {m}")
        if self.x0 is not None and not (0.0 < self.x0 < 1.0):
            raise OutOfRangeError(f"x0 must lie in (0, 1), got {self.x0}")


def hurst_to_m(hurst) -> float:
    """Exponent m giving Hurst parameter H: m = (4-2H)/(3-2H), in (3/2, 2)."""
    h = float(hurst)
    if not (0.5 < h < 1.0):
        raise OutOfRangeError(f"hurst must lie in (1/2, 1), got {h}")
    return (4.0 - 2.0 * h) / (3.0 - 2.0 * h)


def map_step(x: float, params: MapParams) -> float:
    """One application of the map; result clamped into [EPS, 1-EPS].

    x == d takes the left branch (a fixed, measure-zero convention).
    """
    if not (0.0 < x < 1.0):
        raise OutOfRangeError(f"x must lie in (0, 1), got {x}")
    d, m1, m2 = params.d, params.m1, params.m2
    if x <= d:
        y = x + ((1.0 - d) / d**m1) * x**m1
    else:
        y = x - (d / (1.0 - d) ** m2) * (1.0 - x) ** m2
    return min(max(y, EPS), 1.0 - EPS)


@njit(cache=True)
def _iterate(x, d, m1, m2, c1, c2, n_skip, out):
    for _ in range(n_skip):
        if x <= d:
            x = x + c1 * x**m1
        else:
            x = x - c2 * (1.0 - x) ** m2
        if x < EPS:
            x = EPS
        elif x > 1.0 - EPS:
            x = 1.0 - EPS
    for i in range(out.size):
        if x <= d:
            x = x + c1 * x**m1
        else:
            x = x - c2 * (1.0 - x) ** m2
        if x < EPS:
            x = EPS
        elif x > 1.0 - EPS:
            x = 1.0 - EPS
        out[i] = 1 if x >= d else 0
    return x


@njit(cache=True)
def _iterate_orbit(x, d, m1, m2, c1, c2, out):
    for i in range(out.size):
        if x <= d:
            x = x + c1 * x**m1
        else:
            x = x - c2 * (1.0 - x) ** m2
        if x < EPS:
            x = EPS
        elif x > 1.0 - EPS:
            x = 1.0 - EPS
        out[i] = x
    return x


class IntermittencyMapGenerator:
    """Streams thresholded map symbols; successive calls continue the orbit.

    The transient discard happens once, at construction.
    """

    def __init__(self, params: MapParams):
        self.params = params
        if params.x0 is None:
            rng = np.random.default_rng(params.seed)
            x0 = rng.uniform(0.1, 0.9)
        else:
            x0 = params.x0
        self._x = float(min(max(x0, EPS), 1.0 - EPS))
        self._fresh = True

    @property
    def x(self) -> float:
        """Current orbit point."""
        return self._x

    def generate_symbols(self, n: int) -> np.ndarray:
        if n < 1:
            raise OutOfRangeError(f"n must be >= 1, got {n}")
        p = self.params
        c1 = (1.0 - p.d) / p.d**p.m1
        c2 = p.d / (1.0 - p.d) ** p.m2
        out = np.empty(n, dtype=np.uint8)
        skip = TRANSIENT if self._fresh else 0
        self._x = _iterate(self._x, p.d, p.m1, p.m2, c1, c2, skip, out)
        self._fresh = False
        return out

    def orbit(self, n: int) -> np.ndarray:
        """The next n raw orbit points (no thresholding, no transient skip)."""
        if n < 1:
            raise OutOfRangeError(f"n must be >= 1, got {n}")
        p = self.params
        c1 = (1.0 - p.d) / p.d**p.m1
        c2 = p.d / (1.0 - p.d) ** p.m2
        out = np.empty(n, dtype=np.float64)
        self._x = _iterate_orbit(self._x, p.d, p.m1, p.m2, c1, c2, out)
        self._fresh = False
        return out

    def generate(self, n: int) -> BinarySeries:
        return BinarySeries(self.generate_symbols(n), params=self.params, generator="itmap")


def map_generate(params: MapParams, n: int) -> BinarySeries:
    """Generate n thresholded symbols (y = 1 iff x >= d) after the transient.

    Deterministic per (params, seed); the sample mean has no closed form and
    is only reported, never asserted.
    """
    return IntermittencyMapGenerator(params).generate(n)
