"""Series containers and input-validation helpers shared by all modules.

Two container types cover everything the package produces: BinarySeries for
{0,1} symbol streams and RealSeries for real-valued data (fractional Gaussian
noise, block aggregates). Estimators accept either container or any array-like
through :func:`series_values`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConstantSeriesError, OutOfRangeError, TooShortError

BINARY_TAGS = ("markov", "itmap", "fgn-thresholded", "external")


@dataclass(frozen=True)
class BinarySeries:
    """A finite {0,1} symbol sequence with provenance metadata.

    Parameters
    ----------
    symbols : array-like of {0,1}, stored as uint8.
    params : the generating model's parameter object, if any.
    generator : one of BINARY_TAGS.
    """

    symbols: np.ndarray
    params: object | None = None
    generator: str = "external"

    def __post_init__(self):
        sym = np.ascontiguousarray(self.symbols, dtype=np.uint8)
        if sym.ndim != 1 or sym.size == 0:
            raise OutOfRangeError("symbols must be a non-empty 1-D sequence")
        if sym.max(initial=0) > 1:
            raise OutOfRangeError("symbols must contain only 0 and 1")
        if self.generator not in BINARY_TAGS:
            raise OutOfRangeError(
                f"generator tag {self.generator!r} not in {BINARY_TAGS}"
            )
        object.__setattr__(self, "symbols", sym)

    @property
    def length(self) -> int:
        return self.symbols.size

    def __len__(self) -> int:
        return self.symbols.size


@dataclass(frozen=True)
class RealSeries:
    """A finite real-valued sequence; all values must be finite."""

    values: np.ndarray
    generator: str = "external"

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise OutOfRangeError("values must be a non-empty 1-D sequence")
        if not np.isfinite(vals).all():
            raise OutOfRangeError("values must be finite (no NaN/Inf)")
        object.__setattr__(self, "values", vals)

    @property
    def length(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size


def series_values(series) -> np.ndarray:
    """Return the data of a series-like object as a 1-D float64 array.

    Accepts BinarySeries, RealSeries, or anything numpy can coerce. Raises
    OutOfRangeError on empty, multi-dimensional, or non-finite input.
    """
    if isinstance(series, BinarySeries):
        return series.symbols.astype(np.float64)
    if isinstance(series, RealSeries):
        return series.values
    vals = np.ascontiguousarray(series, dtype=np.float64)
    if vals.ndim != 1 or vals.size == 0:
        raise OutOfRangeError("series must be a non-empty 1-D sequence")
    if not np.isfinite(vals).all():
        raise OutOfRangeError("series values must be finite")
    return vals


def check_min_length(values: np.ndarray, minimum: int, method: str) -> None:
    if values.size < minimum:
        raise TooShortError(
            f"{method} needs at least {minimum} samples, got {values.size}"
        )


def check_not_constant(values: np.ndarray, method: str) -> None:
    if values.size and values.min() == values.max():
        raise ConstantSeriesError(f"{method} is undefined for a constant series")


def aggregate(series, block: int):
    """Non-overlapping block sums; the trailing partial block is dropped.

    block=1 returns the values unchanged (as a RealSeries). The provenance tag
    of the input carries over.
    """
    if block < 1 or int(block) != block:
        raise OutOfRangeError(f"block must be a positive integer, got {block}")
    block = int(block)
    vals = series_values(series)
    if vals.size < block:
        raise TooShortError(
            f"aggregate needs at least one full block ({block}), got {vals.size}"
        )
    tag = getattr(series, "generator", "external")
    if block == 1:
        return RealSeries(vals.copy(), generator=tag)
    w = vals.size // block
    sums = vals[: w * block].reshape(w, block).sum(axis=1)
    return RealSeries(sums, generator=tag)
