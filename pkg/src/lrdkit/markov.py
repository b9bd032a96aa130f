"""Infinite-state Markov chain that emits binary series with exact long-range
dependence.

The chain lives on the non-negative integers. From state 0 it jumps to state k
with probability f_k, whose tail follows a power law; from any state k > 0 it
counts down deterministically to k - 1. Emitting Y_i = 0 exactly when X_i = 0
yields a stationary {0,1} series whose autocorrelation decays like k**-alpha,
i.e. Hurst parameter H = 1 - alpha/2, with mean 1 - pi0. Both knobs are exact,
not asymptotic fits.

All tail masses are evaluated in closed form; nothing ever accumulates
probabilities term by term toward 1, which is what keeps the sampler exact far
beyond the resolution of cumulative sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    InvalidRegionError,
    OutOfRangeError,
    OrderingViolationError,
    StateOverflowError,
)
from .series import BinarySeries

_LN2 = math.log(2.0)

# States below this cutoff are resolved by one explicit inverse-CDF table
# lookup; the tail uses doubling windows plus binary search.
EXPLICIT_CUTOFF = 16

# Jumps beyond this are refused rather than clamped: clamping would corrupt
# tail statistics silently. Reaching it has probability ~2**-63.
MAX_STATE = 2**63 - 1

# Jumps are drawn from the RNG in fixed-size blocks. The block size is part of
# the reproducibility contract: changing it changes the stream a seed yields.
_JUMP_BLOCK = 1 << 16


# ---------------------------------------------------------------------------
# parameters and conversions

def validity_threshold(alpha):
    """Smallest pi0 (exclusive) for which the jump law is a distribution.

    Equals (2**alpha - 1) / (2**(alpha+1) - 1); computed via expm1 so it stays
    accurate as alpha -> 0.
    """
    a = np.asarray(alpha, dtype=np.float64)
    out = np.expm1(a * _LN2) / np.expm1((a + 1.0) * _LN2)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ModelParams:
    """Validated chain parameters.

    pi0 is the equilibrium mass of state 0 (series mean is 1 - pi0), alpha the
    autocorrelation tail exponent in (0, 1), seed the 64-bit RNG seed.
    Construction enforces pi0 > validity_threshold(alpha), which guarantees
    f_0 in (0, 1) and f_k >= 0 for all k.
    """

    pi0: float
    alpha: float
    seed: int = 0

    def __post_init__(self):
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise OutOfRangeError(f"seed must be a 64-bit unsigned int, got {self.seed!r}")
        if not (0.0 < float(self.alpha) < 1.0):
            raise OutOfRangeError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (0.0 < float(self.pi0) < 1.0):
            raise OutOfRangeError(f"pi0 must lie in (0, 1), got {self.pi0}")
        object.__setattr__(self, "pi0", float(self.pi0))
        object.__setattr__(self, "alpha", float(self.alpha))
        thr = validity_threshold(self.alpha)
        if self.pi0 <= thr:
            raise InvalidRegionError(
                f"pi0={self.pi0:.6g} is outside the valid region for "
                f"alpha={self.alpha:.6g}: need pi0 > {thr:.9g}"
            )

    @property
    def hurst(self) -> float:
        return 1.0 - self.alpha / 2.0

    @property
    def mean(self) -> float:
        return 1.0 - self.pi0

    @property
    def mass_ratio(self) -> float:
        """(1 - pi0) / pi0, the prefactor shared by the jump law and its tail."""
        return (1.0 - self.pi0) / self.pi0


def validate_params(pi0, alpha, seed: int = 0) -> ModelParams:
    """Validate raw (pi0, alpha, seed) and return ModelParams.

    Raises OutOfRangeError for values outside (0, 1) and InvalidRegionError
    (message includes the threshold) when pi0 <= validity_threshold(alpha).
    """
    return ModelParams(pi0, alpha, seed)


def hurst_to_alpha(hurst) -> float:
    """Map Hurst parameter H in (1/2, 1) to tail exponent alpha = 2(1 - H)."""
    h = float(hurst)
    if not (0.5 < h < 1.0):
        raise OutOfRangeError(f"hurst must lie in (1/2, 1), got {h}")
    return 2.0 * (1.0 - h)


def alpha_to_hurst(alpha) -> float:
    """Map tail exponent alpha in (0, 1) to Hurst parameter H = 1 - alpha/2."""
    a = float(alpha)
    if not (0.0 < a < 1.0):
        raise OutOfRangeError(f"alpha must lie in (0, 1), got {a}")
    return 1.0 - a / 2.0


@dataclass(frozen=True)
class ChainState:
    """Current chain state; x >= 0. From x > 0 the next state is exactly x - 1."""

    x: int

    def __post_init__(self):
        if not (0 <= self.x <= MAX_STATE):
            raise OutOfRangeError(f"state must lie in [0, 2**63 - 1], got {self.x}")


# ---------------------------------------------------------------------------
# numerically stable power-law kernels

def _power_tail(k, alpha):
    """k**-alpha elementwise, k >= 1."""
    return np.exp(-alpha * np.log(k))


def _tail_gap(k, alpha):
    """k**-alpha - (k+1)**-alpha without cancellation, for k >= 1.

    The naive difference loses all precision once k approaches 1/eps**(1/2);
    writing it as k**-alpha * -expm1(-alpha*log1p(1/k)) keeps full relative
    accuracy at any k.
    """
    k = np.asarray(k, dtype=np.float64)
    return _power_tail(k, alpha) * -np.expm1(-alpha * np.log1p(1.0 / k))


def _power_diff(a, gap, alpha):
    """a**-alpha - b**-alpha for b = a + gap, a >= 1, gap > 0, cancellation-free."""
    a = np.asarray(a, dtype=np.float64)
    return _power_tail(a, alpha) * -np.expm1(-alpha * np.log1p(gap / a))


# ---------------------------------------------------------------------------
# the chain law

def jump_prob(k, params: ModelParams):
    """P(state-0 jump lands on k), vectorized over k >= 0.

    f_0 = 1 - r (1 - 2**-alpha) and, for k > 0,
    f_k = r (k**-alpha - 2 (k+1)**-alpha + (k+2)**-alpha), r = (1-pi0)/pi0.
    """
    k_arr = np.asarray(k)
    if not np.issubdtype(k_arr.dtype, np.integer):
        raise OutOfRangeError("state index k must be integer")
    if np.any(k_arr < 0):
        raise OutOfRangeError("state index k must be >= 0")
    a, r = params.alpha, params.mass_ratio
    f0 = 1.0 + r * math.expm1(-a * _LN2)
    kk = np.maximum(k_arr, 1).astype(np.float64)
    fk = r * (_tail_gap(kk, a) - _tail_gap(kk + 1.0, a))
    out = np.where(k_arr == 0, f0, fk)
    return float(out) if out.ndim == 0 else out


def jump_tail(k, params: ModelParams):
    """P(state-0 jump lands on >= k) = r (k**-alpha - (k+1)**-alpha), k >= 1.

    Closed form; never a partial sum of jump_prob.
    """
    k_arr = np.asarray(k)
    if np.any(k_arr < 1):
        raise OutOfRangeError("jump_tail requires k >= 1")
    out = params.mass_ratio * _tail_gap(np.asarray(k_arr, dtype=np.float64), params.alpha)
    return float(out) if out.ndim == 0 else out


def equilibrium_pi(k, params: ModelParams):
    """Equilibrium occupancy pi_k: pi0 at k=0, (1-pi0)(k**-a - (k+1)**-a) for k>0."""
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise OutOfRangeError("state index k must be >= 0")
    kk = np.maximum(k_arr, 1).astype(np.float64)
    pik = (1.0 - params.pi0) * _tail_gap(kk, params.alpha)
    out = np.where(k_arr == 0, params.pi0, pik)
    return float(out) if out.ndim == 0 else out


def equilibrium_tail(k, params: ModelParams):
    """P(equilibrium state >= k) = (1 - pi0) k**-alpha for k >= 1; 1 at k = 0."""
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise OutOfRangeError("state index k must be >= 0")
    kk = np.maximum(k_arr, 1).astype(np.float64)
    tail = (1.0 - params.pi0) * _power_tail(kk, params.alpha)
    out = np.where(k_arr == 0, 1.0, tail)
    return float(out) if out.ndim == 0 else out


def conditional_range_prob(i, j, k, params: ModelParams):
    """P(jump lands in [i, j] | jump lands in [k, inf)), for 0 < k <= i <= j.

    Equals (g(i) - g(j+1)) / g(k) with g(m) = m**-alpha - (m+1)**-alpha.
    j may be math.inf for an unbounded upper end.
    """
    if not (0 < k <= i):
        raise OrderingViolationError(f"need 0 < k <= i, got k={k}, i={i}")
    if not (i <= j):
        raise OrderingViolationError(f"need i <= j, got i={i}, j={j}")
    a = params.alpha
    den = float(_tail_gap(float(k), a))
    num = float(_tail_gap(float(i), a))
    if math.isfinite(j):
        num -= float(_tail_gap(float(j) + 1.0, a))
    return min(max(num / den, 0.0), 1.0)


# ---------------------------------------------------------------------------
# exact samplers

def _jump_cdf_table(params: ModelParams, cutoff: int = EXPLICIT_CUTOFF) -> np.ndarray:
    """P(jump <= j) for j < cutoff, each entry built from the closed-form tail."""
    j = np.arange(1, cutoff + 1, dtype=np.float64)
    return 1.0 - params.mass_ratio * _tail_gap(j, params.alpha)


def _equilibrium_cdf_table(params: ModelParams, cutoff: int = EXPLICIT_CUTOFF) -> np.ndarray:
    """P(equilibrium state <= j) for j < cutoff, from the closed-form tail."""
    j = np.arange(1, cutoff + 1, dtype=np.float64)
    return 1.0 - (1.0 - params.pi0) * _power_tail(j, params.alpha)


def _refine_windows(rng, lo, hi, left_prob):
    """Vectorized binary search inside accepted windows.

    lo/hi are uint64 arrays; left_prob(lo, mid, hi) returns the probability of
    the left half [lo, mid] conditional on [lo, hi]. Each halving consumes one
    fresh uniform per still-open window. Window widths are powers of two, so
    halves stay exact.
    """
    open_idx = np.flatnonzero(lo < hi)
    while open_idx.size:
        l, h = lo[open_idx], hi[open_idx]
        mid = (l + h) >> np.uint64(1)
        p_left = left_prob(l, mid, h)
        u = rng.random(open_idx.size)
        left = u < p_left
        hi[open_idx[left]] = mid[left]
        lo[open_idx[~left]] = mid[~left] + np.uint64(1)
        open_idx = open_idx[lo[open_idx] < hi[open_idx]]
    return lo


def _accept_windows(rng, count, cutoff, accept_prob):
    """Doubling-window search: assign each of `count` tail samples a window
    [W, 2W-1], W = cutoff * 2**level, accepting level by level with fresh
    uniforms. Returns (lo, hi) uint64 arrays."""
    lo = np.empty(count, dtype=np.uint64)
    hi = np.empty(count, dtype=np.uint64)
    active = np.arange(count)
    w = int(cutoff)
    while active.size:
        if 2 * w - 1 > MAX_STATE:
            raise StateOverflowError(
                f"window search passed the state cap 2**63 - 1 at W={w}"
            )
        p = accept_prob(w)
        u = rng.random(active.size)
        acc = u < p
        hit = active[acc]
        lo[hit] = w
        hi[hit] = 2 * w - 1
        active = active[~acc]
        w *= 2
    return lo, hi


def _sample_jumps(rng, params: ModelParams, count: int, cdf: np.ndarray | None = None) -> np.ndarray:
    """Draw `count` iid jumps from state 0, exactly distributed as {f_k}.

    Explicit inverse CDF below EXPLICIT_CUTOFF, then doubling windows accepted
    via the conditional range probability, then binary-search refinement.
    """
    a = params.alpha
    if cdf is None:
        cdf = _jump_cdf_table(params)
    u = rng.random(count)
    out = np.searchsorted(cdf, u, side="right").astype(np.int64)
    tail_idx = np.flatnonzero(out == cdf.size)
    if tail_idx.size:
        g = _tail_gap

        def accept_prob(w):
            return 1.0 - float(g(2.0 * w, a)) / float(g(float(w), a))

        def left_prob(l, m, h):
            lf = l.astype(np.float64)
            g_lo = g(lf, a)
            num = g_lo - g((m + np.uint64(1)).astype(np.float64), a)
            den = g_lo - g((h + np.uint64(1)).astype(np.float64), a)
            return num / den

        lo, hi = _accept_windows(rng, tail_idx.size, cdf.size, accept_prob)
        states = _refine_windows(rng, lo, hi, left_prob)
        out[tail_idx] = states.astype(np.int64)
    return out


def _sample_equilibrium(rng, params: ModelParams, count: int) -> np.ndarray:
    """Draw `count` iid states from the equilibrium distribution {pi_k}."""
    a = params.alpha
    cdf = _equilibrium_cdf_table(params)
    u = rng.random(count)
    out = np.searchsorted(cdf, u, side="right").astype(np.int64)
    tail_idx = np.flatnonzero(out == cdf.size)
    if tail_idx.size:
        # P(X in [W, 2W-1] | X >= W) = 1 - 2**-alpha for the pure power tail
        p_window = -math.expm1(-a * _LN2)

        def accept_prob(w):
            return p_window

        def left_prob(l, m, h):
            lf = l.astype(np.float64)
            num = _power_diff(lf, (m + np.uint64(1) - l).astype(np.float64), a)
            den = _power_diff(lf, (h + np.uint64(1) - l).astype(np.float64), a)
            return num / den

        lo, hi = _accept_windows(rng, tail_idx.size, cdf.size, accept_prob)
        states = _refine_windows(rng, lo, hi, left_prob)
        out[tail_idx] = states.astype(np.int64)
    return out


def sample_jump(rng, params: ModelParams) -> ChainState:
    """Draw the next state after state 0, exactly distributed as {f_k}.

    Scalar reference path: one uniform against the explicit table, then one
    fresh uniform per doubling-window test and per binary-search halving. The
    batch path in generate() consumes the stream in a different order, so the
    two paths yield different (equally exact) trajectories for the same seed.
    """
    a = params.alpha
    cdf = _jump_cdf_table(params)
    u = rng.random()
    j = int(np.searchsorted(cdf, u, side="right"))
    if j < cdf.size:
        return ChainState(j)
    w = int(cdf.size)
    while True:
        if 2 * w - 1 > MAX_STATE:
            raise StateOverflowError("window search passed the state cap 2**63 - 1")
        p = 1.0 - float(_tail_gap(2.0 * w, a)) / float(_tail_gap(float(w), a))
        if rng.random() < p:
            lo, hi = w, 2 * w - 1
            break
        w *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        g_lo = float(_tail_gap(float(lo), a))
        num = g_lo - float(_tail_gap(float(mid + 1), a))
        den = g_lo - float(_tail_gap(float(hi + 1), a))
        if rng.random() < num / den:
            hi = mid
        else:
            lo = mid + 1
    return ChainState(lo)


def sample_initial(rng, params: ModelParams) -> ChainState:
    """Draw X_0 from the equilibrium distribution, so emission is stationary
    from the first symbol with no burn-in."""
    return ChainState(int(_sample_equilibrium(rng, params, 1)[0]))


def step(state: ChainState, rng, params: ModelParams) -> ChainState:
    """Advance one step: deterministic countdown above 0, jump law at 0.

    Consumes no randomness when state.x > 0.
    """
    if state.x > 0:
        return ChainState(state.x - 1)
    return sample_jump(rng, params)


# ---------------------------------------------------------------------------
# symbol emission

class MarkovGenerator:
    """Streams the chain's binary symbols; Y_i = 1 iff X_i != 0.

    Successive generate() calls continue the same trajectory, and splitting a
    request into pieces yields byte-identical symbols to one big request with
    the same seed. Construction draws X_0 from equilibrium.
    """

    def __init__(self, params: ModelParams):
        self.params = params
        self._rng = np.random.default_rng(params.seed)
        self._cdf = _jump_cdf_table(params)
        self._x = int(_sample_equilibrium(self._rng, params, 1)[0])
        self._queue = np.empty(0, dtype=np.int64)
        self._qpos = 0

    @property
    def state(self) -> ChainState:
        """State of the chain at the next symbol to be emitted."""
        return ChainState(self._x)

    def generate_symbols(self, n: int) -> np.ndarray:
        """Emit the next n symbols as a uint8 array."""
        if n < 1:
            raise OutOfRangeError(f"n must be >= 1, got {n}")
        out = np.empty(n, dtype=np.uint8)
        pos = 0
        x = self._x
        if x > 0:
            take = min(x, n)
            out[:take] = 1
            pos = take
            x -= take
            if pos == n:
                self._x = x
                return out
        # x == 0 here: the stream continues zero-first, one zero per block
        while pos < n:
            if self._qpos == self._queue.size:
                self._queue = _sample_jumps(self._rng, self.params, _JUMP_BLOCK, self._cdf)
                self._qpos = 0
            ks = self._queue[self._qpos:]
            lens = ks + 1
            cum = np.cumsum(lens)
            space = n - pos
            total = int(cum[-1])
            if total <= space:
                out[pos: pos + total] = 1
                out[pos + cum - lens] = 0
                pos += total
                self._qpos = self._queue.size
                x = 0
            else:
                nb = int(np.searchsorted(cum, space, side="right"))
                if nb:
                    base = int(cum[nb - 1])
                    out[pos: pos + base] = 1
                    out[pos + cum[:nb] - lens[:nb]] = 0
                    pos += base
                self._qpos += nb
                rem = n - pos
                if rem:
                    k_next = int(ks[nb])
                    self._qpos += 1
                    out[pos] = 0
                    out[pos + 1: pos + rem] = 1
                    pos = n
                    x = k_next - (rem - 1)
                else:
                    x = 0
        self._x = x
        return out

    def generate(self, n: int) -> BinarySeries:
        return BinarySeries(self.generate_symbols(n), params=self.params, generator="markov")


def generate(params: ModelParams, n: int) -> BinarySeries:
    """Generate n symbols from a fresh trajectory seeded by params.seed.

    Identical (params, n) always yields identical output. For incremental
    emission (more symbols later without regeneration) hold a MarkovGenerator.
    """
    return MarkovGenerator(params).generate(n)
