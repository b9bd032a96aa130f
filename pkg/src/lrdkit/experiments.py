"""Asymptotic verification experiments and the estimator comparison harness.

Three checks confirm the binary chain's advertised scaling laws — the
recurrence-time tail, the growth of Var N_n (visits to state zero), and the
autocorrelation decay — and a batch harness runs every generator through the
full estimator battery on a fixed grid of Hurst parameters.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimators import METHODS, ScalingFit, acf, estimate_all, fit_log_line
from .exceptions import (
    LrdError,
    NegativeACFError,
    OrderingViolationError,
    OutOfRangeError,
    TooShortError,
)
from .fgn import FgnGenerator
from .itmap import IntermittencyMapGenerator, MapParams, hurst_to_m
from .markov import (
    MarkovGenerator,
    ModelParams,
    _sample_jumps,
    hurst_to_alpha,
    jump_tail,
    validate_params,
)
from .series import RealSeries, aggregate, series_values

__all__ = [
    "tail_check",
    "count_variance_check",
    "acf_slope_check",
    "count_variance_prefactor",
    "TableConfig",
    "CellResult",
    "TableResult",
    "table2_harness",
    "table_to_text",
    "table_to_csv",
]


def tail_check(params: ModelParams, ns) -> ScalingFit:
    """Fit the closed-form recurrence-time tail 1 - F(n) on a log-log grid.

    The slope estimates -(1 + alpha); the tail itself is evaluated
    analytically, so this verifies the algebra, not a simulation.
    """
    ns = np.asarray(ns, dtype=np.float64)
    if ns.size < 3:
        raise TooShortError("tail_check needs at least 3 sample points")
    if not np.all(np.diff(ns) > 0):
        raise OrderingViolationError("tail_check sample points must be increasing")
    if ns[0] < 1 or ns[-1] > 10**8:
        raise OutOfRangeError("tail_check sample points must lie in [1, 1e8]")
    tails = jump_tail(ns, params)
    return fit_log_line(np.log(ns), np.log(tails))


def _count_ladder(n_max: int, points: int = 12) -> np.ndarray:
    """Geometric grid of horizon lengths, deduplicated as integers."""
    grid = np.geomspace(100.0, float(n_max), points)
    return np.unique(np.round(grid).astype(np.int64))


def count_variance_check(
    params: ModelParams, n_max: int, replicas: int
) -> ScalingFit:
    """Monte Carlo growth rate of Var N_n, the visit count of state zero.

    Each replica starts the chain at state zero, so the visits form a pure
    renewal sequence whose recurrence times are one plus an inverse-CDF jump
    draw; a replica costs one cumulative sum rather than n_max single steps.
    The fitted slope of log Var N_n against log n estimates 2 - alpha, and
    the level approaches 2 alpha pi0^2 (1-pi0) / ((1-alpha)(2-alpha)) times
    n^(2-alpha) (see count_variance_prefactor).  An equilibrium start would
    inflate the level by ~1/alpha: the heavy-tailed delay until the first
    visit contributes to the variance at leading order.
    """
    if replicas < 100:
        raise OutOfRangeError("count_variance_check needs >= 100 replicas")
    if n_max < 1000:
        raise OutOfRangeError("count_variance_check needs n_max >= 1000")
    rng = np.random.default_rng(params.seed)
    ladder = _count_ladder(n_max)
    batch = int(n_max * params.pi0 * 1.1) + 64
    counts = np.empty((replicas, ladder.size), dtype=np.int64)
    for i in range(replicas):
        times = _sample_jumps(rng, params, batch) + 1
        arrivals = np.cumsum(times, dtype=np.float64)
        while arrivals[-1] <= n_max:
            extra = _sample_jumps(rng, params, batch // 4 + 16) + 1
            arrivals = np.concatenate(
                [arrivals, arrivals[-1] + np.cumsum(extra, dtype=np.float64)]
            )
        counts[i] = np.searchsorted(arrivals, ladder, side="right")
    variances = counts.var(axis=0, ddof=1)
    keep = variances > 0
    if keep.sum() < 3:
        raise TooShortError("count_variance_check: fewer than 3 usable ladder points")
    return fit_log_line(np.log(ladder[keep]), np.log(variances[keep]))


def count_variance_prefactor(params: ModelParams) -> float:
    """Leading constant of Var N_n ~ C n^(2-alpha) for a state-zero start."""
    a, p0 = params.alpha, params.pi0
    return 2.0 * a * p0**2 * (1.0 - p0) / ((1.0 - a) * (2.0 - a))


def acf_slope_check(series, lag_range=(10, 1000), n_lags: int = 30) -> ScalingFit:
    """Fit the log-log decay of the sample autocorrelation over a lag range.

    Lags whose correlation is non-positive or statistically indistinguishable
    from zero (|rho| < 2/sqrt(n)) are excluded; the fit is rejected outright
    when fewer than 3 usable lags remain or fewer than half clear the noise
    floor.  The slope estimates -alpha.
    """
    lo, hi = int(lag_range[0]), int(lag_range[1])
    if not 1 <= lo < hi:
        raise OrderingViolationError("lag_range must satisfy 1 <= lo < hi")
    x = series_values(series)
    if x.size < 10_000 * hi:
        raise TooShortError(f"need >= {10_000 * hi} points for lags up to {hi}")
    lags = np.unique(np.round(np.geomspace(lo, hi, n_lags)).astype(np.int64))
    rho = acf(x, hi)[lags]
    noise_floor = 2.0 / np.sqrt(x.size)
    usable = rho > 0
    significant = rho > noise_floor
    if usable.sum() < 3 or significant.sum() < lags.size / 2:
        raise NegativeACFError(
            f"autocorrelation indistinguishable from zero over lags "
            f"[{lo}, {hi}]: {usable.sum()} positive, "
            f"{significant.sum()}/{lags.size} above the noise floor"
        )
    return fit_log_line(np.log(lags[usable]), np.log(rho[usable]))


# ---------------------------------------------------------------------------
# estimator comparison harness

_GENERATORS = ("fgn", "itmap", "markov")


@dataclass(frozen=True)
class TableConfig:
    """Grid and protocol for the estimator comparison table.

    Binary generators are run for n_points * block raw symbols and aggregated
    into block sums; fgn is estimated raw at n_points.  The local Whittle
    bandwidth and wavelet octave floor default to the wide-band settings the
    comparison table is calibrated against; library defaults for the
    standalone estimators are narrower.
    """

    generators: tuple = _GENERATORS
    hursts: tuple = (0.625, 0.75, 0.875)
    replicas: int = 3
    n_points: int = 1_000_000
    block: int = 100
    master_seed: int = 1729
    markov_pi0: float = 0.5
    itmap_d: float = 0.5
    methods: tuple = METHODS
    lw_bandwidth_power: float = 1.0
    wavelet_min_octave: int = 1

    def __post_init__(self):
        unknown = [g for g in self.generators if g not in _GENERATORS]
        if unknown:
            raise OutOfRangeError(
                f"unknown generators {unknown}; choose from {_GENERATORS}"
            )
        if self.replicas < 1:
            raise OutOfRangeError("replicas must be >= 1")
        if self.n_points < 2**12:
            raise OutOfRangeError("n_points must be >= 4096")
        if self.block < 1:
            raise OutOfRangeError("block must be >= 1")
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "hursts", tuple(float(h) for h in self.hursts))
        object.__setattr__(self, "methods", tuple(self.methods))


@dataclass(frozen=True)
class CellResult:
    """One (generator, hurst, replica) cell: estimates or per-method errors."""

    generator: str
    hurst: float
    replica: int
    seed: int
    estimates: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    gen_seconds: float = 0.0
    est_seconds: float = 0.0


@dataclass(frozen=True)
class TableResult:
    """All cells in deterministic order plus per-generator wall-clock totals."""

    config: TableConfig
    cells: tuple

    def generator_seconds(self) -> dict:
        totals: dict = {}
        for cell in self.cells:
            gen = totals.setdefault(cell.generator, [0.0, 0.0])
            gen[0] += cell.gen_seconds
            gen[1] += cell.est_seconds
        return {g: tuple(v) for g, v in totals.items()}


def _cell_seed(master_seed: int, index: int) -> int:
    return int(
        np.random.SeedSequence([master_seed, index]).generate_state(1, np.uint64)[0]
    )


def _make_series(config: TableConfig, generator: str, hurst: float, seed: int):
    if generator == "fgn":
        values = FgnGenerator(hurst, seed=seed).generate_values(config.n_points)
        return RealSeries(values, "fgn")
    n_raw = config.n_points * config.block
    if generator == "markov":
        params = validate_params(config.markov_pi0, hurst_to_alpha(hurst), seed=seed)
        raw = MarkovGenerator(params).generate(n_raw)
    else:
        m = hurst_to_m(hurst)
        raw = IntermittencyMapGenerator(
            MapParams(config.itmap_d, m, m, seed=seed)
        ).generate(n_raw)
    return aggregate(raw, config.block)


def _run_cell(config: TableConfig, generator: str, hurst: float,
              replica: int, index: int) -> CellResult:
    seed = _cell_seed(config.master_seed, index)
    t0 = time.perf_counter()
    series = _make_series(config, generator, hurst, seed)
    t1 = time.perf_counter()
    overrides = {
        "local_whittle": {"bandwidth_power": config.lw_bandwidth_power},
        "wavelet": {"min_octave": config.wavelet_min_octave},
    }
    estimates: dict = {}
    errors: dict = {}
    # rs and rs_modified share one scale sweep, so they run as one group
    groups = [g for g in (
        tuple(m for m in ("rs", "rs_modified") if m in config.methods),
        ("aggvar",), ("periodogram",), ("local_whittle",), ("wavelet",),
    ) if g and all(m in config.methods for m in g)]
    for group in groups:
        try:
            estimates.update(estimate_all(series, group, overrides=overrides))
        except (LrdError, ValueError) as exc:
            for m in group:
                errors[m] = f"{type(exc).__name__}: {exc}"
    t2 = time.perf_counter()
    return CellResult(
        generator, hurst, replica, seed, estimates, errors,
        gen_seconds=t1 - t0, est_seconds=t2 - t1,
    )


def table2_harness(config: TableConfig = TableConfig()) -> TableResult:
    """Run every (generator, hurst, replica) cell through the battery.

    Cells are independent jobs dispatched over LRD_THREADS workers (default:
    available cores); results are always ordered by cell index, so the output
    is identical regardless of thread count.  A failing estimator is recorded
    in that cell's errors without disturbing any other cell.
    """
    cells = [
        (gen, hurst, replica)
        for gen in config.generators
        for hurst in config.hursts
        for replica in range(config.replicas)
    ]
    threads = int(os.environ.get("LRD_THREADS", os.cpu_count() or 1))
    if threads < 1:
        raise OutOfRangeError("LRD_THREADS must be >= 1")
    if threads == 1 or len(cells) <= 1:
        results = [
            _run_cell(config, gen, hurst, replica, idx)
            for idx, (gen, hurst, replica) in enumerate(cells)
        ]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_cell, config, gen, hurst, replica, idx)
                for idx, (gen, hurst, replica) in enumerate(cells)
            ]
            results = [f.result() for f in futures]
    return TableResult(config, tuple(results))


_SOURCE_LABEL = {"fgn": "FGN", "itmap": "It. map", "markov": "Markov"}
_COLUMN_LABEL = {
    "rs": "R/S",
    "rs_modified": "Mod. R/S",
    "aggvar": "Agg. Var.",
    "periodogram": "Periodogram",
    "local_whittle": "Local Whit.",
    "wavelet": "Wavelets",
}


def _cell_text(cell: CellResult, method: str) -> str:
    if method in cell.errors:
        return "ERR"
    est = cell.estimates.get(method)
    if est is None:
        return "-"
    # low-r2 scaling fits are flagged; they mean the log-log plot was not
    # straight and the point estimate should not be trusted
    flag = "*" if est.fit is not None and est.fit.r2 < 0.9 else ""
    return f"{est.h:.3f}{flag}"


def table_to_text(result: TableResult) -> str:
    methods = [m for m in METHODS if m in result.config.methods]
    header = ["Source", "H"] + [_COLUMN_LABEL[m] for m in methods]
    rows = [
        [_SOURCE_LABEL[c.generator], f"{c.hurst:g}"]
        + [_cell_text(c, m) for m in methods]
        for c in result.cells
    ]
    widths = [
        max(len(header[j]), *(len(r[j]) for r in rows)) if rows else len(header[j])
        for j in range(len(header))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
    for gen, (gsec, esec) in sorted(result.generator_seconds().items()):
        lines.append(
            f"# {_SOURCE_LABEL[gen]}: generation {gsec:.1f} s, estimation {esec:.1f} s"
        )
    if any("*" in v for r in rows for v in r):
        lines.append("# * scaling fit with r2 < 0.9")
    return "\n".join(lines) + "\n"


def table_to_csv(result: TableResult) -> str:
    methods = [m for m in METHODS if m in result.config.methods]
    lines = ["generator,hurst,replica,method,h,ci_low,ci_high,r2,error"]
    for c in result.cells:
        for m in methods:
            if m in c.errors:
                err = c.errors[m].replace(",", ";")
                lines.append(f"{c.generator},{c.hurst:g},{c.replica},{m},,,,,{err}")
                continue
            est = c.estimates.get(m)
            if est is None:
                continue
            ci_lo = "" if est.ci_low is None else f"{est.ci_low:.4f}"
            ci_hi = "" if est.ci_high is None else f"{est.ci_high:.4f}"
            r2 = "" if est.fit is None else f"{est.fit.r2:.4f}"
            lines.append(
                f"{c.generator},{c.hurst:g},{c.replica},{m},"
                f"{est.h:.4f},{ci_lo},{ci_hi},{r2},"
            )
    return "\n".join(lines) + "\n"
