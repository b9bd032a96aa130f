"""lrdkit: binary time series with exact tunable long-range dependence.

An infinite-state Markov chain generates {0,1} series whose mean and Hurst
parameter are both exact inputs, alongside two reference generators
(an intermittency map and fractional Gaussian noise), six Hurst estimators,
and numerical checks of the model's scaling laws.
"""

from .exceptions import (
    ConstantSeriesError,
    EmbeddingNotPSDError,
    InvalidRegionError,
    LrdError,
    NegativeACFError,
    NoConvergenceError,
    OrderingViolationError,
    OutOfRangeError,
    RngExhaustedError,
    StateOverflowError,
    TooShortError,
)
from .series import BinarySeries, RealSeries, aggregate, series_values
from .markov import (
    ChainState,
    MarkovGenerator,
    ModelParams,
    alpha_to_hurst,
    conditional_range_prob,
    equilibrium_pi,
    equilibrium_tail,
    generate,
    hurst_to_alpha,
    jump_prob,
    jump_tail,
    sample_initial,
    sample_jump,
    step,
    validate_params,
    validity_threshold,
)
from .itmap import IntermittencyMapGenerator, MapParams, hurst_to_m, map_generate, map_step
from .fgn import FgnGenerator, fgn_autocovariance, fgn_generate
from .estimators import (
    METHODS,
    AggregatedVarianceHurst,
    HurstEstimate,
    LocalWhittleHurst,
    PeriodogramHurst,
    RescaledRangeHurst,
    ScalingFit,
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
from .experiments import (
    CellResult,
    TableConfig,
    TableResult,
    acf_slope_check,
    count_variance_check,
    count_variance_prefactor,
    table2_harness,
    table_to_csv,
    table_to_text,
    tail_check,
)
from .io import series_checksum

__version__ = "0.1.0"

__all__ = [
    "AggregatedVarianceHurst",
    "BinarySeries",
    "CellResult",
    "ChainState",
    "ConstantSeriesError",
    "EmbeddingNotPSDError",
    "FgnGenerator",
    "HurstEstimate",
    "IntermittencyMapGenerator",
    "InvalidRegionError",
    "LocalWhittleHurst",
    "LrdError",
    "METHODS",
    "MapParams",
    "MarkovGenerator",
    "ModelParams",
    "NegativeACFError",
    "NoConvergenceError",
    "OrderingViolationError",
    "OutOfRangeError",
    "PeriodogramHurst",
    "RealSeries",
    "RescaledRangeHurst",
    "RngExhaustedError",
    "ScalingFit",
    "StateOverflowError",
    "TableConfig",
    "TableResult",
    "TooShortError",
    "WaveletHurst",
    "acf",
    "acf_slope_check",
    "aggregate",
    "aggvar_estimate",
    "alpha_to_hurst",
    "conditional_range_prob",
    "count_variance_check",
    "count_variance_prefactor",
    "equilibrium_pi",
    "equilibrium_tail",
    "estimate_all",
    "fgn_autocovariance",
    "fgn_generate",
    "fit_log_line",
    "generate",
    "hurst_to_alpha",
    "hurst_to_m",
    "jump_prob",
    "jump_tail",
    "local_whittle_estimate",
    "map_generate",
    "map_step",
    "periodogram",
    "periodogram_estimate",
    "rs_estimate",
    "sample_initial",
    "sample_jump",
    "series_checksum",
    "series_values",
    "step",
    "table2_harness",
    "table_to_csv",
    "table_to_text",
    "tail_check",
    "validate_params",
    "validity_threshold",
    "wavelet_estimate",
]
