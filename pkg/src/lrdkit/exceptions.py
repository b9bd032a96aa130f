"""Exception hierarchy for lrdkit.

Every error raised by the package derives from :class:`LrdError`, so callers
can catch one base class at API boundaries (the CLI does exactly this).
"""


class LrdError(Exception):
    """Base class for all lrdkit errors."""


class OutOfRangeError(LrdError, ValueError):
    """A scalar argument lies outside its documented domain."""


class InvalidRegionError(LrdError, ValueError):
    """(pi0, alpha) fall outside the region where the jump law is a distribution."""


class OrderingViolationError(LrdError, ValueError):
    """Index arguments violate a required ordering such as 0 < k <= i <= j."""


class RngExhaustedError(LrdError, RuntimeError):
    """The random stream ran dry.

    Unreachable with the default PCG64-backed streams (period >= 2**128); kept
    so finite replay streams can signal depletion through the same hierarchy.
    """


class ConstantSeriesError(LrdError, ValueError):
    """The input series has zero variance, so the quantity is undefined."""


class TooShortError(LrdError, ValueError):
    """The input series is shorter than the method's minimum length."""


class EmbeddingNotPSDError(LrdError, ArithmeticError):
    """Circulant embedding produced materially negative eigenvalues."""


class NoConvergenceError(LrdError, RuntimeError):
    """An iterative numerical routine failed to converge."""


class NegativeACFError(LrdError, ValueError):
    """Autocorrelations in the requested lag range are nonpositive or
    statistically indistinguishable from zero, so a log-log fit is meaningless."""


class StateOverflowError(LrdError, OverflowError):
    """A sampled chain state would exceed the representable cap (2**63 - 1)."""
