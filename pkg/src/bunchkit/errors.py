"""Exception types shared across the package.

Everything derives from BunchkitError so callers (the CLI in particular) can
catch one base class and map it to an exit code.
"""


class BunchkitError(Exception):
    """Base class for all errors raised by bunchkit."""


class DomainError(BunchkitError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class NoSignChange(BunchkitError):
    """Root bracket endpoints have the same sign and neither is a root."""


class NonFiniteObjective(BunchkitError):
    """An objective or integrand evaluated to nan/inf where a finite value is required."""


class MaxDepthExceeded(BunchkitError):
    """Adaptive refinement hit its depth limit before reaching the tolerance."""


class MismatchedFamily(BunchkitError, ValueError):
    """Two parameter sets that must share (n, m) do not."""


class DegenerateParams(BunchkitError, ValueError):
    """Parameters collapse the problem (e.g. a1 == a2, so the CDFs coincide)."""


class RatioAboveOne(BunchkitError):
    """The density ratio never drops below one, so it has no unit crossings."""


class NonMonotoneTransform(BunchkitError, ValueError):
    """Transform parameters do not define a strictly monotone map."""


class MedianInOpenBin(BunchkitError):
    """The grouped CDF reaches 50% only in the unbounded top bin."""


class ParseError(BunchkitError):
    """Malformed input file; the message carries the offending line number."""


class ValidationError(BunchkitError):
    """Structurally parsed but semantically invalid data."""


class MeanUndefined(BunchkitError):
    """The GB2 mean does not exist (beta * gamma <= 1), so Gini is undefined."""
