"""Exception hierarchy.

Every error raised on purpose by the library derives from ``PPTESError`` (itself a
``ValueError``), so callers can catch the whole family at once.
"""


class PPTESError(ValueError):
    """Base class for all library errors."""


class DimensionError(PPTESError):
    """Shapes do not fit the operation (wrong size, not a power of two, ...)."""


class NotHermitianError(PPTESError):
    """Input was required to be Hermitian within tolerance and is not."""


class ParameterError(PPTESError):
    """A scalar parameter lies outside its admissible domain (t in {0, 1}, ...)."""


class DegenerateInputError(PPTESError):
    """Input is numerically degenerate (dependent vectors, Jordan block, continuum of roots)."""


class ConditionViolation(PPTESError):
    """A pairwise algebraic condition required by the operation fails.

    ``pair`` holds the 0-based indices of the worst offending pair and ``residual``
    the size of the violation.
    """

    def __init__(self, message, pair=None, residual=None):
        super().__init__(message)
        self.pair = pair
        self.residual = residual


class BranchError(PPTESError):
    """A square-root branch required by a closed-form transform is not validated for this input."""


class VerificationError(PPTESError):
    """A state failed rank-four PPTES verification; ``report`` carries the failed checks."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
