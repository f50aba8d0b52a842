"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`PlacyError`,
which is itself a :class:`ValueError` so callers that only care about "bad
input" can catch the builtin.
"""


class PlacyError(ValueError):
    """Base class for all package errors."""


class InvalidInputError(PlacyError):
    """Arguments violate a documented precondition."""


class DegenerateDesignError(PlacyError):
    """Regression design matrix is (numerically) rank deficient."""


class UnderdeterminedError(PlacyError):
    """Fewer observations than parameters."""


class SingularRestrictionError(PlacyError):
    """The restricted block of the coefficient covariance cannot be inverted."""


class InsufficientSamplesError(PlacyError):
    """Series too short for the requested lag structure."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class SeriesTooShortError(PlacyError):
    """Series shorter than the analysis window."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class SpectrumError(PlacyError):
    """Power-law fit impossible on a spectrum.

    ``window`` carries the index of the offending window when the failure
    happened inside a sliding-window extraction.
    """

    def __init__(self, message, window=None):
        super().__init__(message)
        self.window = window


class InsufficientSpectrumError(SpectrumError):
    """Fewer than three usable (positive frequency, positive amplitude) points."""


class DegenerateSpectrumError(SpectrumError):
    """Every positive-frequency amplitude is zero."""


class DataFileError(PlacyError):
    """Malformed input file (bad cell, unusable column)."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column
