"""Exception hierarchy shared by all pulsegate modules."""


class PulsegateError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(PulsegateError):
    """A parameter is outside its documented domain (e.g. nfft shorter than the signal)."""


class InvalidInputError(PulsegateError):
    """Input data violates a type invariant (non-finite samples, bad shapes)."""


class InsufficientDataError(PulsegateError):
    """The input is too short for the requested operation."""


class DegenerateInputError(PulsegateError):
    """The input has no usable structure (e.g. zero in-band spectral energy)."""


class DegenerateCorrelationError(DegenerateInputError):
    """Correlation is undefined because one of the signals is constant."""


class InvalidTrainingSetError(PulsegateError):
    """A classifier or estimator was given an unusable training set."""


class CoverageError(PulsegateError):
    """Frame-level evaluation was requested for frames not covered by any window."""


class EmptyComparisonError(PulsegateError):
    """No overlapping valid samples were available for a comparison."""


class NumericalDivergenceError(PulsegateError):
    """An iterative procedure produced non-finite values."""
