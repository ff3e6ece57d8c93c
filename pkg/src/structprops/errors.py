"""Exception hierarchy shared across the package."""


class StructPropsError(Exception):
    """Base class for all package-specific errors."""


class GraphValidationError(StructPropsError, ValueError):
    """A graph or corpus violates a structural invariant."""


class CorpusParseError(StructPropsError, ValueError):
    """An input file could not be parsed.

    Carries the offending line number when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GraphSizeError(StructPropsError, ValueError):
    """The graph is larger than the exact-size limit of an algorithm."""


class ShapeError(StructPropsError, ValueError):
    """Array dimensions are inconsistent with the operation's contract."""


class NumericError(StructPropsError, ArithmeticError):
    """A numeric computation produced non-finite or unusable values."""


class ConvergenceError(NumericError):
    """An iterative solver exhausted its budget before reaching tolerance.

    ``best_value`` and ``residuals`` describe the last iterate so callers
    can decide whether the partial answer is still usable.
    """

    def __init__(self, message, best_value=None, residuals=None):
        super().__init__(message)
        self.best_value = best_value
        self.residuals = residuals


class TrainingDivergedError(NumericError):
    """Training loss became non-finite; ``checkpoint`` holds the last good state."""

    def __init__(self, message, checkpoint=None):
        super().__init__(message)
        self.checkpoint = checkpoint
