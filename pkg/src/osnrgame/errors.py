"""Exception hierarchy shared by all solver modules.

Exit-code mapping used by the CLI: ValidationError -> 1,
NumericalError -> 2, OutputError -> 3.
"""


class OsnrGameError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(OsnrGameError):
    """An input object violates one of its invariants."""


class TopologyError(ValidationError):
    """A channel route references a link that does not exist."""


class ScenarioError(ValidationError):
    """A scenario file failed to parse or validate."""


class UsageError(ValidationError):
    """An operation was called on an input of the wrong shape."""


class NumericalError(OsnrGameError):
    """Base class for numerical failures."""


class EvaluationError(NumericalError):
    """An OSNR or cost evaluation hit a non-positive denominator/log argument."""

    def __init__(self, message, channel=None):
        super().__init__(message)
        self.channel = channel


class SingularMatrixError(NumericalError):
    """A factorization found a pivot below the singularity threshold."""

    def __init__(self, message, smallest_pivot=None):
        super().__init__(message)
        self.smallest_pivot = smallest_pivot


class ConvergenceError(NumericalError):
    """An iterative method exhausted max_iter. Carries the last iterate/trace."""

    def __init__(self, message, last=None, trace=None):
        super().__init__(message)
        self.last = last
        self.trace = trace


class DivergenceError(NumericalError):
    """An iteration blew past the divergence guard. Carries the trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NegativePowerError(NumericalError):
    """Strict mode: an iterate produced a negative channel power."""

    def __init__(self, message, step=None, u=None):
        super().__init__(message)
        self.step = step
        self.u = u


class OutputError(OsnrGameError):
    """Report serialization could not write its destination."""
