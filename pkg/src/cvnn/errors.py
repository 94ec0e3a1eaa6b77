"""Exception hierarchy shared across the library.

The CLI maps these onto exit codes, so every failure mode raised by the
numeric modules should be one of the classes below (or a plain ValueError
for argument misuse).
"""


class CVNNError(Exception):
    """Base class for all library errors."""


class ShapeError(CVNNError, ValueError):
    """Array dimensions incompatible with the requested operation."""


class ParseError(CVNNError, ValueError):
    """Malformed model, dataset, or config input."""


class DomainError(CVNNError, ValueError):
    """Input outside the mathematical domain (e.g. log loss at magnitude 0)."""


class OracleEvaluationError(CVNNError, ArithmeticError):
    """A finite-difference stencil point evaluated to a non-finite value."""


class SingularStatisticsError(CVNNError, ArithmeticError):
    """Covariance not positive definite after regularization."""


class InsufficientBatchError(CVNNError, ValueError):
    """Batch statistics requested on fewer than two samples."""


class NonDifferentiableActivationError(CVNNError, TypeError):
    """Gradient requested through an activation without Wirtinger partials."""


# CLI exit-code buckets: 3 for data/shape problems, 4 for numeric ones.
DATA_ERRORS = (ShapeError, ParseError, InsufficientBatchError, FileNotFoundError)
NUMERIC_ERRORS = (
    DomainError,
    OracleEvaluationError,
    SingularStatisticsError,
    NonDifferentiableActivationError,
)
