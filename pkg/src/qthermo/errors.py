"""Exception hierarchy shared across the package.

ValidationError covers bad inputs and broken state invariants (CLI exit
code 1); NumericalFailureError covers breakdowns of the numerical
machinery itself (CLI exit code 2).
"""


class QThermoError(Exception):
    """Base class for all package errors."""


class ValidationError(QThermoError):
    """Input or state-invariant violation."""


class NumericalFailureError(QThermoError):
    """A numerical procedure failed to meet its accuracy contract."""


class DimensionError(ValidationError):
    pass


class NonHermitianError(ValidationError):
    pass


class TraceNotOneError(ValidationError):
    pass


class NotPositiveError(ValidationError):
    pass


class UnmatchedBranchesError(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class NonConvergenceError(NumericalFailureError):
    pass


class IntegrationFailureError(NumericalFailureError):
    pass


class CrossCheckError(NumericalFailureError):
    pass
