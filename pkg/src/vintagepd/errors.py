"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so the split matters:
bad user configuration vs. bad input data vs. a math precondition.
"""


class VintagePdError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(VintagePdError):
    """A configuration or usage parameter is invalid."""


class ValidationError(VintagePdError):
    """Input data violates a structural invariant (bad file, bad triangle)."""


class DomainError(VintagePdError):
    """An operation was asked outside its mathematical domain."""


class HorizonUnobservedError(DomainError):
    """No cohort observes the requested horizon."""

    def __init__(self, horizon: int):
        super().__init__(f"horizon unobserved: no cohort observes horizon {horizon}")
        self.horizon = horizon
