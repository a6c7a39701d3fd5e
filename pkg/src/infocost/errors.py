"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input fails a structural precondition (shape, hermiticity, trace, config)."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible Hilbert-space dimensions."""


class SupportViolationError(ValueError):
    """Relative entropy is infinite: the first state has weight outside the
    support of the second. Carries the offending eigenvalue of the second state."""

    def __init__(self, message, offending_eigenvalue, weight):
        super().__init__(message)
        self.offending_eigenvalue = offending_eigenvalue
        self.weight = weight


class UntunableConstraintError(ValueError):
    """A constraint operator is proportional to the identity, so no multiplier
    can move its expectation value."""


class BoundaryTargetError(RuntimeError):
    """Target expectation values sit on or outside the spectral boundary; the
    multiplier solve exceeded the clamp instead of returning a garbage state."""


class IntegrationAccuracyError(RuntimeError):
    """The integrator produced a state outside its accuracy policy (typically a
    positivity violation); a finer grid is the usual fix."""


class ConfigError(ValidationError):
    """Scenario or CLI configuration is malformed."""
