"""Exception hierarchy shared by every module."""


class AHVError(Exception):
    """Base class for all verification-lab errors."""


class InvalidField(AHVError, ValueError):
    """A matrix is not a finite 4x4 affine field with zero last row."""


class DependentBasis(AHVError, ValueError):
    """Fields of a basis are not real-linearly independent."""


class IllConditionedBasis(AHVError):
    """The Gram matrix of a real span is too ill-conditioned to project onto."""


class SingularTransform(AHVError):
    """A conjugating matrix is singular, ill-conditioned or not affine."""


class DomainViolation(AHVError, ValueError):
    """Parameters or a point fall outside the stated domain."""


class SamplingExhausted(AHVError):
    """Rejection sampling ran out of attempts."""


class ShapeMismatch(AHVError, ValueError):
    """Translation columns do not have the template shape."""


class DegenerateGradient(AHVError):
    """The defining function has (numerically) zero gradient at a point."""


class NotSPC(AHVError):
    """The Levi form is not definite at the requested point."""


class ResidualUSquare(AHVError):
    """A u^2 coefficient survives the shear that removes the u*z terms."""


class FitFailed(AHVError):
    """No multistart reached the success threshold."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NoConvergence(AHVError):
    """An iterative solver stopped without meeting its tolerance."""

    def __init__(self, message, iterations=0, residual=float("nan")):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class ConfigError(AHVError, ValueError):
    """Invalid campaign configuration (CLI exit code 2)."""
