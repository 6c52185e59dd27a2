"""Exception hierarchy for the solver."""


class DcnsError(Exception):
    """Base class for all errors raised by this package."""


class ConstraintViolation(DcnsError):
    """A model-parameter inequality is violated; the message names it."""


class NonpositiveDensity(DcnsError):
    """Density must be strictly positive for the variable change."""


class NonpositiveField(DcnsError):
    """A field that enters a fractional power is not strictly positive."""


class InadmissibleKappa(DcnsError):
    """Density decay exponent outside the admissible interval."""


class SupportTooWide(DcnsError):
    """Velocity bump support reaches the domain boundary."""


class CFLViolation(DcnsError):
    """Advective time-step restriction violated."""


class NonpositiveCoefficient(DcnsError):
    """A frozen or evolved coefficient required positive is not."""


class SingularTridiagonal(DcnsError):
    """Implicit momentum matrix lost diagonal dominance."""


class NoContraction(DcnsError):
    """Successive-iterate metric failed to contract; time window too large."""


class LegFailed(DcnsError):
    """A continuation leg did not converge."""

    def __init__(self, leg: int, message: str = ""):
        self.leg = leg
        super().__init__(f"continuation leg {leg} failed" + (f": {message}" if message else ""))


class ShapeMismatch(DcnsError):
    """Trajectories do not share grid or time samples."""


class ConfigError(DcnsError):
    """Run configuration could not be parsed or validated."""
