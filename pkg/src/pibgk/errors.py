"""Exception hierarchy shared across the solver."""


class PibgkError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveDensity(PibgkError):
    """Density moment is zero, negative, or non-finite in some cell."""


class NonPositiveTemperature(PibgkError):
    """Temperature moment is zero, negative, or non-finite in some cell."""


class NonPositiveInput(PibgkError):
    """A strictly positive quantity (density, temperature) was not positive."""


class GridMismatch(PibgkError):
    """Profiles or fields do not live on the grid they are combined with."""


class DimensionMismatch(PibgkError):
    """Scenario requires different spatial/velocity dimensions than the grids."""


class UnsupportedDimension(PibgkError):
    """Velocity dimension outside the supported set {1, 2}."""


class GridTooSmall(PibgkError):
    """Fewer interior cells than the reconstruction stencil needs."""


class InvalidTableau(PibgkError):
    """Runge-Kutta tableau violates the explicit-method consistency conditions."""


class StepUnstable(PibgkError):
    """A time step produced NaN/Inf values or an unphysical state."""


class EigensolverFailure(PibgkError):
    """Dense eigenvalue computation did not converge."""


class AdviceRejected(PibgkError):
    """Advised projective parameters failed the spectral amplification check."""


class ConfigError(PibgkError):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    """Configuration document is not syntactically valid."""


class ValidationError(ConfigError):
    """Configuration violates one or more constraints.

    The message lists every violation, not just the first one found.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("\n".join(self.violations))
