"""Exception hierarchy shared by the eulerfan modules."""


class EulerFanError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EulerFanError, ValueError):
    """An argument lies outside the domain of a thermodynamic function."""


class QuadratureFailure(EulerFanError, ArithmeticError):
    """Adaptive quadrature hit its refinement limit before meeting tolerance."""


class RootFindingFailure(EulerFanError, ArithmeticError):
    """A bracketed root search could not find a sign change."""


class VacuumIntegralUndefined(EulerFanError, ValueError):
    """A vacuum-side invariant integral was requested for a tabulated law."""


class WrongRegime(EulerFanError):
    """The Riemann data do not belong to the rarefaction-only regime."""

    def __init__(self, regime, message=None):
        self.regime = regime
        super().__init__(message or f"Riemann data are in regime {regime.value}, "
                         "expected RarefactionsOnly")


class GridMismatch(EulerFanError, ValueError):
    """Field arrays are not congruent with the grid they claim to live on."""


class NonPositiveReference(EulerFanError, ValueError):
    """A reference density used in the relative entropy is not positive."""


class SamplingOnKink(EulerFanError, ValueError):
    """A finite-difference stencil straddles a fan edge."""


class VacuumCell(EulerFanError, ValueError):
    """A velocity was requested in a cell without mass."""


class ConfigError(EulerFanError, ValueError):
    """Invalid simulation or command-line configuration."""


class CflViolation(EulerFanError):
    """The requested time step exceeds the stability bound."""


class NegativeDensity(EulerFanError, ArithmeticError):
    """A finite-volume update produced a negative density."""


class MissingSnapshots(EulerFanError, FileNotFoundError):
    """A simulation output directory lacks the expected snapshot files."""
