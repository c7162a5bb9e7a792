"""Exception hierarchy shared across the package."""


class PlasmonShapeError(Exception):
    """Base class for all numerical failures raised by this package."""


class DomainError(PlasmonShapeError, ValueError):
    """Special-function argument outside the implemented domain."""


class NonPositiveRadius(PlasmonShapeError, ValueError):
    """A starlike radius function is not strictly positive on the grid."""


class DegenerateContrast(PlasmonShapeError, ValueError):
    """mu_c equals mu_m, so the spectral parameter is undefined."""


class DegenerateLambda(PlasmonShapeError, ValueError):
    """lambda equals -1/2, so mu_c is undefined."""


class NoBracket(PlasmonShapeError, ValueError):
    """The bracket does not enclose a sign change."""


class EigSolverFailure(PlasmonShapeError, RuntimeError):
    pass


class SingularSystem(PlasmonShapeError, RuntimeError):
    """The discrete boundary-integral system is numerically singular."""


class PointInsideInclusion(PlasmonShapeError, ValueError):
    pass


class RadiusOnBoundary(PlasmonShapeError, ValueError):
    pass


class SeriesDivergence(PlasmonShapeError, RuntimeError):
    """Mie series tail bound not reached within the order cap."""


class FDUnstable(PlasmonShapeError, RuntimeError):
    """Richardson check on a finite-difference derivative failed."""


class StepRejected(PlasmonShapeError, RuntimeError):
    """Backtracking could not restore a positive radius."""


class SingularNormalEq(PlasmonShapeError, RuntimeError):
    pass


class NotPositiveDefinite(PlasmonShapeError, RuntimeError):
    pass


class ConfigError(PlasmonShapeError, ValueError):
    """Invalid experiment configuration; carries an optional line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
