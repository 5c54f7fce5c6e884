"""Exception taxonomy shared by the whole package."""


class HalfElasticaError(Exception):
    """Base class for all package errors."""


class DomainError(HalfElasticaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutsideModuliSpaceError(DomainError):
    """A (lambda, e2) pair does not correspond to any curve with periodic
    non-constant curvature."""


class RegionError(DomainError):
    """A modulus point lies in the wrong region of the moduli space for the
    requested operation (e.g. a space-like point fed to a time-like
    parameterization)."""


class CharacteristicIntervalError(DomainError):
    """A rational characteristic number q = m/n falls outside the interval
    of admissible period-map values for the given multiplier."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class QuadratureError(HalfElasticaError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best available estimate and the achieved error are attached so the
    failure is diagnosable.
    """

    def __init__(self, message, value=None, achieved=None):
        super().__init__(message)
        self.value = value
        self.achieved = achieved


class IntegrationError(HalfElasticaError, RuntimeError):
    """An ODE integration failed or violated its conservation budget."""


class BracketError(HalfElasticaError, RuntimeError):
    """An exhaustive scan found no sign change bracketing a root."""
