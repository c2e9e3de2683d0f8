"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class RegionError(ValueError):
    """A point does not lie in the region a construction is built for."""


class DegenerateConfigurationError(ValueError):
    """Coincident points, a non-surjective evaluation map, or a collapsed disk."""


class ConvergenceError(RuntimeError):
    """An iterative procedure did not converge."""


class CertificationError(RuntimeError):
    """An analytic disk was used before its containment was certified."""


class NotCertifiedError(RuntimeError):
    """A stabilization-based computation did not stabilize within its budget.

    The partial data (a length or multiplicity table) is attached as ``table``.
    """

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table


class MultipleZeroError(DegenerateConfigurationError):
    """A simple-zero formula met a zero of multiplicity > 1."""
