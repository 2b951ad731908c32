"""Exception types shared across the package."""


class QhtError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(QhtError):
    """A quadrature or iterative scheme did not reach the requested tolerance."""


class DivergentIntegrand(NonConvergence):
    """The integrand fails to decay on the integration domain."""


class InvalidSpec(QhtError):
    """A state specification violates its invariants."""


class DomainError(QhtError):
    """A numeric parameter lies outside its documented domain."""


class TruncationTooSmall(QhtError):
    """The Fock truncation leaves too much probability mass unaccounted for."""


class PositivityViolation(QhtError):
    """A diagonal entry of a candidate density matrix is negative.

    Carries the first offending Fock index in ``k``.
    """

    def __init__(self, k, value):
        super().__init__(f"diagonal entry at k={k} is negative ({value:.3e})")
        self.k = k
        self.value = value


class NonpositiveDensity(QhtError):
    """A probability density required to be positive is <= 0 somewhere."""


class InsufficientData(QhtError):
    """Not enough data points for the requested fit or statistic."""
