"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point was supplied outside the region where an operation is defined."""


class PreconditionError(ValueError):
    """An operation was called on input that violates its stated precondition."""


class InvalidMapError(ValueError):
    """A map failed the self-map certificate or produced a value outside the disk."""


class InconclusiveClassification(RuntimeError):
    """Orbits neither settled at an interior point nor clustered at the boundary."""


class DegenerateBasisError(ValueError):
    """Interpolation nodes are too close together for a usable Lagrange basis."""


class NonConvergenceError(RuntimeError):
    """A bracketing search failed to find a finite upper bound."""
