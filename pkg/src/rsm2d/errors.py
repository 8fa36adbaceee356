"""Exception types raised by the solver pipeline."""


class RSMError(Exception):
    """Base class for all numerical failures in this package."""


class InvalidPotentialError(RSMError, ValueError):
    """The potential cannot be represented or integrated."""


class EigensolverError(RSMError):
    """The dense eigensolve failed or returned non-finite output."""


class NoInteriorMinimumError(RSMError):
    """The ground energy has no interior minimum inside the search bracket.

    Usually the bracket is too narrow, or the potential does not confine
    the particle (e.g. a free particle, whose energy decreases forever as
    the box grows).
    """

    def __init__(self, message, n_basis=None, bracket=None):
        super().__init__(message)
        self.n_basis = n_basis
        self.bracket = bracket


class DegenerateStateError(RSMError):
    """A per-state comparison was requested for a state inside a degenerate cluster."""
