"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A scalar or shape argument is outside its documented domain."""


class DegenerateGeometryError(ValueError):
    """A user sits (numerically) on top of a pinching antenna."""


class InfeasibleFractionsError(ValueError):
    """Requested per-antenna power fractions exceed the remaining guided power."""


class CouplingOutOfRangeError(ValueError):
    """Requested coupling coefficient is unreachable at nonnegative spacing."""


class QosInfeasibleError(RuntimeError):
    """The minimum-rate demands cannot be met with the available power budget."""


class InfeasibleStartError(RuntimeError):
    """The SCA expansion point violates a constraint beyond tolerance."""


class TooManyOrderingsError(ValueError):
    """Exhaustive SIC search requested for more users than the K! guard allows."""


class TooManyAntennasError(ValueError):
    """Exhaustive activation search requested beyond the 2^N_t guard."""
