"""Exception types raised by pdwasser."""


class InvalidPointError(ValueError):
    """A birth-death pair is non-finite or has birth >= death."""


class InvalidMatching(ValueError):
    """Index sets of a partial matching do not partition the diagrams."""


class SizeLimitExceeded(ValueError):
    """An exhaustive or probe computation was asked to exceed its size cap."""


class IsometryViolation(AssertionError):
    """Embedded diagrams failed to reproduce the source l_p distances."""

    def __init__(self, pair, residual, message=None):
        self.pair = pair
        self.residual = residual
        super().__init__(
            message or f"isometry violated at pair {pair}: relative residual {residual:.3e}"
        )


class BoundViolation(AssertionError):
    """A non-identity partial matching undercut a lower bound it must exceed."""

    def __init__(self, matching, cost, bound, message=None):
        self.matching = matching
        self.cost = cost
        self.bound = bound
        super().__init__(message or f"matching {matching} has cost {cost!r}, bound {bound!r}")


class DiagramParseError(ValueError):
    """A CSV input file could not be parsed; ``lineno`` is 1-based."""

    def __init__(self, path, lineno, message):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


class DiagramInvariantError(InvalidPointError):
    """A parsed CSV line holds a point that violates birth < death."""

    def __init__(self, path, lineno, message):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")
