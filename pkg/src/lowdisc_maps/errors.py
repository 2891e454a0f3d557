"""Exception hierarchy for lowdisc-maps.

Every error carries the process exit code the CLI maps it to:

    0  ok
    1  numerical failure (non-converged iteration, orbit drift)
    2  usage or input problem (bad map, bad parameters, unknown labels)
    3  inconclusive certificate (reported by the CLI, not raised)
    4  resource guard (a configured memory/time bound would be exceeded)

Results such as "not Markov", "wx does not exist" or "test failed" are
returned as values, never raised.
"""

from __future__ import annotations

from typing import Any

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3
EXIT_RESOURCE = 4


class LowDiscError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_NUMERICAL


class InputError(LowDiscError):
    """Invalid input or usage."""

    exit_code = EXIT_INPUT


class MapValidationError(InputError):
    """Branch list does not describe a constant-slope expanding map on [0,1)."""

    pass


class ExpressionError(InputError):
    """Constant expression could not be parsed or evaluated."""

    pass


class DomainError(InputError):
    """Argument outside the domain of an operation."""

    pass


class UnsupportedMapError(InputError):
    """Operation requires structure the map does not have (e.g. Markov)."""

    pass


class ErgodicDecompositionError(UnsupportedMapError):
    """The eigenvalue-1 eigenspace is not one-dimensional."""

    def __init__(self, components: int) -> None:
        super().__init__(
            f"invariant density is not unique: {components} ergodic components"
        )
        self.components = components


class ResourceGuardError(LowDiscError):
    """A configured size guard would be exceeded."""

    exit_code = EXIT_RESOURCE

    def __init__(self, message: str, *, requested: int, limit: int) -> None:
        super().__init__(f"{message} (requested {requested}, limit {limit})")
        self.requested = requested
        self.limit = limit


class NumericalError(LowDiscError):
    """Iteration failed to converge or left its domain."""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, residuals: Any | None = None) -> None:
        super().__init__(message)
        self.residuals = residuals
