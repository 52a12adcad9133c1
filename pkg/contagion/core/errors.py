"""Exception hierarchy; every class maps to one process exit code."""
from typing import Any, Optional


class ContagionError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 2


class ValidationError(ContagionError):
    """Input violates a documented invariant."""

    exit_code = 1


class GraphValidationError(ValidationError):
    """A WeightedDigraph invariant does not hold."""

    def __init__(
        self,
        invariant: str,
        message: str,
        vertex: Optional[int] = None,
        edge: Optional[tuple[int, int]] = None,
        value: Any = None,
    ):
        super().__init__(message)
        self.invariant = invariant
        self.vertex = vertex
        self.edge = edge
        self.value = value


class ModelValidationError(GraphValidationError):
    """A TriggerModel invariant does not hold."""


class ConfigError(ValidationError):
    """Experiment configuration is invalid."""

    def __init__(self, messages: list[str] | str):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


class ParseError(ValidationError):
    """An input file could not be parsed."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class ContagionRuntimeError(ContagionError):
    """A computation could not be completed."""

    exit_code = 2


class InstanceTooLargeError(ContagionRuntimeError):
    """Exact enumeration would exceed the configuration limit."""

    def __init__(self, count: int, limit: int):
        super().__init__(
            f"instance too large for exact enumeration: {count} configurations (limit {limit})"
        )
        self.count = count
        self.limit = limit


class SearchSpaceTooLargeError(ContagionRuntimeError):
    """Exhaustive set search would exceed the candidate limit."""

    def __init__(self, count: int, limit: int):
        super().__init__(f"search space too large: {count} sets (limit {limit})")
        self.count = count
        self.limit = limit


class SpectralConvergenceError(ContagionRuntimeError):
    """Power iteration did not converge."""

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class NormalizationError(ContagionRuntimeError):
    """Mirror-descent normalization could not reach the simplex."""

    def __init__(self, residual: float):
        super().__init__(f"simplex normalization failed (residual {residual:.3e})")
        self.residual = residual


class ProtocolError(ContagionRuntimeError):
    """A player broke the round protocol."""


class AcceptanceError(ContagionError):
    """A brute-force equivalence suite failed."""

    exit_code = 3
