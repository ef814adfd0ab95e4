"""Exception types shared across the package."""


class StarcapError(Exception):
    """Base class for all package-specific errors."""


class DomainError(StarcapError, ValueError):
    """An evaluation point lies outside the admissible domain."""


class ConfigError(StarcapError, ValueError):
    """An experiment configuration violates a documented invariant."""


class RootFindingError(StarcapError, RuntimeError):
    """A bracketed root search failed; the message carries the bracket."""

    def __init__(self, message: str, bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.bracket = bracket


class ConvergenceError(StarcapError, RuntimeError):
    """A linear solve failed to meet its residual tolerance."""

    def __init__(self, message: str, residual_history: list[float] | None = None):
        super().__init__(message)
        self.residual_history = residual_history or []


class SolverNanError(StarcapError, RuntimeError):
    """A solve produced a NaN; the message carries the offending node index."""

    def __init__(self, message: str, node: tuple[int, int] | None = None):
        super().__init__(message)
        self.node = node


class NoCrossingError(StarcapError, RuntimeError):
    """A level-set extraction found no crossing on some ray."""
