"""Exception hierarchy shared by every layer.

All library errors derive from ``FractionalError`` so the CLI can catch one
type and hand it to ``ErrorClassifier`` for an exit code.
"""

from __future__ import annotations


class FractionalError(Exception):
    """Base class for every error raised by this project."""


class DomainError(FractionalError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Gamma evaluated at a nonpositive integer."""


class OverflowSignal(FractionalError, OverflowError):
    """Result is not representable as a finite double."""


class ConvergenceError(FractionalError):
    """An iterative procedure hit its budget before its stopping rule fired."""

    def __init__(self, message: str, iterations: int = 0, residual: float = float("nan")):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SingularityError(FractionalError):
    """Evaluation at the origin with a negative power of t."""


class HypothesisError(DomainError):
    """The hypothesis on rho is violated."""


class LengthMismatchError(DomainError):
    """Array length does not match the mesh."""


class SeriesTruncationError(FractionalError):
    """The f_jk table does not reach the required (j, k) range."""


class ExpressionSyntaxError(FractionalError):
    """Malformed RHS expression; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownIdentifierError(FractionalError):
    """Identifier not in the expression language."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier '{name}' at offset {position}")
        self.name = name
        self.position = position


class EvaluationError(FractionalError, ArithmeticError):
    """Expression evaluation left its domain (log of a negative, 1/0)."""


class ConfigError(FractionalError):
    """Problem or study description cannot be turned into a valid object."""


class ReportError(FractionalError):
    """Report is empty or cannot be written."""
