"""Error Classifier — map failures to an exit code and a diagnostic line.

The CLI hands every caught exception (or an error string from a failed bench
cell) to ``ErrorClassifier.classify`` and exits with the strategy's code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from core.errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    ExpressionSyntaxError,
    HypothesisError,
    OverflowSignal,
    ReportError,
    SeriesTruncationError,
    SingularityError,
    UnknownIdentifierError,
)


class ErrorType(str, Enum):
    CONFIG = "config"
    EXPRESSION = "expression"
    HYPOTHESIS = "hypothesis"
    DOMAIN = "domain"
    CONVERGENCE = "convergence"
    SINGULARITY = "singularity"
    OVERFLOW = "overflow"
    TRUNCATION = "truncation"
    REPORT = "report"
    IO = "io"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ErrorStrategy:
    """How the CLI reports a classified error."""

    error_type: ErrorType
    exit_code: int
    user_message: str


# ── Classification tables ────────────────────────────────────────

_CONFIG = ErrorStrategy(ErrorType.CONFIG, 2, "invalid problem or study configuration")
_EXPRESSION = ErrorStrategy(ErrorType.EXPRESSION, 2, "right-hand side expression could not be used")
_HYPOTHESIS = ErrorStrategy(ErrorType.HYPOTHESIS, 2, "hypothesis on rho is violated")
_TRUNCATION = ErrorStrategy(ErrorType.TRUNCATION, 2, "f_jk table too short for the requested order")
_DOMAIN = ErrorStrategy(ErrorType.DOMAIN, 2, "argument outside the supported domain")
_CONVERGENCE = ErrorStrategy(ErrorType.CONVERGENCE, 3, "an iteration did not converge")
_SINGULARITY = ErrorStrategy(ErrorType.SINGULARITY, 3, "evaluation hit a singularity at t = 0")
_OVERFLOW = ErrorStrategy(ErrorType.OVERFLOW, 3, "result left the double-precision range")
_REPORT = ErrorStrategy(ErrorType.REPORT, 4, "report could not be produced")
_IO = ErrorStrategy(ErrorType.IO, 4, "file could not be read or written")
_UNKNOWN_STRATEGY = ErrorStrategy(ErrorType.UNKNOWN, 1, "unexpected failure")

# Subclasses before their bases.
_BY_TYPE: list[tuple[tuple[type[BaseException], ...], ErrorStrategy]] = [
    ((ConfigError,), _CONFIG),
    ((ExpressionSyntaxError, UnknownIdentifierError, EvaluationError), _EXPRESSION),
    ((HypothesisError,), _HYPOTHESIS),
    ((SeriesTruncationError,), _TRUNCATION),
    ((ConvergenceError,), _CONVERGENCE),
    ((SingularityError,), _SINGULARITY),
    ((OverflowSignal, OverflowError), _OVERFLOW),
    ((DomainError,), _DOMAIN),
    ((ReportError,), _REPORT),
    ((OSError,), _IO),
]

# Bench cells report failures as strings.
_PATTERNS: list[tuple[re.Pattern[str], ErrorStrategy]] = [
    (re.compile(r"did not converge|did not settle", re.IGNORECASE), _CONVERGENCE),
    (re.compile(r"hypothesis|requires 0 < rho", re.IGNORECASE), _HYPOTHESIS),
    (re.compile(r"overflow|double range", re.IGNORECASE), _OVERFLOW),
    (re.compile(r"no such file|permission denied", re.IGNORECASE), _IO),
]


class ErrorClassifier:
    """Classify exceptions or error strings into an ErrorStrategy."""

    @staticmethod
    def classify(error: BaseException | str) -> ErrorStrategy:
        if isinstance(error, BaseException):
            for types, strategy in _BY_TYPE:
                if isinstance(error, types):
                    return strategy
        error_str = str(error)
        for pattern, strategy in _PATTERNS:
            if pattern.search(error_str):
                return strategy
        return _UNKNOWN_STRATEGY

    @staticmethod
    def classify_cell_result(result: dict) -> ErrorStrategy | None:
        """Classify a bench cell result dict; None when it succeeded."""
        if result.get("success", "error" not in result):
            return None
        return ErrorClassifier.classify(result.get("exception") or result.get("error", ""))

    @staticmethod
    def describe(error: BaseException | str) -> str:
        strategy = ErrorClassifier.classify(error)
        return f"{strategy.user_message}: {error}"
