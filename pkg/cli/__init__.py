"""Command-line layer for gencaputo — expressions, JSON configs, subcommands."""

from .commands import build_parser, run
from .config import ProblemConfig, SeriesConfig
from .expression import Expression, parse_expression

__all__ = [
    "Expression",
    "ProblemConfig",
    "SeriesConfig",
    "build_parser",
    "parse_expression",
    "run",
]
