"""Core layer for gencaputo — special functions, problems, transform, operators, series."""

from .error_classifier import ErrorClassifier, ErrorStrategy, ErrorType
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    ExpressionSyntaxError,
    FractionalError,
    HypothesisError,
    LengthMismatchError,
    OverflowSignal,
    PoleError,
    ReportError,
    SeriesTruncationError,
    SingularityError,
    UnknownIdentifierError,
)
from .operators import QuadratureSpec, gen_caputo_derivative, gen_integral
from .problem import (
    CaputoIVP,
    ConvergenceReport,
    GeneralizedIVP,
    GradedMesh,
    ReportRow,
    Solution,
    build_graded_mesh,
    convergence_orders,
    linf_error,
)
from .series import SeriesProblem, SeriesSolution, eval_series, series_solve
from .settings import Settings, get_settings, load_settings
from .special import Tolerance, beta, gamma, gamma_ratio, log_gamma, mittag_leffler
from .transform import (
    LambdaTable,
    apply_gamma_n,
    equivalent_exact,
    lambda_table,
    pull_back,
    to_equivalent,
)

__all__ = [
    "CaputoIVP",
    "ConfigError",
    "ConvergenceError",
    "ConvergenceReport",
    "DomainError",
    "ErrorClassifier",
    "ErrorStrategy",
    "ErrorType",
    "EvaluationError",
    "ExpressionSyntaxError",
    "FractionalError",
    "GeneralizedIVP",
    "GradedMesh",
    "HypothesisError",
    "LambdaTable",
    "LengthMismatchError",
    "OverflowSignal",
    "PoleError",
    "QuadratureSpec",
    "ReportError",
    "ReportRow",
    "SeriesProblem",
    "SeriesSolution",
    "SeriesTruncationError",
    "Settings",
    "SingularityError",
    "Solution",
    "Tolerance",
    "UnknownIdentifierError",
    "apply_gamma_n",
    "beta",
    "build_graded_mesh",
    "convergence_orders",
    "equivalent_exact",
    "eval_series",
    "gamma",
    "gamma_ratio",
    "gen_caputo_derivative",
    "gen_integral",
    "get_settings",
    "lambda_table",
    "linf_error",
    "load_settings",
    "log_gamma",
    "mittag_leffler",
    "pull_back",
    "series_solve",
    "to_equivalent",
]
