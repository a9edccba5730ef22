"""Scheme layer for gencaputo — time-stepping solvers on graded meshes."""

from .almeida import AlmeidaCoefficients, almeida_coefficients, solve_almeida
from .euler_trap import solve_euler_trap
from .l1 import solve_l1
from .l2_1sigma import solve_l2_1sigma
from .nonlinear import NonlinearSolveConfig, SolveMethod, fixed_point
from .registry import SchemeId, parse_scheme, solve
from .weights import L1Weights, L21SigmaWeights, l1_weights, l2_1sigma_weights

__all__ = [
    "AlmeidaCoefficients",
    "L1Weights",
    "L21SigmaWeights",
    "NonlinearSolveConfig",
    "SchemeId",
    "SolveMethod",
    "almeida_coefficients",
    "fixed_point",
    "l1_weights",
    "l2_1sigma_weights",
    "parse_scheme",
    "solve",
    "solve_almeida",
    "solve_euler_trap",
    "solve_l1",
    "solve_l2_1sigma",
]
