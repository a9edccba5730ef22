"""Scheme registry — pick a solver by id and return a pulled-back Solution."""

from __future__ import annotations

from enum import Enum
from typing import Any

from core.errors import ConfigError
from core.problem import CaputoIVP, GeneralizedIVP, Solution, build_graded_mesh, transformed_mesh
from core.transform import pull_back, to_equivalent
from schemes.almeida import ALMEIDA_NONLINEAR, DEFAULT_N_TRUNC, solve_almeida
from schemes.euler_trap import march_euler_trap
from schemes.l1 import march_l1
from schemes.l2_1sigma import march_l2_1sigma
from schemes.nonlinear import DEFAULT_NONLINEAR, NonlinearSolveConfig


class SchemeId(str, Enum):
    L1 = "l1"
    L2SIGMA = "l2sigma"
    EULER = "euler"
    ALMEIDA = "almeida"


def parse_scheme(scheme: SchemeId | str) -> SchemeId:
    try:
        return SchemeId(scheme)
    except ValueError:
        choices = ", ".join(s.value for s in SchemeId)
        raise ConfigError(f"unknown scheme '{scheme}' (choose from {choices})") from None


def solve(
    problem: GeneralizedIVP | CaputoIVP,
    N: int,
    scheme: SchemeId | str,
    cfg: NonlinearSolveConfig | None = None,
    **options: Any,
) -> Solution:
    """Run *scheme* with N steps.

    Generalized problems are transformed first (except for Almeida, which
    works on them directly).  Options: ``consistent_tail`` (euler),
    ``n_trunc`` and ``coefficients`` (almeida).
    """
    scheme = parse_scheme(scheme)

    if scheme is SchemeId.ALMEIDA:
        if not isinstance(problem, GeneralizedIVP):
            raise ConfigError("the almeida scheme needs the generalized (untransformed) problem")
        mesh = build_graded_mesh(problem.a, problem.T, problem.rho, N)
        return solve_almeida(
            problem,
            int(options.get("n_trunc", DEFAULT_N_TRUNC)),
            mesh,
            cfg or ALMEIDA_NONLINEAR,
            options.get("coefficients", "consistent"),
        )

    if isinstance(problem, GeneralizedIVP):
        caputo = to_equivalent(problem)
        mesh = build_graded_mesh(problem.a, problem.T, problem.rho, N)
    else:
        caputo = problem
        mesh = transformed_mesh(problem.a_bar, problem.T_bar, problem.rho, N)

    cfg = cfg or DEFAULT_NONLINEAR
    if scheme is SchemeId.L1:
        values, iterations = march_l1(caputo, N, cfg)
    elif scheme is SchemeId.L2SIGMA:
        values, iterations = march_l2_1sigma(caputo, N, cfg)
    else:
        values, iterations = march_euler_trap(caputo, N, bool(options.get("consistent_tail", False)))
    return pull_back(values, mesh, scheme_id=scheme.value, diagnostics=iterations)
