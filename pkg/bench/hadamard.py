"""Hadamard limit — error against log t as ρ shrinks toward zero."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from bench.problems import get_example
from core.errors import DomainError
from core.problem import Solution, linf_error
from schemes.registry import SchemeId, solve

_EXAMPLE = "example5"


def _check_rhos(rhos: list[float]) -> list[float]:
    rhos = [float(r) for r in rhos]
    if not rhos:
        raise DomainError("run_hadamard_limit needs at least one rho")
    if any(r <= 0 for r in rhos):
        raise DomainError(f"rho values must be positive, got {rhos}")
    if any(b >= a for a, b in zip(rhos, rhos[1:])):
        raise DomainError(f"rho values must be strictly decreasing, got {rhos}")
    return rhos


def run_hadamard_limit(
    rhos: list[float],
    alpha: float = 0.5,
    T: float = 100.0,
    N: int = 256,
    scheme: SchemeId | str = SchemeId.L1,
) -> list[tuple[float, float]]:
    """(ρ, sup_n |u_n − log t_n|) for each ρ, on that ρ's graded mesh."""
    example = get_example(_EXAMPLE)
    out = []
    for rho in _check_rhos(rhos):
        sol = solve(example.equivalent(alpha, rho, T=T), N, scheme)
        err = linf_error(sol, np.log)
        logger.debug(f"Hadamard limit: rho={rho:g} error={err:.4e}")
        out.append((rho, err))
    return out


@dataclass(frozen=True)
class HadamardProfile:
    solution: Solution
    reference: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.solution.values - self.reference)))


def hadamard_profile(
    alpha: float = 0.5, rho: float = 1e-7, T: float = 100.0, N: int = 64,
    scheme: SchemeId | str = SchemeId.L1,
) -> HadamardProfile:
    """Numerical solution at one small ρ next to log t on its nodes."""
    example = get_example(_EXAMPLE)
    sol = solve(example.equivalent(alpha, rho, T=T), N, scheme)
    return HadamardProfile(solution=sol, reference=np.log(sol.mesh.nodes))
