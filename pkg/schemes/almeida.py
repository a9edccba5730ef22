"""Almeida's expansion method, applied directly to the generalized problem.

The generalized integral is expanded as

    I^{α,ρ}_a f(t) ≈ A_N x^α f(t) − Σ_{k=1}^{N} B_{N,k} x^{α−k} V_k(t),
    x = t^ρ − a^ρ,  V_k(t) = ∫_a^t s^{ρ−1} (s^ρ − a^ρ)^{k−1} f(s) ds,

and u(t) = u_a + I^{α,ρ}_a f(t, u) is marched over the graded nodes.  With
ξ = s^ρ and z = (ξ − a^ρ)/x, x^{α−k} V_k = (x^α/ρ) ∫_0^1 z^{k−1} g dz, which
is integrated with product-trapezoid weights on z_j = j/m, so the negative
powers of x never appear on their own.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from loguru import logger

from core.errors import DomainError
from core.problem import GeneralizedIVP, GradedMesh, Solution
from core.special import gamma
from core.transform import pull_back
from schemes.nonlinear import NonlinearSolveConfig, SolveMethod, fixed_point

DEFAULT_N_TRUNC = 10
ALMEIDA_NONLINEAR = NonlinearSolveConfig(method=SolveMethod.AITKEN)


class AlmeidaCoefficients(str, Enum):
    CONSISTENT = "consistent"
    PRINTED = "printed"


def almeida_coefficients(
    alpha: float, rho: float, n_trunc: int, variant: AlmeidaCoefficients | str = "consistent",
) -> tuple[float, np.ndarray]:
    """(A_N, [B_{N,1}, ..., B_{N,N}]).

    ``consistent`` expands (1 − z)^α and reproduces I^{α,ρ} for any α;
    ``printed`` is the same formula with α replaced by 1 − α inside the
    coefficients.  They coincide at α = 1/2.
    """
    variant = AlmeidaCoefficients(variant)
    k = np.arange(n_trunc + 1)
    if variant is AlmeidaCoefficients.CONSISTENT:
        e, lead, tail = -alpha, rho ** (-alpha), rho ** (1.0 - alpha)
        norm = gamma(1.0 + alpha) * gamma(-alpha)
    else:
        e, lead, tail = alpha - 1.0, rho ** (alpha - 1.0), rho**alpha
        norm = gamma(2.0 - alpha) * gamma(alpha - 1.0)
    g = np.array([gamma(kk + e) for kk in k])
    factorials = np.array([float(math.factorial(kk)) for kk in k])
    A = lead / norm * math.fsum(g / factorials)
    B = tail * g[1:] / (norm * factorials[:-1])
    return float(A), B


def _memory_weights(m: int, n_trunc: int) -> np.ndarray:
    """W[k−1, j] with ∫_0^1 z^{k−1} g dz ≈ Σ_j W[k−1, j] g(z_j), z_j = j/m."""
    z = np.arange(m + 1, dtype=float) / m
    k = np.arange(1, n_trunc + 1, dtype=float)[:, None]
    zk = z[None, :] ** k
    zk1 = zk * z[None, :]
    M0 = (zk[:, 1:] - zk[:, :-1]) / k
    M1 = (zk1[:, 1:] - zk1[:, :-1]) / (k + 1.0)
    left = (z[None, 1:] * M0 - M1) * m
    right = (M1 - z[None, :-1] * M0) * m
    W = np.zeros((n_trunc, m + 1))
    W[:, :-1] += left
    W[:, 1:] += right
    return W


def solve_almeida(
    p: GeneralizedIVP,
    N_trunc: int,
    mesh: GradedMesh,
    cfg: NonlinearSolveConfig = ALMEIDA_NONLINEAR,
    coefficients: AlmeidaCoefficients | str = AlmeidaCoefficients.CONSISTENT,
) -> Solution:
    """Time-march u_N on the original-coordinate graded nodes."""
    if not 0 < p.alpha < 1:
        raise DomainError(f"Almeida's method needs 0 < alpha < 1, got {p.alpha}")
    if N_trunc < 1:
        raise DomainError(f"N_trunc must be >= 1, got {N_trunc}")

    alpha, rho = p.alpha, p.rho
    A, B = almeida_coefficients(alpha, rho, N_trunc, coefficients)
    B_over_rho = B / rho
    t, x_all = mesh.nodes, mesh.nodes_bar - mesh.nodes_bar[0]
    u_a = p.init[0]
    f = p.rhs

    u = np.zeros(len(t))
    g = np.zeros(len(t))
    u[0] = u_a
    g[0] = f(t[0], u_a)
    iterations = [0]
    for m in range(1, len(t)):
        W = _memory_weights(m, N_trunc)
        x_alpha = x_all[m] ** alpha
        drift = x_alpha * float(np.dot(B_over_rho, W[:, :m] @ g[:m]))
        gain = x_alpha * (A - float(np.dot(B_over_rho, W[:, m])))
        t_m = t[m]
        if p.depends_on_u:
            value, count = fixed_point(lambda v: u_a + gain * f(t_m, v) - drift, u[m - 1], cfg)
        else:
            value, count = u_a + gain * f(t_m, u[m - 1]) - drift, 0
        u[m] = value
        g[m] = f(t_m, value)
        iterations.append(count)

    logger.debug(
        f"Almeida finished: alpha={alpha}, rho={rho}, N_trunc={N_trunc}, "
        f"nodes={len(t)}, max iterations {max(iterations)}"
    )
    return pull_back(u, mesh, scheme_id="almeida", diagnostics=iterations)
