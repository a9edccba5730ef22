"""L2-1σ scheme — discretization at the shifted node t_{n+σ}, σ = 1 − α/2.

    1/(Γ(2−α) Δt^α) Σ_{j=0}^{n} (ū_{j+1} − ū_j) c^{(n)}_{n−j} = f̄(t_{n+σ}, σū_{n+1} + (1−σ)ū_n)
"""

from __future__ import annotations

import numpy as np
from loguru import logger

from core.errors import DomainError
from core.problem import CaputoIVP, uniform_nodes
from core.special import gamma
from schemes.nonlinear import DEFAULT_NONLINEAR, NonlinearSolveConfig, fixed_point
from schemes.weights import l2_1sigma_weights


def march_l2_1sigma(
    p: CaputoIVP, N: int, cfg: NonlinearSolveConfig = DEFAULT_NONLINEAR,
) -> tuple[np.ndarray, list[int]]:
    if not 0 < p.alpha < 1:
        raise DomainError(f"L2-1sigma needs 0 < alpha < 1, got {p.alpha}")
    t = uniform_nodes(p.a_bar, p.T_bar, N)
    dt = (p.T_bar - p.a_bar) / N
    weights = l2_1sigma_weights(p.alpha, N)
    sigma = weights.sigma
    scale = gamma(2.0 - p.alpha) * dt**p.alpha
    f = p.rhs_bar

    u = np.zeros(N + 1)
    u[0] = p.init_bar[0]
    iterations = [0]
    for n in range(N):
        c = weights.c(n)
        history = float(np.dot(np.diff(u[: n + 1]), c[n:0:-1])) if n > 0 else 0.0
        t_sigma = p.a_bar + (n + sigma) * dt
        u_n = u[n]
        c0 = c[0]
        if p.depends_on_u:
            value, count = fixed_point(
                lambda x: u_n + (scale * f(t_sigma, sigma * x + (1.0 - sigma) * u_n) - history) / c0,
                u_n,
                cfg,
            )
        else:
            value, count = u_n + (scale * f(t_sigma, u_n) - history) / c0, 0
        u[n + 1] = value
        iterations.append(count)

    logger.debug(f"L2-1sigma finished: alpha={p.alpha}, N={N}, last node {t[-1]:g}")
    return u, iterations


def solve_l2_1sigma(
    p: CaputoIVP, N: int, cfg: NonlinearSolveConfig = DEFAULT_NONLINEAR,
) -> np.ndarray:
    return march_l2_1sigma(p, N, cfg)[0]
