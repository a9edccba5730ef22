"""L1 scheme — first-order-difference convolution for ^C D^α, 0 < α < 1.

At t_n = ā + nΔt the derivative is replaced by

    1/(Γ(2−α) Δt^α) Σ_{j=0}^{n−1} (ū_{j+1} − ū_j) b_{n−j},

which is exact for linear ū.  Since b_1 = 1 the new value is

    ū_n = ū_{n−1} − Σ_{j<n−1} (ū_{j+1} − ū_j) b_{n−j} + Γ(2−α) Δt^α f̄(t_n, ū_n).
"""

from __future__ import annotations

import numpy as np
from loguru import logger

from core.errors import DomainError
from core.problem import CaputoIVP, uniform_nodes
from core.special import gamma
from schemes.nonlinear import DEFAULT_NONLINEAR, NonlinearSolveConfig, fixed_point
from schemes.weights import l1_weights


def march_l1(
    p: CaputoIVP, N: int, cfg: NonlinearSolveConfig = DEFAULT_NONLINEAR,
) -> tuple[np.ndarray, list[int]]:
    """Values ū_0..ū_N and fixed-point iteration counts per step."""
    if not 0 < p.alpha < 1:
        raise DomainError(f"L1 needs 0 < alpha < 1, got {p.alpha}")
    t = uniform_nodes(p.a_bar, p.T_bar, N)
    dt = (p.T_bar - p.a_bar) / N
    b = l1_weights(p.alpha, N).b
    scale = gamma(2.0 - p.alpha) * dt**p.alpha
    f = p.rhs_bar

    u = np.zeros(N + 1)
    u[0] = p.init_bar[0]
    iterations = [0]
    for n in range(1, N + 1):
        history = float(np.dot(np.diff(u[:n]), b[n:1:-1])) if n > 1 else 0.0
        base = u[n - 1] - history
        if p.depends_on_u:
            t_n = t[n]
            value, count = fixed_point(lambda x: base + scale * f(t_n, x), u[n - 1], cfg)
        else:
            value, count = base + scale * f(t[n], u[n - 1]), 0
        u[n] = value
        iterations.append(count)

    logger.debug(f"L1 finished: alpha={p.alpha}, N={N}, max iterations {max(iterations)}")
    return u, iterations


def solve_l1(p: CaputoIVP, N: int, cfg: NonlinearSolveConfig = DEFAULT_NONLINEAR) -> np.ndarray:
    """ū on the uniform transformed mesh of N steps."""
    return march_l1(p, N, cfg)[0]
