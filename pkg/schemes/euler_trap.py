"""Euler-trapezoid scheme for the Volterra form of the Caputo problem.

    ū_{n+1} = ā_0 + Δt^α/(2Γ(α)) Σ_{j=0}^{n−1} [d_{j+1} f_{j+1} + d_j f_j] + w_tail f_n,
    d_j = (n − j + 1)^{α−1},

with the memory integral on [t_0, t_n] done by the trapezoidal rule and the
last panel by an explicit Euler step.  ``w_tail`` is Δt^α/α by default; with
``consistent_tail`` it is Δt^α/Γ(α+1), the exact kernel integral over the
last panel.
"""

from __future__ import annotations

import numpy as np
from loguru import logger

from core.errors import DomainError
from core.problem import CaputoIVP, uniform_nodes
from core.special import gamma


def march_euler_trap(
    p: CaputoIVP, N: int, consistent_tail: bool = False,
) -> tuple[np.ndarray, list[int]]:
    if not 0 < p.alpha < 1:
        raise DomainError(f"Euler-trapezoid needs 0 < alpha < 1, got {p.alpha}")
    alpha = p.alpha
    t = uniform_nodes(p.a_bar, p.T_bar, N)
    dt = (p.T_bar - p.a_bar) / N
    memory_scale = dt**alpha / (2.0 * gamma(alpha))
    tail = dt**alpha / (gamma(alpha + 1.0) if consistent_tail else alpha)
    f = p.rhs_bar
    a0 = p.init_bar[0]

    u = np.zeros(N + 1)
    F = np.zeros(N + 1)
    u[0] = a0
    F[0] = f(t[0], u[0])
    for n in range(N):
        if n > 0:
            k = np.arange(n, 0, -1, dtype=float)  # n − j for j = 0..n−1
            memory = np.dot(k ** (alpha - 1.0), F[1 : n + 1]) + np.dot((k + 1.0) ** (alpha - 1.0), F[:n])
        else:
            memory = 0.0
        u[n + 1] = a0 + memory_scale * memory + tail * F[n]
        F[n + 1] = f(t[n + 1], u[n + 1])

    logger.debug(f"Euler-trapezoid finished: alpha={alpha}, N={N}, consistent_tail={consistent_tail}")
    return u, [0] * (N + 1)


def solve_euler_trap(p: CaputoIVP, N: int, consistent_tail: bool = False) -> np.ndarray:
    """Explicit; no nonlinear solve is needed."""
    return march_euler_trap(p, N, consistent_tail)[0]
