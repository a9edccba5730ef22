"""Nonlinear — scalar fixed-point solves for implicit time steps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable

from loguru import logger

from core.errors import ConvergenceError, DomainError


class SolveMethod(str, Enum):
    PICARD = "picard"
    AITKEN = "aitken"


@dataclass(frozen=True)
class NonlinearSolveConfig:
    """Stopping rule for implicit steps: |x_{k+1} − x_k| <= tol·(1 + |x_{k+1}|)."""

    tol: float = 1e-12
    max_iter: int = 100
    method: SolveMethod = SolveMethod.PICARD
    relaxation: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", SolveMethod(self.method))
        if not self.tol > 0:
            raise DomainError(f"NonlinearSolveConfig.tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise DomainError(f"NonlinearSolveConfig.max_iter must be >= 1, got {self.max_iter}")
        if not 0 < self.relaxation <= 1:
            raise DomainError(f"relaxation must lie in (0, 1], got {self.relaxation}")

    @classmethod
    def from_config(cls, section: dict[str, Any] | None, **overrides: Any) -> "NonlinearSolveConfig":
        section = {**(section or {}), **overrides}
        default = cls()
        return cls(
            tol=float(section.get("tol", default.tol)),
            max_iter=int(section.get("max_iter", default.max_iter)),
            method=SolveMethod(section.get("method", default.method)),
            relaxation=float(section.get("relaxation", default.relaxation)),
        )


DEFAULT_NONLINEAR = NonlinearSolveConfig()


def _close(x_new: float, x_old: float, tol: float) -> bool:
    return abs(x_new - x_old) <= tol * (1.0 + abs(x_new))


def fixed_point(
    g: Callable[[float], float], x0: float, cfg: NonlinearSolveConfig = DEFAULT_NONLINEAR,
) -> tuple[float, int]:
    """Solve x = g(x) from *x0*; returns (x, iterations).

    Raises:
        ConvergenceError: cfg.max_iter reached, or an iterate is not finite.
    """
    x = float(x0)
    omega = cfg.relaxation
    for iteration in range(1, cfg.max_iter + 1):
        if cfg.method is SolveMethod.AITKEN:
            x1 = g(x)
            x2 = g(x1)
            denom = x2 - 2.0 * x1 + x
            if denom == 0.0 or not math.isfinite(denom):
                x_new = x2
            else:
                x_new = x - (x1 - x) ** 2 / denom
            if _close(x1, x, cfg.tol):
                x_new = x1
        else:
            x_new = (1.0 - omega) * x + omega * g(x)

        if not math.isfinite(x_new):
            raise ConvergenceError(
                f"fixed-point iterate became non-finite after {iteration} iterations",
                iterations=iteration,
                residual=math.inf,
            )
        if _close(x_new, x, cfg.tol):
            return x_new, iteration
        x = x_new

    residual = abs(g(x) - x)
    logger.warning(f"Fixed point stalled: residual {residual:.3e} after {cfg.max_iter} iterations")
    raise ConvergenceError(
        f"fixed-point iteration did not converge in {cfg.max_iter} iterations "
        f"(residual {residual:.3e})",
        iterations=cfg.max_iter,
        residual=residual,
    )
