"""Operators — generalized fractional integral and Caputo derivative at a point.

Both are evaluated by quadrature and serve as validation oracles.  After the
substitution ξ = s^ρ the integral becomes

    I^{α,ρ}_a f(t) = ρ^{−α}/Γ(α) ∫_{a^ρ}^{t^ρ} (t^ρ − ξ)^{α−1} g(ξ) dξ,
    g(ξ) = f(ξ^{1/ρ}),

and the kernel is integrated exactly against the piecewise-linear interpolant
of g (product trapezoidal rule) on a mesh graded towards a^ρ.  Panel counts
are doubled and Richardson-extrapolated until two successive extrapolants
agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from loguru import logger

from core.errors import ConvergenceError, DomainError
from core.problem import ScalarFunction, evaluate_on, order_count
from core.special import Tolerance, gamma
from core.transform import apply_gamma_n, lambda_table

DerivativeStack = Callable[[Any], Sequence[Any]]
"""s -> [u'(s), ..., u^(n)(s)]; should accept numpy arrays."""

# Panels with h/A below this switch to the series form of the first moment.
_SERIES_SWITCH = 0.1
_SERIES_TERMS = 24


@dataclass(frozen=True)
class QuadratureSpec:
    panels: int = 64
    refinement_limit: int = 12
    tol: Tolerance = field(default_factory=lambda: Tolerance(rel=1e-9, abs=1e-14, max_terms=1))
    grading: float = 2.0

    def __post_init__(self) -> None:
        if self.panels < 1:
            raise DomainError(f"QuadratureSpec.panels must be >= 1, got {self.panels}")
        if self.refinement_limit < 1:
            raise DomainError(
                f"QuadratureSpec.refinement_limit must be >= 1, got {self.refinement_limit}"
            )
        if not self.grading >= 1.0:
            raise DomainError(f"QuadratureSpec.grading must be >= 1, got {self.grading}")

    @classmethod
    def from_config(cls, section: dict[str, Any] | None) -> "QuadratureSpec":
        section = section or {}
        default = cls()
        return cls(
            panels=int(section.get("panels", default.panels)),
            refinement_limit=int(section.get("refinement_limit", default.refinement_limit)),
            tol=Tolerance.from_config(section.get("tolerance")) if "tolerance" in section else default.tol,
            grading=float(section.get("grading", default.grading)),
        )


DEFAULT_QUADRATURE = QuadratureSpec()


# ── Product trapezoid ────────────────────────────────────────────


def _moment_series_coeffs(alpha: float) -> np.ndarray:
    # d_k for k = 2.. with m1 = A^{α+1} Σ d_k e^k.
    coeffs = np.zeros(_SERIES_TERMS)
    p = 0.5
    for idx in range(_SERIES_TERMS):
        k = idx + 2
        coeffs[idx] = (-1) ** k * (k - 1) * p
        p *= (alpha - k + 1) / (k + 1)
    return coeffs


def product_trapezoid_weights(
    nodes: np.ndarray, upper: float, alpha: float,
) -> np.ndarray:
    """Weights w_j with ∫_{nodes[0]}^{upper} (upper − ξ)^{α−1} g dξ ≈ Σ w_j g(nodes[j]).

    ``nodes[-1]`` must equal *upper*.
    """
    A = upper - nodes[:-1]
    B = upper - nodes[1:]
    B[-1] = 0.0
    h = A - B
    e = h / A

    m0 = (A**alpha - B**alpha) / alpha
    m1 = A * m0 - (A ** (alpha + 1) - B ** (alpha + 1)) / (alpha + 1)

    small = e < _SERIES_SWITCH
    if np.any(small):
        es, As = e[small], A[small]
        m0[small] = -np.expm1(alpha * np.log1p(-es)) * As**alpha / alpha
        coeffs = np.concatenate(([0.0, 0.0], _moment_series_coeffs(alpha)))
        m1[small] = As ** (alpha + 1) * np.polynomial.polynomial.polyval(es, coeffs)

    right = m1 / h
    left = m0 - right
    weights = np.zeros(len(nodes))
    weights[:-1] += left
    weights[1:] += right
    return weights


def _graded_nodes(lower: float, upper: float, panels: int, grading: float) -> np.ndarray:
    s = np.linspace(0.0, 1.0, panels + 1)
    nodes = lower + (upper - lower) * s**grading
    nodes[-1] = upper
    return nodes


def _sample(g: ScalarFunction, nodes: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = evaluate_on(g, nodes)
    if not np.isfinite(values[0]):
        logger.warning(
            f"Non-finite integrand at the left endpoint {nodes[0]:g}; using its right neighbour"
        )
        values[0] = values[1]
    if not np.all(np.isfinite(values)):
        bad = int(np.count_nonzero(~np.isfinite(values)))
        raise DomainError(f"integrand is not finite at {bad} interior quadrature nodes")
    return values


def _kernel_integral(
    g: ScalarFunction, alpha: float, lower: float, upper: float, q: QuadratureSpec,
) -> float:
    """Richardson-refined ∫_lower^upper (upper − ξ)^{α−1} g(ξ) dξ."""
    tol = q.tol
    previous_raw: float | None = None
    previous_extrap: float | None = None
    for level in range(q.refinement_limit + 1):
        panels = q.panels * 2**level
        nodes = _graded_nodes(lower, upper, panels, q.grading)
        raw = float(np.dot(product_trapezoid_weights(nodes, upper, alpha), _sample(g, nodes)))
        if previous_raw is None:
            previous_raw = raw
            continue
        if abs(raw - previous_raw) <= tol.rel * abs(raw) + tol.abs:
            return raw
        extrap = raw + (raw - previous_raw) / 3.0
        if previous_extrap is not None and abs(extrap - previous_extrap) <= tol.rel * abs(extrap) + tol.abs:
            logger.debug(f"Quadrature converged at {panels} panels (level {level})")
            return extrap
        previous_raw, previous_extrap = raw, extrap

    raise ConvergenceError(
        f"quadrature did not settle within {q.refinement_limit} refinements",
        iterations=q.refinement_limit,
        residual=abs(extrap - previous_extrap) if previous_extrap is not None else math.nan,
    )


# ── Public operators ─────────────────────────────────────────────


def gen_integral(
    f: ScalarFunction,
    alpha: float,
    rho: float,
    a: float,
    t: float,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """(ρ^{1−α}/Γ(α)) ∫_a^t s^{ρ−1} f(s) (t^ρ − s^ρ)^{α−1} ds.

    Raises:
        DomainError: bad orders or t <= a.
        ConvergenceError: refinement_limit reached before the refinements agree.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    if a < 0 or not t > a:
        raise DomainError(f"gen_integral needs 0 <= a < t, got a={a}, t={t}")

    lower, upper = a**rho, t**rho
    inv_rho = 1.0 / rho

    def g(xi: Any) -> Any:
        return f(np.power(xi, inv_rho))

    integral = _kernel_integral(g, alpha, lower, upper, q)
    return rho ** (-alpha) / gamma(alpha) * integral


def gen_caputo_derivative(
    derivs: DerivativeStack,
    alpha: float,
    rho: float,
    a: float,
    t: float,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """D^{α,ρ}_a u(t) = I^{n−α,ρ}_a (γ^n u)(t) for non-integer α."""
    if not alpha > 0 or alpha == math.floor(alpha):
        raise DomainError(
            f"gen_caputo_derivative needs a positive non-integer alpha, got {alpha}; "
            "integer orders reduce to apply_gamma_n"
        )
    n = order_count(alpha)
    table = lambda_table(n, rho)

    def integrand(s: Any) -> Any:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            stack = [np.asarray(d, dtype=float) for d in derivs(s)]
        return apply_gamma_n(stack, s, table)

    return gen_integral(integrand, n - alpha, rho, a, t, q)
