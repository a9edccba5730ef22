"""Transform — map a generalized Caputo problem to a standard Caputo one.

u solves the generalized problem on [a, T] iff ū(t) = u(t^{1/ρ}) solves the
Caputo problem on [a^ρ, T^ρ] with ā_k = ρ^{−k} a_k and
f̄(t, x) = ρ^{−α} f(t^{1/ρ}, x).  Also home of the γ = t^{1−ρ} d/dt
operator expansion through the λ_{i,j} recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from core.errors import DomainError, LengthMismatchError, SingularityError
from core.problem import (
    CaputoIVP,
    GeneralizedIVP,
    GradedMesh,
    ScalarField,
    ScalarFunction,
    Solution,
    check_hypothesis,
)


def _scaled_rhs(rhs: ScalarField, alpha: float, rho: float) -> ScalarField:
    scale = rho ** (-alpha)
    inv_rho = 1.0 / rho

    def rhs_bar(t: Any, x: Any) -> Any:
        return scale * rhs(np.power(t, inv_rho), x)

    return rhs_bar


def equivalent_exact(exact_u: ScalarFunction, rho: float) -> ScalarFunction:
    """ū(t) = u(t^{1/ρ})."""
    if rho == 1.0:
        return exact_u
    inv_rho = 1.0 / rho

    def exact_bar(t: Any) -> Any:
        return exact_u(np.power(t, inv_rho))

    return exact_bar


def to_equivalent(p: GeneralizedIVP) -> CaputoIVP:
    """Build the Caputo problem equivalent to *p*.

    ρ = 1 returns the same right-hand side object (identity transform).
    """
    check_hypothesis(p.alpha, p.rho, p.a)
    rho = p.rho
    if rho == 1.0:
        rhs_bar = p.rhs
    else:
        rhs_bar = _scaled_rhs(p.rhs, p.alpha, rho)
    return CaputoIVP(
        alpha=p.alpha,
        a_bar=p.a**rho,
        T_bar=p.T**rho,
        init_bar=tuple(rho ** (-k) * a_k for k, a_k in enumerate(p.init)),
        rhs_bar=rhs_bar,
        depends_on_u=p.depends_on_u,
        exact_bar=equivalent_exact(p.exact, rho) if p.exact is not None else None,
        rho=rho,
        name=p.name,
    )


def pull_back(
    values_bar: Sequence[float] | np.ndarray,
    mesh: GradedMesh,
    scheme_id: str = "",
    diagnostics: Sequence[int] = (),
) -> Solution:
    """Pair ū(t̄_i) with the original node t_i; no interpolation."""
    values = np.asarray(values_bar, dtype=float)
    if values.shape != mesh.nodes_bar.shape:
        raise LengthMismatchError(
            f"{values.size} values for a mesh of {mesh.nodes_bar.size} nodes"
        )
    return Solution(mesh=mesh, values=values, scheme_id=scheme_id, diagnostics=tuple(diagnostics))


# ── γ-operator ───────────────────────────────────────────────────


@dataclass(frozen=True)
class LambdaTable:
    """λ_{i,j} for 1 <= i <= j <= n, stored in an (n+1)×(n+1) array."""

    n: int
    rho: float
    entries: np.ndarray

    def __getitem__(self, index: tuple[int, int]) -> float:
        i, j = index
        if not (1 <= i <= j <= self.n):
            return 0.0
        return float(self.entries[i, j])


def lambda_table(n: int, rho: float) -> LambdaTable:
    """λ_{j,j} = 1 and λ_{i,j} = λ_{i−1,j−1} + (i − (j−1)ρ) λ_{i,j−1}."""
    if n < 1:
        raise DomainError(f"lambda_table needs n >= 1, got {n}")
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    lam = np.zeros((n + 1, n + 1))
    for j in range(1, n + 1):
        lam[j, j] = 1.0
        for i in range(1, j):
            lam[i, j] = lam[i - 1, j - 1] + (i - (j - 1) * rho) * lam[i, j - 1]
    lam.flags.writeable = False
    return LambdaTable(n=n, rho=float(rho), entries=lam)


def apply_gamma_n(derivs: Sequence[Any], t: Any, table: LambdaTable) -> Any:
    """(γ^n u)(t) = Σ_{i=1}^n λ_{i,n} t^{i−nρ} u^{(i)}(t).

    *derivs* holds u', ..., u^(n); each entry may be a float or an array
    broadcasting against *t*.

    Raises:
        SingularityError: t = 0 while some exponent i − nρ is negative.
    """
    n = table.n
    if len(derivs) != n:
        raise LengthMismatchError(f"expected {n} derivatives, got {len(derivs)}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("apply_gamma_n needs t >= 0")
    at_origin = np.any(t_arr == 0)

    total: Any = 0.0
    for i in range(1, n + 1):
        coeff = table[i, n]
        if coeff == 0.0:
            continue
        exponent = i - n * table.rho
        if at_origin and exponent < 0:
            raise SingularityError(
                f"t^{exponent:g} is singular at t = 0 (n={n}, rho={table.rho})"
            )
        total = total + coeff * t_arr**exponent * np.asarray(derivs[i - 1], dtype=float)
    if np.ndim(total) == 0:
        return float(total)
    return total
