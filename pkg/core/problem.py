"""Problem — IVP definitions, graded meshes, solutions and error norms.

Every object here is immutable after construction.  Arrays handed out by
``GradedMesh`` and ``Solution`` are flagged read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from core.errors import DomainError, HypothesisError, LengthMismatchError

ScalarField = Callable[[Any, Any], Any]
"""f(t, u) -> value; must accept floats and, ideally, numpy arrays."""

ScalarFunction = Callable[[Any], Any]

# Slack used when comparing rho against 1/n at a = 0.
_H_SLACK = 1e-12


def order_count(alpha: float) -> int:
    """n = ⌊α⌋ + 1, the number of initial values."""
    return int(math.floor(alpha)) + 1


def check_hypothesis(alpha: float, rho: float, a: float) -> None:
    """Hypothesis on rho: any rho > 0 when a > 0, else 0 < rho <= 1/n."""
    if not rho > 0:
        raise HypothesisError(f"rho must be positive, got {rho}")
    if a == 0:
        n = order_count(alpha)
        if rho > 1.0 / n + _H_SLACK:
            raise HypothesisError(
                f"a = 0 requires 0 < rho <= 1/n = {1.0 / n:g} (alpha={alpha}, rho={rho})"
            )


def _readonly(values: Any) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


def evaluate_on(fn: ScalarFunction, points: np.ndarray) -> np.ndarray:
    """Call *fn* on the whole array, falling back to one call per point."""
    try:
        out = np.asarray(fn(points), dtype=float)
    except TypeError:
        out = None
    if out is None or out.shape != points.shape:
        out = np.array([float(fn(float(p))) for p in points])
    return out


# ── Problems ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class GeneralizedIVP:
    """``D^{α,ρ}_a u = f(t, u)`` on [a, T] with γ^k u(a) = init[k]."""

    alpha: float
    rho: float
    a: float
    T: float
    init: tuple[float, ...]
    rhs: ScalarField
    rhs_series: tuple[tuple[float, ...], ...] | None = None
    exact: ScalarFunction | None = None
    depends_on_u: bool = True
    name: str = "problem"

    def __post_init__(self) -> None:
        object.__setattr__(self, "init", tuple(float(v) for v in self.init))
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.a < 0:
            raise DomainError(f"a must be >= 0, got {self.a}")
        if not self.T > self.a:
            raise DomainError(f"T must exceed a, got a={self.a}, T={self.T}")
        if len(self.init) != self.n:
            raise LengthMismatchError(
                f"alpha={self.alpha} needs {self.n} initial values, got {len(self.init)}"
            )
        check_hypothesis(self.alpha, self.rho, self.a)

    @property
    def n(self) -> int:
        return order_count(self.alpha)


@dataclass(frozen=True)
class CaputoIVP:
    """Standard Caputo problem on [a_bar, T_bar] produced by the transform."""

    alpha: float
    a_bar: float
    T_bar: float
    init_bar: tuple[float, ...]
    rhs_bar: ScalarField
    depends_on_u: bool = True
    exact_bar: ScalarFunction | None = None
    rho: float = 1.0
    name: str = "problem"

    def __post_init__(self) -> None:
        object.__setattr__(self, "init_bar", tuple(float(v) for v in self.init_bar))
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.a_bar < self.T_bar:
            raise DomainError(f"a_bar must be below T_bar, got {self.a_bar} >= {self.T_bar}")
        if len(self.init_bar) != self.n:
            raise LengthMismatchError(
                f"alpha={self.alpha} needs {self.n} initial values, got {len(self.init_bar)}"
            )

    @property
    def n(self) -> int:
        return order_count(self.alpha)

    @property
    def a(self) -> float:
        return self.a_bar ** (1.0 / self.rho)

    @property
    def T(self) -> float:
        return self.T_bar ** (1.0 / self.rho)


# ── Mesh & solution ──────────────────────────────────────────────


@dataclass(frozen=True)
class GradedMesh:
    """Uniform nodes in t̄ = t^ρ paired with their ρ-th-root images."""

    rho: float
    nodes_bar: np.ndarray
    nodes: np.ndarray

    @property
    def N(self) -> int:
        return len(self.nodes_bar) - 1

    @property
    def step(self) -> float:
        return float(self.nodes_bar[1] - self.nodes_bar[0])


def uniform_nodes(a_bar: float, T_bar: float, N: int) -> np.ndarray:
    """ā + iΔt for i = 0..N with the last node pinned to T_bar."""
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    N = int(N)
    nodes = a_bar + np.arange(N + 1, dtype=float) * ((T_bar - a_bar) / N)
    nodes[-1] = T_bar
    return nodes


def transformed_mesh(a_bar: float, T_bar: float, rho: float, N: int) -> GradedMesh:
    """Mesh built straight from transformed endpoints."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    if a_bar < 0 or not T_bar > a_bar:
        raise DomainError(f"mesh needs 0 <= a_bar < T_bar, got {a_bar}, {T_bar}")
    nodes_bar = uniform_nodes(a_bar, T_bar, N)
    nodes = nodes_bar ** (1.0 / rho)
    return GradedMesh(rho=float(rho), nodes_bar=_readonly(nodes_bar), nodes=_readonly(nodes))


def build_graded_mesh(a: float, T: float, rho: float, N: int) -> GradedMesh:
    """Nodes t̄_i = a^ρ + i(T^ρ − a^ρ)/N and t_i = t̄_i^{1/ρ}.

    Endpoints are pinned to a^ρ, T^ρ (and a, T) so that roundoff in the
    ρ-th root never moves them.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    if not (math.isfinite(a) and math.isfinite(T) and math.isfinite(rho)):
        raise DomainError(f"mesh arguments must be finite, got a={a}, T={T}, rho={rho}")
    if a < 0 or not T > a:
        raise DomainError(f"mesh needs 0 <= a < T, got a={a}, T={T}")
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")

    nodes_bar = uniform_nodes(a**rho, T**rho, N)
    nodes = nodes_bar ** (1.0 / rho)
    nodes[0], nodes[-1] = a, T
    return GradedMesh(rho=float(rho), nodes_bar=_readonly(nodes_bar), nodes=_readonly(nodes))


@dataclass(frozen=True)
class Solution:
    """ū on ``mesh.nodes_bar``; equivalently u on ``mesh.nodes``."""

    mesh: GradedMesh
    values: np.ndarray
    scheme_id: str
    diagnostics: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        values = _readonly(self.values)
        if values.shape != self.mesh.nodes_bar.shape:
            raise LengthMismatchError(
                f"{len(values)} values for a mesh of {len(self.mesh.nodes_bar)} nodes"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "diagnostics", tuple(int(d) for d in self.diagnostics))

    def to_rows(self) -> list[tuple[float, float, float]]:
        """(t, t_bar, u) triples, one per node."""
        return [
            (float(t), float(tb), float(u))
            for t, tb, u in zip(self.mesh.nodes, self.mesh.nodes_bar, self.values)
        ]


def linf_error(sol: Solution, exact: ScalarFunction, transformed: bool = False) -> float:
    """max_{1<=n<=N} |exact(t_n) − values[n]|; node 0 is excluded.

    With ``transformed=True`` *exact* is ū and is sampled on ``nodes_bar``.
    """
    points = np.asarray(sol.mesh.nodes_bar if transformed else sol.mesh.nodes)[1:]
    reference = evaluate_on(exact, points)
    return float(np.max(np.abs(reference - sol.values[1:])))


# ── Convergence reports ──────────────────────────────────────────


def convergence_orders(Ns: Sequence[int], errors: Sequence[float]) -> list[float | None]:
    """Observed orders log(e_N/e_N')/log(N'/N) between consecutive rows."""
    if len(Ns) != len(errors):
        raise LengthMismatchError(f"{len(Ns)} mesh sizes but {len(errors)} errors")
    orders: list[float | None] = [None] if Ns else []
    for i in range(1, len(Ns)):
        e_prev, e_cur = errors[i - 1], errors[i]
        if e_prev > 0 and e_cur > 0:
            orders.append(math.log(e_prev / e_cur) / math.log(Ns[i] / Ns[i - 1]))
        else:
            orders.append(None)
    return orders


@dataclass(frozen=True)
class ReportRow:
    N: int
    error: float
    order: float | None


@dataclass(frozen=True)
class ConvergenceReport:
    """Errors and observed orders for one (problem, scheme, α, ρ) cell."""

    rows: tuple[ReportRow, ...]
    problem: str = ""
    scheme_id: str = ""
    alpha: float = math.nan
    rho: float = math.nan
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        Ns = [row.N for row in self.rows]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise DomainError(f"report N values must be strictly increasing, got {Ns}")
        if self.rows and self.rows[0].order is not None:
            raise DomainError("the first report row cannot carry an order")
        if any(row.error < 0 for row in self.rows):
            raise DomainError("report errors must be non-negative")

    @classmethod
    def from_errors(
        cls, Ns: Sequence[int], errors: Sequence[float], **labels: Any,
    ) -> "ConvergenceReport":
        orders = convergence_orders(Ns, errors)
        rows = tuple(ReportRow(int(n), float(e), o) for n, e, o in zip(Ns, errors, orders))
        return cls(rows=rows, **labels)

    @property
    def Ns(self) -> list[int]:
        return [row.N for row in self.rows]

    @property
    def errors(self) -> list[float]:
        return [row.error for row in self.rows]

    @property
    def orders(self) -> list[float | None]:
        return [row.order for row in self.rows]
