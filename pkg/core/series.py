"""Series — power-series solutions for rational α = p/q at a = 0.

With w = t^{ρ/q} the solution is u(t) = Σ_i ū_i w^i and the right-hand side
is given by its expansion f(t, u) = Σ_{j,k} f_jk w^j (u − a_0)^k.  The
coefficients follow from

    ū_{qk} = a_k / (k! ρ^k)                       for k < n,
    ū_i    = ρ^{−α} Γ((i−p)/q + 1) / Γ(i/q + 1)
             · Σ_{ℓ=0}^{i−p} Σ_k f_{i−p−ℓ, k} [P^k]_ℓ      for i >= p,

where P = Σ_{i>=1} ū_i w^i and [P^k]_ℓ is the w^ℓ coefficient of its k-th
power.  All other ū_i with i < p vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
from loguru import logger

from core.errors import DomainError, LengthMismatchError, SeriesTruncationError
from core.problem import GeneralizedIVP, check_hypothesis, order_count
from core.special import gamma_ratio

FTable = Sequence[Sequence[float]] | Mapping[tuple[int, int], float] | np.ndarray


def _table_from(f_jk: FTable) -> np.ndarray:
    if isinstance(f_jk, Mapping):
        if not f_jk:
            return np.zeros((1, 1))
        rows = max(j for j, _ in f_jk) + 1
        cols = max(k for _, k in f_jk) + 1
        table = np.zeros((rows, cols))
        for (j, k), value in f_jk.items():
            if j < 0 or k < 0:
                raise DomainError(f"f_jk index ({j}, {k}) must be non-negative")
            table[j, k] = float(value)
        return table
    rows = [list(map(float, row)) for row in f_jk]
    if not rows:
        return np.zeros((0, 1))
    width = max(len(row) for row in rows)
    return np.array([row + [0.0] * (width - len(row)) for row in rows])


@dataclass(frozen=True)
class SeriesProblem:
    """Rational-order problem with an analytic right-hand side.

    A mapping ``{(j, k): value}`` for *f_jk* means every other coefficient is
    zero; a nested list is dense and must reach row ``M − p``.
    """

    p: int
    q: int
    rho: float
    f_jk: FTable
    init: tuple[float, ...]
    M: int
    k_max: int | None = None
    sparse: bool = field(default=False, repr=False)

    def __post_init__(self) -> None:
        sparse = isinstance(self.f_jk, Mapping)
        object.__setattr__(self, "sparse", self.sparse or sparse)
        table = _table_from(self.f_jk)
        if table.ndim != 2:
            raise DomainError(f"f_jk must be a 2-D table, got shape {table.shape}")
        table.flags.writeable = False
        object.__setattr__(self, "f_jk", table)
        object.__setattr__(self, "init", tuple(float(v) for v in self.init))

        if self.p < 1 or self.q < 2:
            raise DomainError(f"alpha = p/q needs p >= 1 and q >= 2, got p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"p={self.p} and q={self.q} are not coprime")
        if self.M < 0:
            raise DomainError(f"truncation order M must be >= 0, got {self.M}")
        if len(self.init) != self.n:
            raise LengthMismatchError(f"alpha={self.alpha:g} needs {self.n} initial values")
        if not np.all(np.isfinite(table)):
            raise DomainError("f_jk contains non-finite entries")
        check_hypothesis(self.alpha, self.rho, 0.0)

    @classmethod
    def from_problem(
        cls, problem: GeneralizedIVP, p: int, q: int, M: int, k_max: int | None = None,
    ) -> "SeriesProblem":
        """Series form of *problem*, read from its ``rhs_series`` expansion.

        Raises:
            DomainError: no expansion, a != 0, or p/q differs from alpha.
        """
        if problem.rhs_series is None:
            raise DomainError(f"{problem.name} carries no series expansion of its right-hand side")
        if problem.a != 0:
            raise DomainError(f"the series solution is built at a = 0, got a={problem.a}")
        if not math.isclose(p / q, problem.alpha, rel_tol=1e-12):
            raise DomainError(f"p/q = {p}/{q} does not match alpha = {problem.alpha}")
        return cls(p=p, q=q, rho=problem.rho, f_jk=problem.rhs_series, init=problem.init, M=M, k_max=k_max)

    @property
    def alpha(self) -> float:
        return self.p / self.q

    @property
    def n(self) -> int:
        return order_count(self.alpha)


@dataclass(frozen=True)
class SeriesSolution:
    coeffs: np.ndarray
    rho: float
    q: int

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1


def series_solve(sp: SeriesProblem) -> SeriesSolution:
    """Coefficients ū_0..ū_M of the series solution.

    Raises:
        SeriesTruncationError: a dense f_jk table stops before row M − p.
    """
    p, q, M, rho = sp.p, sp.q, sp.M, sp.rho
    table = sp.f_jk
    needed_rows = M - p + 1
    if needed_rows > table.shape[0] and not sp.sparse:
        raise SeriesTruncationError(
            f"f_jk has {table.shape[0]} rows; M={M} needs j up to {M - p}"
        )
    k_max = table.shape[1] - 1 if sp.k_max is None else min(sp.k_max, table.shape[1] - 1)

    coeffs = np.zeros(M + 1)
    for k, a_k in enumerate(sp.init):
        if q * k <= M:
            coeffs[q * k] = a_k / (math.factorial(k) * rho**k)

    # powers[k, l] = [P^k]_l; column l is filled once ū_l is final.
    powers = np.zeros((k_max + 1, max(needed_rows, 1)))
    powers[0, 0] = 1.0
    scale = rho ** (-sp.alpha)

    for i in range(p, M + 1):
        m = i - p
        if m >= 1 and k_max >= 1:
            powers[1, m] = coeffs[m]
            for k in range(2, k_max + 1):
                powers[k, m] = float(np.dot(coeffs[1:m], powers[k - 1, m - 1:0:-1]))
        acc = 0.0
        for ell in range(m + 1):
            j = m - ell
            if j >= table.shape[0]:
                continue
            acc += float(np.dot(table[j, : k_max + 1], powers[:, ell]))
        coeffs[i] = scale * gamma_ratio(m / q + 1.0, i / q + 1.0) * acc

    logger.debug(f"Series solved: p={p}, q={q}, M={M}, k_max={k_max}")
    coeffs.flags.writeable = False
    return SeriesSolution(coeffs=coeffs, rho=float(rho), q=q)


def eval_series(s: SeriesSolution, t: Any) -> Any:
    """Σ ū_i w^i with w = t^{ρ/q}, by Horner's rule."""
    w = np.power(np.asarray(t, dtype=float), s.rho / s.q)
    value = np.polynomial.polynomial.polyval(w, s.coeffs)
    return float(value) if np.ndim(value) == 0 else value


def derivative_stack(s: SeriesSolution, n: int):
    """s ↦ [u'(s), ..., u^(n)(s)] for the truncated series (s > 0)."""
    exponents = s.rho * np.arange(len(s.coeffs)) / s.q

    def stack(t: Any) -> list[Any]:
        t_arr = np.asarray(t, dtype=float)
        out = []
        for order in range(1, n + 1):
            falling = np.ones_like(exponents)
            for r in range(order):
                falling = falling * (exponents - r)
            total = np.zeros_like(t_arr)
            for c, e, f in zip(s.coeffs, exponents, falling):
                if c == 0.0 or f == 0.0:
                    continue
                total = total + c * f * t_arr ** (e - order)
            out.append(total)
        return out

    return stack
