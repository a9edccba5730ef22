"""Problems — registry of the five benchmark examples.

Each example builds (a) the generalized problem and (b) its equivalent
Caputo problem in analytically simplified form, with the closed-form ū
attached when one exists.  Benchmarks run on (b), so problems whose
transformed form does not involve ρ give identical numbers for every ρ.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from core.errors import ConfigError
from core.problem import CaputoIVP, GeneralizedIVP
from core.special import gamma, mittag_leffler
from core.transform import to_equivalent


class ExampleProblem:
    """Base class; subclasses fill in ``defaults`` and the two builders."""

    name: str = ""
    description: str = ""
    defaults: dict[str, float] = {}
    has_closed_form: bool = True

    def params(self, overrides: dict[str, Any] | None = None) -> dict[str, float]:
        merged = dict(self.defaults)
        for key, value in (overrides or {}).items():
            if key not in merged:
                raise ConfigError(f"{self.name} has no parameter '{key}'")
            merged[key] = float(value)
        return merged

    def generalized(self, alpha: float, rho: float, **overrides: Any) -> GeneralizedIVP:
        raise NotImplementedError

    def equivalent(self, alpha: float, rho: float, **overrides: Any) -> CaputoIVP:
        return to_equivalent(self.generalized(alpha, rho, **overrides))


def _vectorize(fn):
    def wrapped(t: Any) -> Any:
        if np.ndim(t) == 0:
            return fn(float(t))
        return np.array([fn(float(v)) for v in np.ravel(t)]).reshape(np.shape(t))

    return wrapped


# ── Examples ─────────────────────────────────────────────────────


class PowerSourceExample(ExampleProblem):
    """D^{α,ρ}_0 u = t^ν, u(0) = 0; ū = ρ^{−α} Γ(1+ν/ρ)/Γ(1+ν/ρ+α) t^{ν/ρ+α}."""

    name = "example1"
    description = "power-law source t^nu at a = 0 (L1 table)"
    defaults = {"nu": 2.0, "a": 0.0, "T": 1.0, "u0": 0.0}

    def generalized(self, alpha: float, rho: float, **overrides: Any) -> GeneralizedIVP:
        p = self.params(overrides)
        nu = p["nu"]
        coeff = rho ** (-alpha) * gamma(1.0 + nu / rho) / gamma(1.0 + nu / rho + alpha)
        return GeneralizedIVP(
            alpha=alpha, rho=rho, a=p["a"], T=p["T"], init=(p["u0"],),
            rhs=lambda t, u: np.power(t, nu),
            exact=lambda t: p["u0"] + coeff * np.power(t, nu + rho * alpha),
            depends_on_u=False,
            name=self.name,
        )

    def equivalent(self, alpha: float, rho: float, **overrides: Any) -> CaputoIVP:
        p = self.params(overrides)
        nu = p["nu"]
        scale = rho ** (-alpha)
        power = nu / rho
        coeff = scale * gamma(1.0 + power) / gamma(1.0 + power + alpha)
        return CaputoIVP(
            alpha=alpha, a_bar=p["a"] ** rho, T_bar=p["T"] ** rho, init_bar=(p["u0"],),
            rhs_bar=lambda t, x: scale * np.power(t, power),
            depends_on_u=False,
            exact_bar=lambda t: p["u0"] + coeff * np.power(t, power + alpha),
            rho=rho,
            name=self.name,
        )


class PolynomialExample(ExampleProblem):
    """u = t^{ρm}: D^{α,ρ}_0 u = ρ^α Γ(1+m)/Γ(1+m−α) t^{ρ(m−α)}; ū = t^m."""

    name = "example2"
    description = "polynomial solution t^(rho m), rho-free after the transform (L2-1sigma table)"
    defaults = {"m": 3.0, "a": 0.0, "T": 1.0}

    def generalized(self, alpha: float, rho: float, **overrides: Any) -> GeneralizedIVP:
        p = self.params(overrides)
        m = p["m"]
        lam = rho**alpha * gamma(1.0 + m) / gamma(1.0 + m - alpha)
        return GeneralizedIVP(
            alpha=alpha, rho=rho, a=p["a"], T=p["T"], init=(p["a"] ** (rho * m),),
            rhs=lambda t, u: lam * np.power(t, rho * (m - alpha)),
            exact=lambda t: np.power(t, rho * m),
            depends_on_u=False,
            name=self.name,
        )

    def equivalent(self, alpha: float, rho: float, **overrides: Any) -> CaputoIVP:
        p = self.params(overrides)
        m = p["m"]
        lam = gamma(1.0 + m) / gamma(1.0 + m - alpha)
        a_bar = p["a"] ** rho
        return CaputoIVP(
            alpha=alpha, a_bar=a_bar, T_bar=p["T"] ** rho, init_bar=(a_bar**m,),
            rhs_bar=lambda t, x: lam * np.power(t, m - alpha),
            depends_on_u=False,
            exact_bar=lambda t: np.power(t, m),
            rho=rho,
            name=self.name,
        )


class LinearForcedExample(ExampleProblem):
    """D^{α,ρ}_a u = ρ^α (u + t^ρ − a^ρ), u(a) = a0.

    ū = a0 E_α((t−ā)^α) + (t−ā)^{1+α} E_{α,α+2}((t−ā)^α).
    """

    name = "example3"
    description = "linear problem with Mittag-Leffler solution (Euler-trapezoid table)"
    defaults = {"a": 0.5, "T": 1.0, "a0": -1.0}

    @staticmethod
    def _exact_bar(alpha: float, a_bar: float, a0: float):
        def ubar(t: float) -> float:
            s = t - a_bar
            if s <= 0:
                return a0
            z = s**alpha
            return a0 * mittag_leffler(alpha, 1.0, z) + s ** (1.0 + alpha) * mittag_leffler(alpha, alpha + 2.0, z)

        return _vectorize(ubar)

    def generalized(self, alpha: float, rho: float, **overrides: Any) -> GeneralizedIVP:
        p = self.params(overrides)
        a_bar = p["a"] ** rho
        scale = rho**alpha
        ubar = self._exact_bar(alpha, a_bar, p["a0"])
        return GeneralizedIVP(
            alpha=alpha, rho=rho, a=p["a"], T=p["T"], init=(p["a0"],),
            rhs=lambda t, u: scale * (u + np.power(t, rho) - a_bar),
            exact=lambda t: ubar(np.power(t, rho)),
            depends_on_u=True,
            name=self.name,
        )

    def equivalent(self, alpha: float, rho: float, **overrides: Any) -> CaputoIVP:
        p = self.params(overrides)
        a_bar = p["a"] ** rho
        return CaputoIVP(
            alpha=alpha, a_bar=a_bar, T_bar=p["T"] ** rho, init_bar=(p["a0"],),
            rhs_bar=lambda t, x: x + t - a_bar,
            depends_on_u=True,
            exact_bar=self._exact_bar(alpha, a_bar, p["a0"]),
            rho=rho,
            name=self.name,
        )


class SineExample(ExampleProblem):
    """D^{α,ρ}_a u = t sin u; no closed form (cross-checked between schemes)."""

    name = "example4"
    description = "nonlinear t sin(u), Almeida vs L1 comparison"
    defaults = {"a": 0.25, "T": 4.0, "u_a": 1.0}
    has_closed_form = False

    def generalized(self, alpha: float, rho: float, **overrides: Any) -> GeneralizedIVP:
        p = self.params(overrides)
        return GeneralizedIVP(
            alpha=alpha, rho=rho, a=p["a"], T=p["T"], init=(p["u_a"],),
            rhs=lambda t, u: t * np.sin(u),
            depends_on_u=True,
            name=self.name,
        )

    def equivalent(self, alpha: float, rho: float, **overrides: Any) -> CaputoIVP:
        p = self.params(overrides)
        scale = rho ** (-alpha)
        inv_rho = 1.0 / rho
        return CaputoIVP(
            alpha=alpha, a_bar=p["a"] ** rho, T_bar=p["T"] ** rho, init_bar=(p["u_a"],),
            rhs_bar=lambda t, x: scale * np.power(t, inv_rho) * np.sin(x),
            depends_on_u=True,
            rho=rho,
            name=self.name,
        )


class HadamardLimitExample(ExampleProblem):
    """f = (log t)^{1−α}/Γ(2−α) on [1, T]; u → log t as ρ → 0.

    The reference ū(t̄) = log(t̄)/ρ is exact only in the Hadamard limit.
    """

    name = "example5"
    description = "Hadamard limit, reference solution log t"
    defaults = {"a": 1.0, "T": 100.0}

    def generalized(self, alpha: float, rho: float, **overrides: Any) -> GeneralizedIVP:
        p = self.params(overrides)
        g = gamma(2.0 - alpha)
        return GeneralizedIVP(
            alpha=alpha, rho=rho, a=p["a"], T=p["T"], init=(math.log(p["a"]),),
            rhs=lambda t, u: np.power(np.log(t), 1.0 - alpha) / g,
            exact=np.log,
            depends_on_u=False,
            name=self.name,
        )

    def equivalent(self, alpha: float, rho: float, **overrides: Any) -> CaputoIVP:
        p = self.params(overrides)
        denom = rho * gamma(2.0 - alpha)
        return CaputoIVP(
            alpha=alpha, a_bar=p["a"] ** rho, T_bar=p["T"] ** rho, init_bar=(math.log(p["a"]),),
            rhs_bar=lambda t, x: np.power(np.log(t), 1.0 - alpha) / denom,
            depends_on_u=False,
            exact_bar=lambda t: np.log(t) / rho,
            rho=rho,
            name=self.name,
        )


REGISTRY: dict[str, ExampleProblem] = {
    example.name: example
    for example in (
        PowerSourceExample(),
        PolynomialExample(),
        LinearForcedExample(),
        SineExample(),
        HadamardLimitExample(),
    )
}


def get_example(name: str) -> ExampleProblem:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigError(
            f"unknown problem '{name}' (choose from {', '.join(sorted(REGISTRY))})"
        ) from None
