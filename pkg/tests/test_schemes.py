"""Tests for the time-stepping schemes and their shared machinery."""

from __future__ import annotations

import math

import numpy as np
import pytest

from bench.problems import get_example
from core.errors import ConfigError, ConvergenceError, DomainError
from core.problem import CaputoIVP, GeneralizedIVP, linf_error
from core.special import gamma, mittag_leffler
from schemes import (
    NonlinearSolveConfig,
    SchemeId,
    SolveMethod,
    almeida_coefficients,
    fixed_point,
    l1_weights,
    l2_1sigma_weights,
    parse_scheme,
    solve,
    solve_euler_trap,
    solve_l1,
    solve_l2_1sigma,
)


def _linear_problem(alpha: float) -> CaputoIVP:
    """ū(t) = t solves ^C D^α ū = t^{1−α}/Γ(2−α), ū(0) = 0."""
    g = gamma(2.0 - alpha)
    return CaputoIVP(
        alpha=alpha, a_bar=0.0, T_bar=1.0, init_bar=(0.0,),
        rhs_bar=lambda t, x: np.power(t, 1.0 - alpha) / g,
        depends_on_u=False,
        exact_bar=lambda t: t,
    )


def _constant_problem(c: float, alpha: float = 0.5, u0: float = 2.0) -> CaputoIVP:
    return CaputoIVP(
        alpha=alpha, a_bar=0.0, T_bar=1.0, init_bar=(u0,),
        rhs_bar=lambda t, x: c + 0.0 * t,
        depends_on_u=False,
    )


def _table_error(problem: str, scheme: str, alpha: float, rho: float, N: int) -> float:
    caputo = get_example(problem).equivalent(alpha, rho)
    return linf_error(solve(caputo, N, scheme), caputo.exact_bar, transformed=True)


# ── Weights ──────────────────────────────────────────────────────


class TestWeights:
    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
    def test_l1_ladder(self, alpha):
        b = l1_weights(alpha, 64).b
        assert b[1] == 1.0
        assert np.all(b[1:] > 0)
        assert np.all(np.diff(b[1:]) < 0)

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9])
    def test_l2_1sigma_ladder(self, alpha):
        w = l2_1sigma_weights(alpha, 32)
        assert w.sigma == pytest.approx(1.0 - alpha / 2.0)
        assert w.c(0)[0] == pytest.approx(w.sigma ** (1.0 - alpha), rel=1e-15)
        assert np.all(w.a > 0)
        c = w.c(5)
        assert len(c) == 6
        assert c[0] == pytest.approx(w.a[0] + w.b[1])
        assert c[5] == pytest.approx(w.a[5] - w.b[5])

    def test_c_index_range(self):
        with pytest.raises(DomainError):
            l2_1sigma_weights(0.5, 4).c(5)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 1.5])
    def test_order_range(self, alpha):
        with pytest.raises(DomainError):
            l1_weights(alpha, 4)


# ── Fixed point ──────────────────────────────────────────────────


class TestFixedPoint:
    """Picard and Aitken iteration with the relative stopping rule."""

    def test_picard_cosine(self):
        x, iterations = fixed_point(math.cos, 1.0)
        assert x == pytest.approx(0.7390851332151607, abs=1e-11)
        assert iterations > 10

    def test_aitken_is_faster(self):
        cfg = NonlinearSolveConfig(method=SolveMethod.AITKEN)
        x, iterations = fixed_point(math.cos, 1.0, cfg)
        _, picard_iterations = fixed_point(math.cos, 1.0)
        assert x == pytest.approx(0.7390851332151607, abs=1e-11)
        assert iterations < picard_iterations

    def test_aitken_finds_repelling_point(self):
        cfg = NonlinearSolveConfig(method="aitken")
        x, _ = fixed_point(lambda v: 2.0 * v + 1.0, 0.0, cfg)
        assert x == -1.0

    def test_relaxation(self):
        cfg = NonlinearSolveConfig(relaxation=0.5, max_iter=200)
        x, _ = fixed_point(lambda v: 0.5 * v + 1.0, 0.0, cfg)
        assert x == pytest.approx(2.0, rel=1e-11)

    def test_divergence(self):
        cfg = NonlinearSolveConfig(max_iter=20)
        with pytest.raises(ConvergenceError) as info:
            fixed_point(lambda v: 2.0 * v + 1.0, 0.0, cfg)
        assert info.value.iterations == 20

    def test_non_finite_iterate(self):
        with pytest.raises(ConvergenceError):
            fixed_point(lambda v: math.inf, 0.0)

    def test_config_validation(self):
        with pytest.raises(DomainError):
            NonlinearSolveConfig(tol=0.0)
        with pytest.raises(DomainError):
            NonlinearSolveConfig(relaxation=1.5)

    def test_from_config_overrides(self):
        cfg = NonlinearSolveConfig.from_config({"tol": 1e-10, "method": "picard"}, method="aitken")
        assert cfg.tol == 1e-10
        assert cfg.method is SolveMethod.AITKEN


# ── L1 ───────────────────────────────────────────────────────────


class TestL1:
    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9])
    def test_exact_on_linear(self, alpha):
        p = _linear_problem(alpha)
        u = solve_l1(p, 8)
        np.testing.assert_allclose(u, np.linspace(0.0, 1.0, 9), rtol=0, atol=1e-12)

    def test_single_step(self):
        alpha, c = 0.5, 3.0
        u = solve_l1(_constant_problem(c, alpha), 1)
        assert u[1] == pytest.approx(2.0 + gamma(2.0 - alpha) * c, rel=1e-14)

    def test_initial_value_kept(self):
        u = solve_l1(_constant_problem(1.0, u0=-0.75), 16)
        assert u[0] == -0.75

    def test_table_cell(self):
        assert _table_error("example1", "l1", 0.5, 0.9, 16) == pytest.approx(7.6009e-3, rel=1e-2)
        assert _table_error("example1", "l1", 0.5, 0.9, 32) == pytest.approx(2.7918e-3, rel=1e-2)

    def test_generalized_matches_equivalent(self):
        # The transform path and the hand-simplified equivalent problem agree.
        ex = get_example("example3")
        direct = solve(ex.generalized(0.75, 0.5), 32, "l1")
        simplified = solve(ex.equivalent(0.75, 0.5), 32, "l1")
        np.testing.assert_allclose(direct.values, simplified.values, rtol=1e-10)
        np.testing.assert_allclose(direct.mesh.nodes, simplified.mesh.nodes, rtol=1e-12)

    def test_nonlinear_steps_iterate(self):
        sol = solve(get_example("example4").equivalent(0.5, 0.75), 16, "l1")
        assert sol.diagnostics[0] == 0
        assert min(sol.diagnostics[1:]) >= 1

    def test_alpha_range(self):
        p = CaputoIVP(alpha=1.5, a_bar=0.0, T_bar=1.0, init_bar=(0.0, 0.0), rhs_bar=lambda t, x: t)
        with pytest.raises(DomainError):
            solve_l1(p, 4)


# ── L2-1σ ────────────────────────────────────────────────────────


class TestL21Sigma:
    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9])
    def test_exact_on_linear(self, alpha):
        u = solve_l2_1sigma(_linear_problem(alpha), 8)
        np.testing.assert_allclose(u, np.linspace(0.0, 1.0, 9), rtol=0, atol=1e-12)

    def test_table_cell(self):
        assert _table_error("example2", "l2sigma", 0.9, 0.8664339756999316, 16) == pytest.approx(
            7.5367e-4, rel=1e-2
        )

    def test_rho_blocks_identical(self):
        # The transformed problem is ρ-free, so the value arrays match bitwise.
        ex = get_example("example2")
        first = solve_l2_1sigma(ex.equivalent(0.5, 0.8664339756999316), 64)
        second = solve_l2_1sigma(ex.equivalent(0.5, 1.0 / 6.0), 64)
        np.testing.assert_array_equal(first, second)

    def test_faster_than_l1(self):
        e_l1 = _table_error("example2", "l1", 0.5, 0.5, 64)
        e_l2 = _table_error("example2", "l2sigma", 0.5, 0.5, 64)
        assert e_l2 < e_l1

    def test_nonlinear_coupling(self):
        # ^C D^{1/2} ū = −ū, ū(0) = 1 has ū(1) = E_{1/2}(−1).
        p = CaputoIVP(alpha=0.5, a_bar=0.0, T_bar=1.0, init_bar=(1.0,), rhs_bar=lambda t, x: -x)
        sol = solve(p, 256, "l2sigma")
        assert sol.values[-1] == pytest.approx(mittag_leffler(0.5, 1.0, -1.0), abs=2e-2)
        assert min(sol.diagnostics[1:]) >= 1


# ── Euler-trapezoid ──────────────────────────────────────────────


class TestEulerTrap:
    def test_zero_rhs(self):
        u = solve_euler_trap(_constant_problem(0.0, u0=1.25), 16)
        np.testing.assert_array_equal(u, np.full(17, 1.25))

    def test_table_cell(self):
        assert _table_error("example3", "euler", 0.9, 0.9, 16) == pytest.approx(5.5781e-3, rel=5e-2)

    def test_consistent_tail_differs(self):
        p = _constant_problem(1.0)
        printed = solve_euler_trap(p, 8)
        consistent = solve_euler_trap(p, 8, consistent_tail=True)
        # First step is the tail term alone.
        assert printed[1] - 2.0 == pytest.approx(0.125**0.5 / 0.5)
        assert consistent[1] - 2.0 == pytest.approx(0.125**0.5 / gamma(1.5))

    def test_registry_option(self):
        p = _constant_problem(1.0)
        sol = solve(p, 8, "euler", consistent_tail=True)
        np.testing.assert_array_equal(sol.values, solve_euler_trap(p, 8, consistent_tail=True))
        assert all(count == 0 for count in sol.diagnostics)


# ── Almeida ──────────────────────────────────────────────────────


class TestAlmeida:
    def test_variants_coincide_at_half(self):
        A_c, B_c = almeida_coefficients(0.5, 0.75, 10, "consistent")
        A_p, B_p = almeida_coefficients(0.5, 0.75, 10, "printed")
        assert A_c == pytest.approx(A_p, rel=1e-14)
        np.testing.assert_allclose(B_c, B_p, rtol=1e-14)

    def test_variants_differ_elsewhere(self):
        A_c, _ = almeida_coefficients(0.3, 0.75, 10, "consistent")
        A_p, _ = almeida_coefficients(0.3, 0.75, 10, "printed")
        assert A_c != pytest.approx(A_p)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            almeida_coefficients(0.5, 0.75, 10, "other")

    def test_zero_rhs(self):
        p = GeneralizedIVP(alpha=0.5, rho=0.75, a=0.25, T=4.0, init=(1.5,), rhs=lambda t, u: 0.0 * t)
        sol = solve(p, 32, "almeida")
        np.testing.assert_allclose(sol.values, 1.5, rtol=0, atol=1e-14)

    def test_power_law_closed_form(self):
        p = get_example("example2").generalized(0.5, 0.5, m=1.0, T=0.5)
        err = linf_error(solve(p, 256, "almeida"), p.exact)
        assert err < 2e-2

    def test_error_shrinks_with_truncation(self):
        p = get_example("example2").generalized(0.5, 0.5, m=1.0, T=0.5)
        coarse = linf_error(solve(p, 128, "almeida", n_trunc=3), p.exact)
        fine = linf_error(solve(p, 128, "almeida", n_trunc=20), p.exact)
        assert fine < coarse

    def test_needs_generalized_problem(self):
        with pytest.raises(ConfigError):
            solve(get_example("example4").equivalent(0.5, 0.75), 16, "almeida")

    def test_truncation_order(self):
        p = GeneralizedIVP(alpha=0.5, rho=0.75, a=0.25, T=4.0, init=(1.0,), rhs=lambda t, u: t)
        with pytest.raises(DomainError):
            solve(p, 8, "almeida", n_trunc=0)


# ── Registry ─────────────────────────────────────────────────────


class TestRegistry:
    def test_parse(self):
        assert parse_scheme("l2sigma") is SchemeId.L2SIGMA
        assert parse_scheme(SchemeId.EULER) is SchemeId.EULER

    def test_unknown_scheme(self):
        with pytest.raises(ConfigError, match="choose from"):
            parse_scheme("rk4")

    def test_generalized_problem_uses_original_nodes(self):
        p = get_example("example1").generalized(0.5, 0.5)
        sol = solve(p, 4, "l1")
        assert sol.scheme_id == "l1"
        np.testing.assert_allclose(sol.mesh.nodes, np.linspace(0.0, 1.0, 5) ** 2, atol=1e-15)
