"""Tests for the rational-order power-series solver."""

from __future__ import annotations

import math

import numpy as np
import pytest

from core.errors import DomainError, HypothesisError, LengthMismatchError, SeriesTruncationError
from core.operators import QuadratureSpec, gen_caputo_derivative
from core.problem import GeneralizedIVP
from core.series import SeriesProblem, SeriesSolution, derivative_stack, eval_series, series_solve
from core.special import Tolerance, gamma, mittag_leffler


def _cubic_problem(rho: float = 0.5, M: int = 12) -> SeriesProblem:
    """D^{1/2,ρ} u = ρ^α Γ(4)/Γ(4−α) t^{ρ(3−α)}, u(0) = 0, solved by t^{3ρ}."""
    alpha = 0.5
    lam = rho**alpha * gamma(4.0) / gamma(4.0 - alpha)
    return SeriesProblem(p=1, q=2, rho=rho, f_jk={(5, 0): lam}, init=(0.0,), M=M)


def _linear_problem(lam: float, a0: float, rho: float = 0.5, M: int = 60) -> SeriesProblem:
    """f = λu expanded around a_0: λa_0 + λ(u − a_0)."""
    return SeriesProblem(p=1, q=2, rho=rho, f_jk={(0, 0): lam * a0, (0, 1): lam}, init=(a0,), M=M)


# ── Coefficients ─────────────────────────────────────────────────


class TestSeriesSolve:
    """Recursion for ū_i."""

    def test_zero_rhs_keeps_initial_value(self):
        sp = SeriesProblem(p=1, q=2, rho=0.9, f_jk={}, init=(5.0,), M=8)
        sol = series_solve(sp)
        assert sol.coeffs[0] == 5.0
        assert np.all(sol.coeffs[1:] == 0.0)

    def test_zero_rhs_second_order(self):
        # α = 3/2: u = a_0 + (a_1/ρ) t^ρ and w^q = t^ρ.
        sp = SeriesProblem(p=3, q=2, rho=0.5, f_jk={}, init=(1.0, 2.0), M=6)
        sol = series_solve(sp)
        assert sol.coeffs[0] == 1.0
        assert sol.coeffs[2] == pytest.approx(4.0)
        assert np.count_nonzero(sol.coeffs) == 2

    def test_power_law_single_coefficient(self):
        sol = series_solve(_cubic_problem())
        assert sol.coeffs[6] == pytest.approx(1.0, rel=1e-13)
        others = np.delete(np.asarray(sol.coeffs), 6)
        assert np.max(np.abs(others)) < 1e-14

    def test_power_law_values(self):
        rho = 0.5
        sol = series_solve(_cubic_problem(rho))
        t = np.array([0.1, 0.3, 0.5])
        np.testing.assert_allclose(eval_series(sol, t), t ** (3 * rho), rtol=1e-12)

    def test_dense_table_matches_mapping(self):
        sparse = series_solve(_cubic_problem(M=10))
        lam = _cubic_problem().f_jk[5, 0]
        dense = [[0.0]] * 5 + [[lam]] + [[0.0]] * 4
        sp = SeriesProblem(p=1, q=2, rho=0.5, f_jk=dense, init=(0.0,), M=10)
        np.testing.assert_allclose(series_solve(sp).coeffs, sparse.coeffs, rtol=0, atol=1e-15)

    def test_mittag_leffler_coefficients(self):
        # f = λu at α = 1/2: ū_k = a_0 (λρ^{−α})^k / Γ(k/2 + 1).
        lam, a0, rho = -1.0, 2.0, 0.5
        sol = series_solve(_linear_problem(lam, a0, rho, M=20))
        c = lam * rho**-0.5
        for k in range(21):
            assert sol.coeffs[k] == pytest.approx(a0 * c**k / gamma(k / 2 + 1), rel=1e-11, abs=1e-300)

    def test_mittag_leffler_values(self):
        lam, a0, rho = -1.0, 1.0, 0.5
        sol = series_solve(_linear_problem(lam, a0, rho))
        for t in (0.05, 0.2, 0.5):
            z = lam * rho**-0.5 * t ** (rho * 0.5)
            assert eval_series(sol, t) == pytest.approx(a0 * mittag_leffler(0.5, 1.0, z), rel=1e-10)

    def test_nonlinear_k_max_truncates_powers(self):
        # f = u^2 around a_0 = 0 contributes nothing while u stays 0.
        sp = SeriesProblem(p=1, q=2, rho=0.5, f_jk={(0, 2): 1.0}, init=(0.0,), M=8, k_max=1)
        assert np.all(series_solve(sp).coeffs == 0.0)

    def test_vanishing_low_coefficients(self):
        # ū_i = 0 for i < p unless i is a multiple of q.
        sp = SeriesProblem(p=3, q=2, rho=0.5, f_jk={(0, 0): 1.0}, init=(1.0, 0.0), M=8)
        sol = series_solve(sp)
        assert sol.coeffs[1] == 0.0
        assert sol.coeffs[3] != 0.0

    def test_truncated_dense_table(self):
        sp = SeriesProblem(p=1, q=2, rho=0.5, f_jk=[[1.0]], init=(0.0,), M=6)
        with pytest.raises(SeriesTruncationError):
            series_solve(sp)


class TestSeriesProblem:
    @pytest.mark.parametrize("p,q", [(0, 2), (1, 1), (2, 4)])
    def test_rational_order(self, p, q):
        with pytest.raises(DomainError):
            SeriesProblem(p=p, q=q, rho=0.5, f_jk={}, init=(0.0,), M=4)

    def test_init_length(self):
        with pytest.raises(LengthMismatchError):
            SeriesProblem(p=3, q=2, rho=0.5, f_jk={}, init=(0.0,), M=4)

    def test_hypothesis_at_origin(self):
        with pytest.raises(HypothesisError):
            SeriesProblem(p=3, q=2, rho=0.9, f_jk={}, init=(0.0, 0.0), M=4)

    def test_negative_index(self):
        with pytest.raises(DomainError):
            SeriesProblem(p=1, q=2, rho=0.5, f_jk={(-1, 0): 1.0}, init=(0.0,), M=4)

    def test_non_finite_entry(self):
        with pytest.raises(DomainError):
            SeriesProblem(p=1, q=2, rho=0.5, f_jk=[[math.inf]], init=(0.0,), M=0)

    def test_mapping_marks_sparse(self):
        assert _cubic_problem().sparse is True


class TestFromProblem:
    """SeriesProblem built from a GeneralizedIVP carrying its expansion."""

    @staticmethod
    def _ivp(**overrides) -> GeneralizedIVP:
        lam, a0 = -1.0, 2.0
        fields = dict(
            alpha=0.5, rho=0.5, a=0.0, T=1.0, init=(a0,),
            rhs=lambda t, u: lam * u, rhs_series=((lam * a0, lam),) + ((0.0, 0.0),) * 19,
        )
        fields.update(overrides)
        return GeneralizedIVP(**fields)

    def test_matches_direct_construction(self):
        sp = SeriesProblem.from_problem(self._ivp(), 1, 2, 20)
        assert sp.rho == 0.5
        assert sp.init == (2.0,)
        np.testing.assert_array_equal(sp.f_jk[0], [-2.0, -1.0])
        assert sp.f_jk.shape == (20, 2)
        direct = series_solve(_linear_problem(-1.0, 2.0, M=20))
        np.testing.assert_allclose(series_solve(sp).coeffs, direct.coeffs, rtol=1e-13)

    def test_k_max_passed_through(self):
        assert SeriesProblem.from_problem(self._ivp(), 1, 2, 10, k_max=1).k_max == 1

    def test_needs_expansion(self):
        with pytest.raises(DomainError, match="no series expansion"):
            SeriesProblem.from_problem(self._ivp(rhs_series=None), 1, 2, 10)

    def test_needs_origin(self):
        with pytest.raises(DomainError, match="a = 0"):
            SeriesProblem.from_problem(self._ivp(a=0.1), 1, 2, 10)

    def test_order_must_match(self):
        with pytest.raises(DomainError, match="does not match"):
            SeriesProblem.from_problem(self._ivp(), 1, 3, 10)


# ── Evaluation ───────────────────────────────────────────────────


class TestEvalSeries:
    def test_linear_in_w(self):
        s = SeriesSolution(coeffs=np.array([0.0, 1.0]), rho=0.5, q=2)
        assert eval_series(s, 4.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_array_input(self):
        s = SeriesSolution(coeffs=np.array([1.0, 0.0, 2.0]), rho=1.0, q=2)
        np.testing.assert_allclose(eval_series(s, np.array([0.0, 1.0, 4.0])), [1.0, 3.0, 9.0])

    def test_scalar_result_is_float(self):
        s = SeriesSolution(coeffs=np.array([1.0]), rho=0.5, q=2)
        assert isinstance(eval_series(s, 1.0), float)


class TestResidual:
    """The truncated series satisfies the equation under the quadrature operator."""

    def test_derivative_stack_power(self):
        s = SeriesSolution(coeffs=np.array([0.0, 0.0, 0.0, 0.0, 1.0]), rho=0.5, q=2)
        # u = t, so u' = 1 and u'' = 0.
        d1, d2 = derivative_stack(s, 2)(np.array([0.5, 2.0]))
        np.testing.assert_allclose(d1, [1.0, 1.0], rtol=1e-14)
        np.testing.assert_allclose(d2, [0.0, 0.0], atol=1e-14)

    def test_power_law_residual(self):
        rho = 0.5
        sp = _cubic_problem(rho)
        sol = series_solve(sp)
        lam = sp.f_jk[5, 0]
        for t in (0.2, 0.5):
            lhs = gen_caputo_derivative(derivative_stack(sol, 1), 0.5, rho, 0.0, t)
            assert lhs == pytest.approx(lam * t ** (rho * 2.5), rel=1e-6)

    def test_mittag_leffler_residual(self):
        lam, a0, rho = -1.0, 1.0, 0.5
        sol = series_solve(_linear_problem(lam, a0, rho))
        quad = QuadratureSpec(grading=4.0, tol=Tolerance(rel=1e-6, abs=1e-10, max_terms=1))
        for t in (0.25, 0.5):
            lhs = gen_caputo_derivative(derivative_stack(sol, 1), 0.5, rho, 0.0, t, quad)
            assert lhs == pytest.approx(lam * eval_series(sol, t), rel=1e-4, abs=1e-4)
