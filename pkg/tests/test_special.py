"""Tests for special functions — gamma family and Mittag-Leffler."""

from __future__ import annotations

import math
import random

import mpmath
import pytest

from core.errors import ConvergenceError, DomainError, OverflowSignal, PoleError
from core.special import (
    Tolerance,
    beta,
    gamma,
    gamma_ratio,
    log_gamma,
    mittag_leffler,
)


def _ml_oracle(alpha: float, beta_: float, z: float, terms: int = 400) -> float:
    with mpmath.workdps(40):
        total = mpmath.fsum(
            mpmath.mpf(z) ** k / mpmath.gamma(mpmath.mpf(alpha) * k + beta_) for k in range(terms)
        )
        return float(total)


# ── Gamma ────────────────────────────────────────────────────────


class TestGamma:
    """Lanczos gamma against exact values and mpmath."""

    def test_integers_are_factorials(self):
        assert gamma(1) == 1.0
        assert gamma(5) == 24.0
        assert gamma(21) == float(math.factorial(20))

    def test_half(self):
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    @pytest.mark.parametrize("x", [0.1, 0.37, 1.5, 2.25, 7.9, 33.3, 120.7])
    def test_matches_mpmath(self, x):
        assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)

    @pytest.mark.parametrize("x", [0.3, 1.7, 4.2, 11.5, 60.25])
    def test_recurrence(self, x):
        assert gamma(x + 1) == pytest.approx(x * gamma(x), rel=1e-12)

    @pytest.mark.parametrize("x", [-0.5, -1.5, -2.7, -10.3])
    def test_negative_non_integers(self, x):
        assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)

    @pytest.mark.parametrize("x", [0, -1, -2, -17])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            gamma(x)

    def test_overflow(self):
        with pytest.raises(OverflowSignal):
            gamma(172.0)

    def test_non_finite(self):
        with pytest.raises(DomainError):
            gamma(float("nan"))


class TestGammaRelatives:
    """log_gamma, gamma_ratio and beta."""

    @pytest.mark.parametrize("x", [0.1, 0.9, 3.7, 50.5, 500.0])
    def test_log_gamma(self, x):
        assert log_gamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-12)

    def test_log_gamma_rejects_non_positive(self):
        with pytest.raises(DomainError):
            log_gamma(0.0)

    def test_ratio_small_arguments(self):
        assert gamma_ratio(4.0, 2.0) == pytest.approx(6.0, rel=1e-14)

    def test_ratio_beyond_overflow(self):
        # Γ(200.5)/Γ(199.5) = 199.5 although both factors overflow.
        assert gamma_ratio(200.5, 199.5) == pytest.approx(199.5, rel=1e-10)

    def test_ratio_with_negative_argument(self):
        expected = float(mpmath.gamma(-0.5) / mpmath.gamma(2.5))
        assert gamma_ratio(-0.5, 2.5) == pytest.approx(expected, rel=1e-12)

    def test_beta(self):
        assert beta(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-13)
        assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)

    def test_beta_rejects_non_positive(self):
        with pytest.raises(DomainError):
            beta(-1.0, 2.0)


# ── Mittag-Leffler ───────────────────────────────────────────────


class TestMittagLeffler:
    """Series evaluation of E_{α,β}(z)."""

    def test_exponential(self):
        assert mittag_leffler(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-13)

    def test_cosh(self):
        assert mittag_leffler(2.0, 1.0, 1.0) == pytest.approx(math.cosh(1.0), rel=1e-13)

    def test_negative_argument(self):
        assert mittag_leffler(1.0, 1.0, -1.0) == pytest.approx(math.exp(-1.0), rel=1e-13)

    def test_zero_argument(self):
        assert mittag_leffler(0.5, 2.5, 0.0) == pytest.approx(1.0 / gamma(2.5), rel=1e-15)

    @pytest.mark.parametrize(
        "alpha,beta_,z",
        [(0.5, 1.0, 2.0), (0.5, 2.5, 0.7), (0.9, 2.9, 1.3), (0.75, 1.0, -0.5), (1.5, 1.0, 25.0)],
    )
    def test_matches_oracle(self, alpha, beta_, z):
        assert mittag_leffler(alpha, beta_, z) == pytest.approx(_ml_oracle(alpha, beta_, z), rel=1e-12)

    def test_large_z_rejected(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.5, 1.0, 31.0)

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.0, 1.0, 1.0)

    def test_term_budget(self):
        with pytest.raises(ConvergenceError) as info:
            mittag_leffler(1.0, 1.0, 5.0, Tolerance(max_terms=3))
        assert info.value.iterations == 3


class TestMittagLefflerNegativeArgument:
    """Alternating series whose terms dwarf the sum."""

    @pytest.mark.parametrize("z", [-5.0, -10.0, -20.0])
    def test_half_order_is_scaled_erfc(self, z):
        # E_{1/2,1}(z) = exp(z^2) erfc(-z)
        with mpmath.workdps(50):
            expected = float(mpmath.exp(mpmath.mpf(z) ** 2) * mpmath.erfc(-mpmath.mpf(z)))
        assert mittag_leffler(0.5, 1.0, z) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("z", [-2.0, -4.0, -8.0])
    def test_moderate_arguments_match_oracle(self, z):
        for alpha, beta_ in [(0.5, 1.0), (0.75, 1.25), (0.9, 2.0)]:
            with mpmath.workdps(60):
                expected = float(mpmath.fsum(
                    mpmath.mpf(z) ** k * mpmath.rgamma(mpmath.mpf(alpha) * k + beta_) for k in range(600)
                ))
            assert mittag_leffler(alpha, beta_, z) == pytest.approx(expected, rel=1e-11, abs=1e-15)

    def test_cosine(self):
        assert mittag_leffler(2.0, 1.0, -25.0) == pytest.approx(math.cos(5.0), rel=1e-12)

    def test_decays_towards_zero(self):
        values = [mittag_leffler(0.5, 1.0, -z) for z in (5.0, 10.0, 20.0)]
        assert all(v > 0 for v in values)
        assert values[0] > values[1] > values[2]

    @pytest.mark.slow
    def test_edge_of_supported_range(self):
        # the double sum overflows here
        with mpmath.workdps(50):
            expected = float(mpmath.exp(900) * mpmath.erfc(30))
        assert mittag_leffler(0.5, 1.0, -30.0) == pytest.approx(expected, rel=1e-12)


class TestMittagLefflerIdentities:
    @pytest.mark.parametrize("seed", range(5))
    def test_recurrence(self, seed):
        # E_{α,β}(z) = z E_{α,α+β}(z) + 1/Γ(β)
        rng = random.Random(seed)
        alpha = rng.uniform(0.3, 2.0)
        beta_ = rng.uniform(0.5, 3.0)
        z = rng.uniform(-3.0, 3.0)
        lhs = mittag_leffler(alpha, beta_, z)
        rhs = z * mittag_leffler(alpha, alpha + beta_, z) + 1.0 / gamma(beta_)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("x,y", [(0.3, 2.7), (1.5, 4.0), (12.25, 0.75), (80.0, 95.5)])
    def test_beta_is_symmetric(self, x, y):
        assert beta(x, y) == beta(y, x)
        assert beta(x, y) == pytest.approx(float(mpmath.beta(x, y)), rel=1e-11)


class TestTolerance:
    def test_validation(self):
        with pytest.raises(DomainError):
            Tolerance(rel=0.0)
        with pytest.raises(DomainError):
            Tolerance(max_terms=0)

    def test_from_config(self):
        tol = Tolerance.from_config({"rel": 1e-10, "max_terms": 50})
        assert tol.rel == 1e-10
        assert tol.abs == Tolerance().abs
        assert tol.max_terms == 50
