"""Special — gamma, beta and the two-parameter Mittag-Leffler function.

Gamma uses the Lanczos approximation (g = 7, nine coefficients) with the
reflection formula below 0.5.  Mittag-Leffler is summed from its defining
Taylor series; alternating sums that cancel are redone in mpmath.  The
supported range is |z| <= 30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import mpmath
from loguru import logger

from core.errors import ConvergenceError, DomainError, OverflowSignal, PoleError

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

GAMMA_MAX_ARG = 171.6
# Integers up to here go through math.factorial so Γ(n) is exact.
_EXACT_FACTORIAL_MAX = 171
DEFAULT_MAX_ABS_Z = 30.0


@dataclass(frozen=True)
class Tolerance:
    """Stopping rule for series and refinement loops."""

    rel: float = 1e-14
    abs: float = 1e-300
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not self.rel > 0:
            raise DomainError(f"Tolerance.rel must be > 0, got {self.rel}")
        if not self.abs >= 0:
            raise DomainError(f"Tolerance.abs must be >= 0, got {self.abs}")
        if self.max_terms < 1:
            raise DomainError(f"Tolerance.max_terms must be >= 1, got {self.max_terms}")

    @classmethod
    def from_config(cls, section: dict[str, Any] | None) -> "Tolerance":
        section = section or {}
        default = cls()
        return cls(
            rel=float(section.get("rel", default.rel)),
            abs=float(section.get("abs", default.abs)),
            max_terms=int(section.get("max_terms", default.max_terms)),
        )

    def converged(self, term: float, total: float) -> bool:
        return abs(term) < self.rel * abs(total) + self.abs


DEFAULT_TOLERANCE = Tolerance()


# ── Gamma family ─────────────────────────────────────────────────


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _lanczos_series(z: float) -> float:
    s = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        s += _LANCZOS_COEFFS[i] / (z + i)
    return s


def gamma(x: float) -> float:
    """Γ(x) for real x outside the poles.

    Raises:
        PoleError: x is 0, -1, -2, ...
        OverflowSignal: x > 171.6.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma needs a finite argument, got {x}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at {x:g}")
    if x > GAMMA_MAX_ARG:
        raise OverflowSignal(f"gamma({x:g}) exceeds the double range")
    if x == math.floor(x) and x <= _EXACT_FACTORIAL_MAX:
        return float(math.factorial(int(x) - 1))

    if x < 0.5:
        reflected = 1.0 - x
        sin_term = math.sin(math.pi * x)
        if reflected > GAMMA_MAX_ARG:
            # Γ(1-x) overflows, Γ(x) underflows towards zero.
            log_mag = math.log(math.pi) - math.log(abs(sin_term)) - log_gamma(reflected)
            return math.copysign(math.exp(log_mag), sin_term)
        return math.pi / (sin_term * gamma(reflected))

    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    # t**(z+0.5) is split in two halves so that large x stays finite.
    half = t ** ((z + 0.5) / 2.0)
    return _SQRT_2PI * half * (half * math.exp(-t)) * _lanczos_series(z)


def log_gamma(x: float) -> float:
    """log Γ(x) for x > 0."""
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"log_gamma needs a finite positive argument, got {x}")
    if x == math.floor(x) and x <= _EXACT_FACTORIAL_MAX:
        return math.log(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_series(z))


def _signed_log_abs_gamma(x: float) -> tuple[float, float]:
    if x > 0:
        return 1.0, log_gamma(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at {x:g}")
    sin_term = math.sin(math.pi * x)
    log_mag = math.log(math.pi) - math.log(abs(sin_term)) - log_gamma(1.0 - x)
    return math.copysign(1.0, sin_term), log_mag


def gamma_ratio(x: float, y: float) -> float:
    """Γ(x)/Γ(y), through log Γ when either factor would overflow."""
    if max(abs(x), abs(y)) <= 170.0:
        return gamma(x) / gamma(y)
    sx, lx = _signed_log_abs_gamma(x)
    sy, ly = _signed_log_abs_gamma(y)
    diff = lx - ly
    if diff > 709.0:
        raise OverflowSignal(f"gamma({x:g})/gamma({y:g}) exceeds the double range")
    return sx * sy * math.exp(diff)


def beta(x: float, y: float) -> float:
    """B(x, y) = Γ(x)Γ(y)/Γ(x+y), evaluated in log space."""
    if not (x > 0 and y > 0):
        raise DomainError(f"beta needs positive arguments, got ({x}, {y})")
    lo, hi = sorted((float(x), float(y)))
    return math.exp(log_gamma(lo) + log_gamma(hi) - log_gamma(lo + hi))


# ── Mittag-Leffler ───────────────────────────────────────────────

# Unit roundoff of a double.
_EPS = 2.0**-52
_GUARD_DIGITS = 20


def _float_series(alpha: float, beta: float, z: float, tol: Tolerance) -> tuple[float, float]:
    """Double-precision sum and the log of its largest term."""
    log_abs_z = math.log(abs(z))
    negative = z < 0
    terms: list[float] = []
    running = 0.0
    previous = math.inf
    log_peak = -math.inf
    for k in range(tol.max_terms):
        arg = alpha * k + beta
        log_power = k * log_abs_z
        log_mag = log_power - log_gamma(arg)
        log_peak = max(log_peak, log_mag)
        if arg <= 170.0 and log_power < 700.0:
            term = z**k / gamma(arg)
        else:
            if log_mag > 709.0:
                raise OverflowSignal(f"E_({alpha},{beta})({z}) overflows")
            magnitude = math.exp(log_mag)
            term = -magnitude if (negative and k % 2) else magnitude
        terms.append(term)
        running += term
        if not math.isfinite(running):
            raise OverflowSignal(f"E_({alpha},{beta})({z}) overflows")
        if arg >= 2.0 and abs(term) <= previous and tol.converged(term, running):
            return math.fsum(terms), log_peak
        previous = abs(term)

    raise ConvergenceError(
        f"mittag_leffler({alpha}, {beta}, {z}) did not converge in {tol.max_terms} terms",
        iterations=tol.max_terms,
        residual=abs(terms[-1]),
    )


def _peak_log_term(alpha: float, beta: float, r: float, max_terms: int) -> float:
    log_r = math.log(r)
    peak = -math.inf
    for k in range(max_terms):
        log_mag = k * log_r - log_gamma(alpha * k + beta)
        if log_mag < peak and alpha * k + beta > 2.0:
            break
        peak = max(peak, log_mag)
    return peak


def _extended_series(alpha: float, beta: float, z: float, tol: Tolerance, log_peak: float) -> float:
    """Σ z^k/Γ(αk+β) in mpmath, with digits to spare above the largest term."""
    digits = int(max(log_peak, 0.0) / math.log(10.0)) + _GUARD_DIGITS
    with mpmath.workdps(digits):
        x = mpmath.mpf(z)
        a = mpmath.mpf(alpha)
        b = mpmath.mpf(beta)
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        previous = mpmath.inf
        for k in range(tol.max_terms):
            arg = a * k + b
            term = power * mpmath.rgamma(arg)
            total += term
            size = abs(term)
            if arg >= 2 and size <= previous and size < tol.rel * abs(total) + tol.abs:
                return float(total)
            previous = size
            power *= x
        residual = float(previous)

    raise ConvergenceError(
        f"mittag_leffler({alpha}, {beta}, {z}) did not converge in {tol.max_terms} terms",
        iterations=tol.max_terms,
        residual=residual,
    )


def mittag_leffler(
    alpha: float,
    beta: float,
    z: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
    max_abs_z: float = DEFAULT_MAX_ABS_Z,
) -> float:
    """E_{α,β}(z) = Σ_k z^k / Γ(αk+β) by direct summation.

    The loop stops once a term falls below ``tol.rel·|sum| + tol.abs`` in
    the region where the terms are already decreasing.  For z < 0 the terms
    alternate in sign: when the largest one times the double roundoff is
    above ``tol.rel·|sum|``, or the double sum overflows, the series is
    summed again in mpmath.

    Raises:
        DomainError: alpha or beta not positive, or |z| beyond max_abs_z.
        ConvergenceError: tol.max_terms reached first.
        OverflowSignal: z > 0 and the sum is not a finite double.
    """
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"mittag_leffler needs alpha, beta > 0, got ({alpha}, {beta})")
    if not math.isfinite(z) or abs(z) > max_abs_z:
        raise DomainError(f"|z| = {abs(z):g} outside the supported range |z| <= {max_abs_z:g}")
    if z == 0:
        return 1.0 / gamma(beta)
    if z > 0:
        return _float_series(alpha, beta, z, tol)[0]

    try:
        value, log_peak = _float_series(alpha, beta, z, tol)
    except OverflowSignal:
        log_peak = _peak_log_term(alpha, beta, -z, tol.max_terms)
    else:
        lost = log_peak + math.log(_EPS)
        if value != 0 and lost <= math.log(tol.rel) + math.log(abs(value)):
            return value

    logger.debug(f"E_({alpha},{beta})({z}): alternating terms up to e^{log_peak:.1f}, summing in mpmath")
    return _extended_series(alpha, beta, z, tol, log_peak)
