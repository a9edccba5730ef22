"""Weights — convolution coefficients of the L1 and L2-1σ discretizations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.errors import DomainError


def _check_order(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise DomainError(f"scheme weights need 0 < alpha < 1, got {alpha}")


@dataclass(frozen=True)
class L1Weights:
    """b_j = j^{1−α} − (j−1)^{1−α}; index 0 holds a placeholder 0."""

    alpha: float
    b: np.ndarray


def l1_weights(alpha: float, count: int) -> L1Weights:
    _check_order(alpha)
    j = np.arange(count + 1, dtype=float)
    b = np.zeros(count + 1)
    b[1:] = j[1:] ** (1.0 - alpha) - j[:-1] ** (1.0 - alpha)
    b.flags.writeable = False
    return L1Weights(alpha=alpha, b=b)


@dataclass(frozen=True)
class L21SigmaWeights:
    """a_l, b_l ladders at σ = 1 − α/2; ``b[0]`` is 0 so that c^{(n)} has one formula."""

    alpha: float
    sigma: float
    a: np.ndarray
    b: np.ndarray

    def c(self, n: int) -> np.ndarray:
        """c^{(n)}_j for j = 0..n.

        c_j = a_j + b_{j+1} − b_j for j < n and c_n = a_n − b_n; with b_0 = 0
        this gives c_0 = a_0 at n = 0 and c_0 = a_0 + b_1 afterwards.
        """
        if n < 0 or n >= len(self.a):
            raise DomainError(f"c^(n) requested for n={n} outside 0..{len(self.a) - 1}")
        c = self.a[: n + 1] - self.b[: n + 1]
        c[:n] += self.b[1 : n + 1]
        return c


def l2_1sigma_weights(alpha: float, count: int) -> L21SigmaWeights:
    _check_order(alpha)
    sigma = 1.0 - alpha / 2.0
    l = np.arange(count + 1, dtype=float)
    p1 = (l + sigma) ** (1.0 - alpha)
    p2 = (l + sigma) ** (2.0 - alpha)

    a = np.empty(count + 1)
    a[0] = sigma ** (1.0 - alpha)
    a[1:] = p1[1:] - p1[:-1]

    b = np.zeros(count + 1)
    b[1:] = (p2[1:] - p2[:-1]) / (2.0 - alpha) - (p1[1:] + p1[:-1]) / 2.0

    a.flags.writeable = False
    b.flags.writeable = False
    return L21SigmaWeights(alpha=alpha, sigma=sigma, a=a, b=b)
