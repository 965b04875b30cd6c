"""Tradeoff constants: growth roots, depth-inflation factors and split fractions."""
from __future__ import annotations

import math
from dataclasses import dataclass


class ParamError(ValueError):
    pass


@dataclass(frozen=True)
class TradeoffParams:
    c: int
    epsilon: float

    def __post_init__(self):
        if self.c < 2:
            raise ParamError("c must be at least 2")
        if not 0 < self.epsilon < 1:
            raise ParamError("epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class Schedule:
    c: int
    gamma: float
    lam: float
    alphas: tuple[float, ...]  # alphas[i - 1] is the fraction for type i

    def alpha(self, i: int) -> float:
        return self.alphas[i - 1]


def _poly(x: float, c: int) -> float:
    return x ** c - sum(x ** k for k in range(c))


def _dpoly(x: float, c: int) -> float:
    return c * x ** (c - 1) - sum(k * x ** (k - 1) for k in range(1, c))


def growth_root(c: int, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Root in [1, 2] of x^c - x^(c-1) - ... - 1."""
    lo, hi = 1.0, 2.0
    it = 0
    while hi - lo > 1e-6:
        mid = (lo + hi) / 2
        if _poly(mid, c) > 0:
            hi = mid
        else:
            lo = mid
        it += 1
    x = (lo + hi) / 2
    while it < max_iter:
        step = _poly(x, c) / _dpoly(x, c)
        x -= step
        it += 1
        if abs(step) < tol:
            return x
    raise ParamError(f"root search for c={c} did not converge")


def compute_schedule(c: int) -> Schedule:
    if not 2 <= c <= 32:
        raise ParamError("c must lie in 2..32")
    gamma = growth_root(c)
    lam = 1 / math.log2(gamma)
    a1 = 1 - 1 / gamma
    alphas = [a1]
    for i in range(2, c):
        if i == c - 1:
            alphas.append((1 - a1) / (2 - a1))
        else:
            q = (1 - a1) ** i
            alphas.append(1 - a1 * q / (2 * a1 - 1 + q))
    if c > 1:
        alphas.append(0.0)
    return Schedule(c, gamma, lam, tuple(alphas))


def depth_bound(c: int, n: int) -> float:
    if n < 1:
        raise ParamError("N must be positive")
    if n < 2 ** c:
        return math.log2(n)
    return compute_schedule(c).lam * (math.log2(n) - c) + c


def plan_parameters(epsilon_prime: float, d: int = 3) -> TradeoffParams:
    """Smallest c whose time exponent beats plain DP with space exponent ``epsilon_prime``."""
    if epsilon_prime <= 0:
        raise ParamError("epsilon' must be positive")
    if d not in (2, 3):
        raise ParamError("d must be 2 or 3")
    c = 2
    while True:
        eps = epsilon_prime / c
        if eps < 1 and (1 + 2 / 2 ** (c / 2)) * (1 - eps) < 1:
            return TradeoffParams(c, eps)
        c += 1
