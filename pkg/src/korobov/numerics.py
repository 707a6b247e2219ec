"""Scalar numeric services: Riemann zeta for real arguments > 1, primality,
and a log-log least-squares slope.

The zeta routine sums the first terms directly and closes the series with an
Euler-Maclaurin tail.  For ``f(x) = x**-s`` with real ``s > 1`` every
derivative has constant sign, so the truncation error is bounded by the first
omitted correction term; that bound is reported with the value.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateInput, DomainError

# B_2, B_4, ..., B_24
_BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730),
]
_EM_COEFFS = [float(b / math.factorial(2 * (k + 1))) for k, b in enumerate(_BERNOULLI)]
_EM_TERMS = 10
_DIRECT_TERMS = 16

MAX_EXACT_INT = 2**64 - 1


class ZetaValue(NamedTuple):
    alpha: float
    value: float
    abs_error_bound: float


def _em_terms(s: float, n: float, count: int) -> list[float]:
    """Euler-Maclaurin correction terms for sum_{m >= n} m**-s."""
    terms = []
    rising = s  # s (s+1) ... (s+2k-2)
    power = n ** (-s - 1.0)
    for k in range(count):
        terms.append(_EM_COEFFS[k] * rising * power)
        rising *= (s + 2 * k + 1) * (s + 2 * k + 2)
        power /= n * n
    return terms


def zeta_tail(alpha: float, n: int) -> float:
    """Return sum_{m >= n} m**-alpha for ``n >= 1``, ``alpha > 1``."""
    if not alpha > 1.0:
        raise DomainError(f"zeta tail needs alpha > 1, got {alpha!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n < _DIRECT_TERMS:
        head = math.fsum(m ** -alpha for m in range(n, _DIRECT_TERMS))
        return head + zeta_tail(alpha, _DIRECT_TERMS)
    nf = float(n)
    base = [nf ** (1.0 - alpha) / (alpha - 1.0), 0.5 * nf ** -alpha]
    return math.fsum(base + _em_terms(alpha, nf, _EM_TERMS))


@lru_cache(maxsize=4096)
def riemann_zeta(alpha: float) -> ZetaValue:
    """Riemann zeta at a real argument ``alpha > 1`` with an error bound.

    Raises
    ------
    DomainError
        If ``alpha <= 1`` (the series diverges).
    """
    alpha = float(alpha)
    if not alpha > 1.0 or math.isinf(alpha):
        if alpha == math.inf:
            return ZetaValue(alpha, 1.0, 0.0)
        raise DomainError(f"riemann_zeta needs alpha > 1, got {alpha!r}")
    n = float(_DIRECT_TERMS)
    head = [m ** -alpha for m in range(1, _DIRECT_TERMS)]
    corr = _em_terms(alpha, n, _EM_TERMS + 1)
    tail = [n ** (1.0 - alpha) / (alpha - 1.0), 0.5 * n ** -alpha] + corr[:-1]
    value = math.fsum(head + tail)
    truncation = abs(corr[-1])
    # fsum is correctly rounded; each summand carries ~1 ulp of pow error
    rounding = 4.0 * (len(head) + len(tail)) * math.ulp(1.0) * value
    return ZetaValue(alpha, value, truncation + rounding)


def zeta(alpha: float) -> float:
    return riemann_zeta(alpha).value


def partial_zeta(alpha: float, m: int) -> float:
    """sum_{k=1}^{m} k**-alpha."""
    if m <= 0:
        return 0.0
    if m <= _PREFIX_LIMIT:
        return float(_prefix_sums(alpha, m)[m - 1])
    return zeta(alpha) - zeta_tail(alpha, m + 1)


_PREFIX_LIMIT = 1 << 14


@lru_cache(maxsize=256)
def _prefix_table(alpha: float, size: int) -> np.ndarray:
    k = np.arange(1, size + 1, dtype=np.float64)
    return np.cumsum(k ** -alpha)


def _prefix_sums(alpha: float, m: int) -> np.ndarray:
    size = 256
    while size < m:
        size *= 2
    return _prefix_table(alpha, size)


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for ``n < 2**64``."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _TRIAL_LIMIT:
        f = 41
        while f * f <= n:
            if n % f == 0 or n % (f + 2) == 0:
                return False
            f += 6  # 41, 43 then 47, 49 ... covers all 6k +- 1
        return True
    if n > MAX_EXACT_INT:
        raise OverflowError(f"{n} exceeds the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(m: int) -> int:
    """Smallest prime ``>= m``."""
    m = int(m)
    if m < 1:
        raise ValueError(f"next_prime needs m >= 1, got {m}")
    n = max(m, 2)
    if n > 2 and n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 1 if n == 2 else 2
        if n > MAX_EXACT_INT:
            raise OverflowError("next prime exceeds the 64-bit range")
    return n


def fit_loglog_slope(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares line through ``(ln x, ln y)``; returns ``(slope, intercept)``."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise DegenerateInput("need at least 3 (x, y) points")
    if np.any(pts <= 0):
        raise DomainError("log-log fit needs positive x and y")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.all(lx == lx[0]):
        raise DegenerateInput("all x values are equal")
    xm, ym = lx.mean(), ly.mean()
    slope = float(np.sum((lx - xm) * (ly - ym)) / np.sum((lx - xm) ** 2))
    return slope, float(ym - slope * xm)
