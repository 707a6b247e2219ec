"""Eigenvalues of ``W_d = APP* APP`` on the weighted Korobov space.

The eigenvalues are the values of the decay function
``r(h) = prod_j r_j(h_j)`` with ``r_j(0) = 1`` and ``r_j(h) = g_j / |h|**alpha``.
Only the non-negative rank profile ``m_j = |h_j|`` matters, and a profile with
``z`` nonzero ranks stands for ``2**z`` signed vectors.

All products are formed left to right over the nonzero coordinates, starting
from 1.0, with per-coordinate factors ``g_j / m**alpha``.  ``decay_value``,
the depth-first counter and the best-first cursor therefore produce
bit-identical values for the same profile.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

from .errors import CapExceeded, DomainError
from .numerics import partial_zeta, zeta
from .weights import WeightFamily, weights

DEFAULT_CAP = 10**8

P2 = 2
PINF = math.inf
ALL, STD = "all", "std"
ABS, NORM = "abs", "norm"


def _norm_p(p):
    if isinstance(p, str):
        p = p.strip().lower()
        p = math.inf if p in ("inf", "infinity", "oo") else float(p)
    p = float(p)
    if p != 2 and p != math.inf:
        raise DomainError(f"p must be 2 or inf, got {p}")
    return 2 if p == 2 else math.inf


@dataclass(frozen=True)
class ProblemSpec:
    d: int
    alpha: float
    family: WeightFamily
    p: float = 2
    info_class: str = ALL
    criterion: str = ABS
    gammas: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d}")
        if not self.alpha > 1 or math.isinf(self.alpha):
            raise DomainError(f"alpha must be a real > 1, got {self.alpha}")
        set_ = object.__setattr__
        set_(self, "d", int(self.d))
        set_(self, "alpha", float(self.alpha))
        set_(self, "p", _norm_p(self.p))
        info_class = str(self.info_class).lower()
        criterion = str(self.criterion).lower()
        if info_class not in (ALL, STD):
            raise DomainError(f"info_class must be 'all' or 'std', got {self.info_class!r}")
        if criterion not in (ABS, NORM):
            raise DomainError(f"criterion must be 'abs' or 'norm', got {self.criterion!r}")
        set_(self, "info_class", info_class)
        set_(self, "criterion", criterion)
        set_(self, "gammas", tuple(weights(self.family, self.d)))

    def with_(self, **changes) -> "ProblemSpec":
        return replace(self, **changes)


def _factor(g, m, alpha):
    return g / float(m) ** alpha


def decay_value(spec: ProblemSpec, h: Sequence[int]) -> float:
    """``r_{d,alpha,gamma}(h)``."""
    if len(h) != spec.d:
        raise ValueError(f"h has length {len(h)}, expected d = {spec.d}")
    value = 1.0
    for g, hj in zip(spec.gammas, h):
        if hj:
            value = value * _factor(g, abs(int(hj)), spec.alpha)
    return value


def log_total_sum(spec: ProblemSpec) -> float:
    z = zeta(spec.alpha)
    return math.fsum(math.log1p(2.0 * z * g) for g in spec.gammas)


def total_sum(spec: ProblemSpec) -> float:
    """Sum of all eigenvalues, ``prod_j (1 + 2 zeta(alpha) g_j)``.

    Raises OverflowError past double range; use :func:`log_total_sum` then.
    """
    z = zeta(spec.alpha)
    value = 1.0
    for g in spec.gammas:
        value *= 1.0 + 2.0 * z * g
    if math.isinf(value):
        raise OverflowError("total eigenvalue sum exceeds double range; use log_total_sum")
    return value


class HeadStats(NamedTuple):
    """Aggregate over eigenvalues strictly above a threshold ``T``.

    ``min_above`` is the smallest eigenvalue ``> T`` and ``max_below`` the
    largest eigenvalue ``<= T`` (0.0 if never observed, which cannot happen
    for ``T > 0``).
    """
    count: int
    total: float
    min_above: float
    max_below: float


def scan_above(spec: ProblemSpec, T: float, cap: int = DEFAULT_CAP) -> HeadStats:
    """Depth-first aggregation of ``{h : r(h) > T}``.

    Each node is a prefix of ranks with running product ``P > T``; the node
    itself counts the profile with zeros in all later coordinates.  Because
    weights are non-increasing, once ``P * g_j <= T`` no later coordinate can
    be nonzero either.  The last coordinate is handled in closed form.
    """
    if not 0.0 < T < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {T}")
    gs, alpha, d = spec.gammas, spec.alpha, spec.d
    st = {"count": 0, "s": 0.0, "c": 0.0, "lo": 1.0, "hi": 0.0}

    def add(x):
        # Neumaier summation
        s = st["s"]
        t = s + x
        if abs(s) >= abs(x):
            st["c"] += (s - t) + x
        else:
            st["c"] += (x - t) + s
        st["s"] = t

    def bump(n):
        st["count"] += n
        if st["count"] > cap:
            raise CapExceeded(f"more than {cap} eigenvalues exceed {T!r}", lower_bound=cap)

    def visit(j, P, mult):
        # P is the product over a prefix whose last nonzero coordinate is j-1
        bump(mult)
        add(mult * P)
        if P < st["lo"]:
            st["lo"] = P
        for k in range(j, d):
            g = gs[k]
            first = P * _factor(g, 1, alpha)
            if not first > T:
                if first > st["hi"]:
                    st["hi"] = first
                return
            if k == d - 1:
                m = max(1, int((P * g / T) ** (1.0 / alpha)))
                while P * _factor(g, m + 1, alpha) > T:
                    m += 1
                while m > 1 and not P * _factor(g, m, alpha) > T:
                    m -= 1
                bump(2 * m * mult)
                add(2 * mult * P * g * partial_zeta(alpha, m))
                last = P * _factor(g, m, alpha)
                if last < st["lo"]:
                    st["lo"] = last
                nxt = P * _factor(g, m + 1, alpha)
                if nxt > st["hi"]:
                    st["hi"] = nxt
                return
            m = 1
            while True:
                v = P * _factor(g, m, alpha)
                if not v > T:
                    if v > st["hi"]:
                        st["hi"] = v
                    break
                visit(k + 1, v, 2 * mult)
                m += 1

    visit(0, 1.0, 1)
    return HeadStats(st["count"], st["s"] + st["c"], st["lo"], st["hi"])


def count_above(spec: ProblemSpec, T: float, cap: int = DEFAULT_CAP) -> int:
    """``#{h in Z^d : r(h) > T}`` (strict)."""
    return scan_above(spec, T, cap).count


def sum_above(spec: ProblemSpec, T: float, cap: int = DEFAULT_CAP) -> float:
    """Sum of all eigenvalues ``> T``."""
    return scan_above(spec, T, cap).total


class SpectrumCursor:
    """Best-first stream of eigenvalue blocks in non-increasing order.

    Each block is one non-negative rank profile: ``(value, 2**z)``.  Profiles
    form a tree (a child raises the rank of its last nonzero coordinate, or of
    any later one), so every profile is generated exactly once and children
    never exceed their parent.

    Not safe for concurrent use.
    """

    def __init__(self, spec: ProblemSpec, cap: int = DEFAULT_CAP):
        self.spec = spec
        self.cap = cap
        self.emitted_count = 0
        self._sum = 0.0
        self._comp = 0.0
        # (-value, ranks, last nonzero index, product before that index, 2**z)
        self._heap = [(-1.0, (0,) * spec.d, 0, 1.0, 1)]

    @property
    def emitted_sum(self) -> float:
        return self._sum + self._comp

    def peek(self):
        if not self._heap:
            raise StopIteration
        top = self._heap[0]
        return -top[0], top[4]

    def next_eigenvalue(self):
        value, mult = self.peek()
        if self.emitted_count + mult > self.cap:
            raise CapExceeded(
                f"emitting more than {self.cap} eigenvalues", lower_bound=self.emitted_count
            )
        neg, ranks, last, prefix, _ = heapq.heappop(self._heap)
        self._push_children(value, ranks, last, prefix, mult)
        self.emitted_count += mult
        x = value * mult
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t
        return value, mult

    def _push_children(self, value, ranks, last, prefix, mult):
        gs, alpha, d = self.spec.gammas, self.spec.alpha, self.spec.d
        r = ranks[last]
        child = ranks[:last] + (r + 1,) + ranks[last + 1:]
        v = prefix * _factor(gs[last], r + 1, alpha)
        heapq.heappush(self._heap, (-v, child, last, prefix, mult if r else 2 * mult))
        for i in range(last + 1, d):
            child = ranks[:i] + (1,) + ranks[i + 1:]
            v = value * _factor(gs[i], 1, alpha)
            heapq.heappush(self._heap, (-v, child, i, value, 2 * mult))

    def __iter__(self):
        return self

    def __next__(self):
        return self.next_eigenvalue()


def next_eigenvalue(cursor: SpectrumCursor):
    return cursor.next_eigenvalue()


def head_sum(spec: ProblemSpec, n: int, cap: int = DEFAULT_CAP) -> float:
    """Sum of the ``n`` largest eigenvalues (blocks split exactly)."""
    cur = SpectrumCursor(spec, cap=max(cap, n))
    partial = 0.0
    while cur.emitted_count < n:
        value, mult = cur.peek()
        need = n - cur.emitted_count
        if mult > need:
            partial = need * value
            break
        cur.next_eigenvalue()
    return cur.emitted_sum + partial


def eigenvalue(spec: ProblemSpec, k: int, cap: int = DEFAULT_CAP) -> float:
    """The ``k``-th largest eigenvalue ``lambda_{d,k}`` (1-based)."""
    if k < 1:
        raise ValueError("eigenvalues are indexed from 1")
    cur = SpectrumCursor(spec, cap=cap)
    while True:
        value, mult = cur.peek()
        if cur.emitted_count + mult >= k:
            return value
        cur.next_eigenvalue()
