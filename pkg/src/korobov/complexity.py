"""n-th minimal errors, initial errors and information complexity for
L2 / L-infinity approximation, plus the computable bounds used for the
standard-information class.

For arbitrary linear information the n-th minimal error is
``sqrt(lambda_{n+1})`` (p = 2) or ``sqrt(sum_{k>n} lambda_k)`` (p = inf).
Point evaluations admit no exact formula; the only quantities offered for
them are the lattice-rule spline error bound and the node count it implies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import CapExceeded, DomainError, UnsupportedClass
from .numerics import next_prime, zeta
from .spectrum import (
    ALL,
    DEFAULT_CAP,
    NORM,
    ProblemSpec,
    SpectrumCursor,
    log_total_sum,
    scan_above,
    total_sum,
)
from .weights import WeightFamily, weights

STD_GAP = "only bounds available for Lambda^std (point evaluations): no exact formula for the n-th minimal error"


@dataclass(frozen=True)
class ComplexityResult:
    """Information complexity with the data that witnesses it.

    For p = 2: ``lam_n`` and ``lam_next`` bracket ``eps**2``
    (``lam_n > eps**2 >= lam_next``).  For p = inf: ``tail <= target < tail_prev``
    where ``target = eps**2 * CRI**2``.  When ``capped`` is set, ``n`` is only
    a certified lower bound and the witness fields may be None.
    """
    n: int
    capped: bool = False
    eps: Optional[float] = None
    lam_n: Optional[float] = None
    lam_next: Optional[float] = None
    tail: Optional[float] = None
    tail_prev: Optional[float] = None
    target: Optional[float] = None


def _check_eps(eps):
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")


def _require_all(spec):
    if spec.info_class != ALL:
        raise UnsupportedClass(STD_GAP)


def initial_error(spec: ProblemSpec) -> float:
    """Norm of the embedding: 1 for p = 2, ``sqrt(total_sum)`` for p = inf.

    Returns ``inf`` when even the square root leaves double range; the
    logarithm is available from :func:`korobov.spectrum.log_total_sum`.
    """
    if spec.p == 2:
        return 1.0
    try:
        return math.sqrt(total_sum(spec))
    except OverflowError:
        half = 0.5 * log_total_sum(spec)
        return math.exp(half) if half < 709.0 else math.inf


def minimal_error_all(spec: ProblemSpec, n: int, cap: int = DEFAULT_CAP) -> float:
    """``e(n, APP_{d,p}, Lambda^all)``."""
    _require_all(spec)
    if n < 0:
        raise ValueError("n must be non-negative")
    cur = SpectrumCursor(spec, cap=max(cap, n + 1))
    if spec.p == 2:
        while True:
            value, mult = cur.peek()
            if cur.emitted_count + mult > n:
                return math.sqrt(value)
            cur.next_eigenvalue()
    total = total_sum(spec)
    partial = 0.0
    while cur.emitted_count < n:
        value, mult = cur.peek()
        need = n - cur.emitted_count
        if mult > need:
            partial = need * value
            break
        cur.next_eigenvalue()
    return math.sqrt(max(total - (cur.emitted_sum + partial), 0.0))


def info_complexity(spec: ProblemSpec, eps: float, cap: int = DEFAULT_CAP) -> ComplexityResult:
    """``n(eps, APP_{d,p}, Lambda^all)`` under the problem's error criterion.

    A run that would exceed ``cap`` eigenvalues returns ``capped=True`` with
    ``n = cap`` as a certified lower bound.
    """
    _check_eps(eps)
    _require_all(spec)
    if spec.p == 2:
        return _complexity_l2(spec, eps, cap)
    return _complexity_linf(spec, eps, cap)


def _complexity_l2(spec, eps, cap):
    T = eps * eps
    try:
        stats = scan_above(spec, T, cap)
    except CapExceeded as exc:
        return ComplexityResult(n=exc.lower_bound, capped=True, eps=eps)
    return ComplexityResult(
        n=stats.count, eps=eps, lam_n=stats.min_above, lam_next=stats.max_below
    )


def _complexity_linf(spec, eps, cap):
    try:
        total = total_sum(spec)
    except OverflowError:
        return ComplexityResult(n=cap, capped=True, eps=eps)
    target = eps * eps * (total if spec.criterion == NORM else 1.0)
    cur = SpectrumCursor(spec, cap=cap)
    last = None
    while True:
        value, mult = cur.peek()
        tail_before = total - cur.emitted_sum
        if last is not None and tail_before <= target:
            # rounding put the previous block's exit exactly on the boundary
            return ComplexityResult(
                n=cur.emitted_count, eps=eps, tail=tail_before,
                tail_prev=tail_before + last, target=target,
            )
        if tail_before - mult * value <= target:
            k = max(1, math.ceil((tail_before - target) / value))
            while tail_before - k * value > target:
                k += 1
            while k > 1 and tail_before - (k - 1) * value <= target:
                k -= 1
            n = cur.emitted_count + k
            if n > cap:
                return ComplexityResult(n=cap, capped=True, eps=eps, target=target)
            return ComplexityResult(
                n=n,
                eps=eps,
                tail=tail_before - k * value,
                tail_prev=tail_before - (k - 1) * value,
                target=target,
            )
        try:
            last, _ = cur.next_eigenvalue()
        except CapExceeded:
            return ComplexityResult(n=cap, capped=True, eps=eps, target=target)


def qpt_lower_bound(spec: ProblemSpec, eps: float) -> float:
    """``(1 - eps**2) * sum_k lambda_k``, a lower bound on ``n_norm`` for p = inf.

    Follows from ``lambda_k <= 1``: the first n eigenvalues sum to at most n.
    """
    _check_eps(eps)
    try:
        return (1.0 - eps * eps) * total_sum(spec)
    except OverflowError:
        return math.inf


# --- lattice-rule spline bound ----------------------------------------------

@dataclass(frozen=True)
class SplineBoundParams:
    lambda_param: float
    n: int
    d: int
    alpha: float
    family: WeightFamily

    def __post_init__(self):
        _check_lambda(self.lambda_param, self.alpha)
        if self.n < 1:
            raise DomainError("n must be positive")


class SplineOverflow(OverflowError):
    """The sufficient node count does not fit a 64-bit integer; ``log_m`` is ``ln M``."""

    def __init__(self, log_m):
        super().__init__(f"sufficient node count exp({log_m:.6g}) exceeds integer range")
        self.log_m = log_m


def _check_lambda(lam, alpha):
    if not 0.5 < lam < alpha / 2.0:
        raise DomainError(f"lambda must lie in (1/2, alpha/2) = (0.5, {alpha / 2}), got {lam}")


def spline_rate(lam: float) -> float:
    """Exponent of n in the spline bound: ``lam (2 lam - 1) / (4 lam - 1)``."""
    return lam * (2.0 * lam - 1.0) / (4.0 * lam - 1.0)


def _log_weight_product(gammas, alpha, lam):
    """``ln prod_j (1 + 2**(2 alpha + 1) g_j**(1/(2 lam)) zeta(alpha/(2 lam)))**(2 lam)``."""
    z = zeta(alpha / (2.0 * lam))
    scale = 2.0 ** (2.0 * alpha + 1.0) * z
    return 2.0 * lam * math.fsum(math.log1p(scale * g ** (1.0 / (2.0 * lam))) for g in gammas)


def log_spline_error_bound(params: SplineBoundParams) -> float:
    lam = params.lambda_param
    gammas = weights(params.family, params.d)
    return (
        0.5 * math.log(2.0)
        - spline_rate(lam) * math.log(params.n)
        + _log_weight_product(gammas, params.alpha, lam)
    )


def spline_error_bound(params: SplineBoundParams) -> float:
    """Worst-case L-inf error bound of the lattice-based spline algorithm with
    ``n`` nodes (may be ``inf`` if it overflows double range)."""
    log_b = log_spline_error_bound(params)
    return math.exp(log_b) if log_b < 709.0 else math.inf


def spline_log_m(spec: ProblemSpec, eps: float, lambda_param: float) -> float:
    """``ln`` of the (pre-ceiling) node count that pushes the spline bound to eps."""
    _check_eps(eps)
    _check_lambda(lambda_param, spec.alpha)
    inner = math.log(math.sqrt(2.0) / eps) + _log_weight_product(spec.gammas, spec.alpha, lambda_param)
    return inner / spline_rate(lambda_param)


_M_SLACK = 1e-12


def spline_n_sufficient(spec: ProblemSpec, eps: float, lambda_param: float) -> int:
    """Smallest prime ``n >= M`` with ``M = ceil(exp(spline_log_m))``.

    ``n`` lies in ``[M, 2M]`` and guarantees an absolute L-inf error ``<= eps``
    with point evaluations.  Raises :class:`SplineOverflow` past 2**64.

    ``M`` is inflated by a relative ``1e-12`` before the ceiling so that
    double rounding in ``exp(log_m)`` can only overshoot the exact value.
    """
    log_m = spline_log_m(spec, eps, lambda_param)
    if log_m >= 44.0:  # e**44 > 2**63
        raise SplineOverflow(log_m)
    m = max(1, math.ceil(math.exp(log_m) * (1.0 + _M_SLACK)))
    try:
        return next_prime(m)
    except OverflowError:
        raise SplineOverflow(log_m) from None


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def optimize_spline_lambda(spec: ProblemSpec, eps: float, margin: float = 1e-3, tol: float = 1e-7):
    """Choose ``lambda`` in ``(1/2, alpha/2)`` minimising ``ln M``.

    Golden-section search on the interval shrunk by ``margin`` at both ends,
    then compared against the midpoint and quartiles (unimodality is not
    assumed).  Returns ``(lambda, n)``; ``n`` is computed by
    :func:`spline_n_sufficient` and may raise :class:`SplineOverflow`.
    """
    lam, _ = optimize_spline_log_m(spec, eps, margin, tol)
    return lam, spline_n_sufficient(spec, eps, lam)


def optimize_spline_log_m(spec: ProblemSpec, eps: float, margin: float = 1e-3, tol: float = 1e-7):
    """Like :func:`optimize_spline_lambda` but returns ``(lambda, ln M)``."""
    lo, hi = 0.5 + margin, spec.alpha / 2.0 - margin
    if lo >= hi:
        raise DomainError(f"alpha = {spec.alpha} leaves no room for lambda after the margin")

    def f(x):
        return spline_log_m(spec, eps, x)

    a, b = lo, hi
    c, e = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    while b - a > tol:
        if fc <= fe:
            b, e, fe = e, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _GOLDEN * (b - a)
            fe = f(e)
    candidates = [(fc, c), (fe, e)]
    for frac in (0.25, 0.5, 0.75):
        x = lo + frac * (hi - lo)
        candidates.append((f(x), x))
    best_f, best_x = min(candidates)
    return best_x, best_f
