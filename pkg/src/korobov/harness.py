"""Experiment engine: complexity curves over (eps, d) grids, empirical SPT
exponent fits, a brute-force spectrum oracle and bound-verification sweeps."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .complexity import (
    SplineOverflow,
    info_complexity,
    optimize_spline_log_m,
    qpt_lower_bound,
    spline_n_sufficient,
)
from .errors import CapExceeded, InsufficientData
from .numerics import fit_loglog_slope
from .spectrum import ABS, ALL, DEFAULT_CAP, NORM, ProblemSpec
from .weights import ExponentValue

CSV_HEADER = "d,eps,n,capped,runtime_ms"
ORACLE_LIMIT = 10**8


def brute_force_spectrum(spec: ProblemSpec, box: int):
    """All ``r(h)`` for ``h`` in ``[-box, box]**d``, grouped by exact value.

    Returns a list of ``(value, count)`` sorted by decreasing value.  The list
    agrees with the true spectrum above any threshold ``T`` with
    ``g_j / box**alpha < T`` for all j.
    """
    d, alpha = spec.d, spec.alpha
    if (2 * box + 1) ** d > ORACLE_LIMIT:
        raise CapExceeded(f"box of side {2 * box + 1} in dimension {d} is too large")
    h = np.abs(np.arange(-box, box + 1))
    vals = np.ones(1)
    for g in spec.gammas:
        f = np.ones(h.shape)
        nz = h > 0
        f[nz] = g / h[nz].astype(np.float64) ** alpha
        vals = np.multiply.outer(vals, f).ravel()
    uniq, counts = np.unique(vals, return_counts=True)
    return [(float(v), int(c)) for v, c in zip(uniq[::-1], counts[::-1])]


def certified_box(spec: ProblemSpec, T: float) -> int:
    """Smallest ``H`` with ``g_1 / H**alpha < T``."""
    g1 = spec.gammas[0]
    H = max(1, int((g1 / T) ** (1.0 / spec.alpha)))
    while not g1 / float(H) ** spec.alpha < T:
        H += 1
    return H


@dataclass
class ComplexityCurve:
    template: ProblemSpec
    grid: list
    values: list
    runtime_ms: list
    errors: list = field(default_factory=list)

    def rows(self, timing=True):
        for (d, eps), res, ms in zip(self.grid, self.values, self.runtime_ms):
            if res is None:
                continue
            yield d, eps, res.n, res.capped, (ms if timing else 0.0)

    def to_csv(self, timing=True) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        w = csv.writer(buf, lineterminator="\n")
        for d, eps, n, capped, ms in self.rows(timing):
            w.writerow([d, repr(float(eps)), n, "true" if capped else "false", repr(round(ms, 3))])
        return buf.getvalue()

    def to_json(self, timing=True) -> dict:
        t = self.template
        return {
            "template": {
                "family": t.family.spec_string(),
                "alpha": t.alpha,
                "p": "inf" if t.p == math.inf else t.p,
                "info_class": t.info_class,
                "criterion": t.criterion,
            },
            "rows": [
                {"d": d, "eps": eps, "n": n, "capped": capped, "runtime_ms": round(ms, 3)}
                for d, eps, n, capped, ms in self.rows(timing)
            ],
            "errors": [list(e) for e in self.errors],
        }


def run_curve(
    template: ProblemSpec,
    eps_list: Sequence[float],
    d_list: Sequence[int],
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> ComplexityCurve:
    """Information complexity for every ``(d, eps)`` cell, row-major over d then eps.

    Per-cell exceptions are recorded in ``errors`` and leave a None value.
    """
    if not eps_list or not d_list:
        raise ValueError("eps_list and d_list must be non-empty")
    grid = [(int(d), float(eps)) for d in d_list for eps in eps_list]

    def cell(de):
        d, eps = de
        t0 = time.perf_counter()
        try:
            res = info_complexity(template.with_(d=d), eps, cap=cap)
            err = None
        except Exception as exc:  # recorded, not fatal
            res, err = None, f"{type(exc).__name__}: {exc}"
        return res, (time.perf_counter() - t0) * 1e3, err

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            out = list(pool.map(cell, grid))
    else:
        out = [cell(de) for de in grid]
    errors = [(d, eps, err) for (d, eps), (_, _, err) in zip(grid, out) if err]
    return ComplexityCurve(template, grid, [o[0] for o in out], [o[1] for o in out], errors)


def fit_spt_exponent(curve: ComplexityCurve):
    """Fit ``ln n`` against ``ln(1/eps)`` per dimension; ``tau_hat`` is the
    largest per-d slope.  Capped cells are excluded.

    Returns ``(tau_hat, [(d, slope), ...])``.
    """
    by_d = {}
    for (d, eps), res in zip(curve.grid, curve.values):
        by_d.setdefault(d, [])
        if res is not None and not res.capped:
            by_d[d].append((1.0 / eps, float(res.n)))
    slopes = []
    for d, pts in by_d.items():
        if len({x for x, _ in pts}) < 3:
            raise InsufficientData(f"d = {d} has fewer than 3 uncapped eps values")
        slopes.append((d, fit_loglog_slope(pts)[0]))
    return max(s for _, s in slopes), slopes


@dataclass
class BoundCheck:
    d: int
    eps: float
    lower: float
    n_norm: Optional[int]
    n_abs: Optional[int]
    log_upper: Optional[float]
    upper: Optional[int]
    lam: Optional[float]
    status: str  # "pass" | "fail" | "skipped"
    failures: list = field(default_factory=list)

    @property
    def margins(self):
        out = {}
        if self.n_norm is not None:
            out["norm_minus_lower"] = self.n_norm - self.lower
        if self.n_norm is not None and self.n_abs is not None:
            out["abs_minus_norm"] = self.n_abs - self.n_norm
        if self.n_abs is not None and self.log_upper is not None:
            out["log_upper_minus_log_abs"] = self.log_upper - math.log(self.n_abs)
        return out


def verify_bounds(
    template: ProblemSpec,
    eps_list: Sequence[float],
    d_list: Sequence[int],
    cap: int = DEFAULT_CAP,
    total_sum_scale: float = 1.0,
):
    """Check ``lower <= n_norm <= n_abs <= n_spline`` per cell for p = inf.

    ``lower = (1 - eps**2) * total_sum``, ``n_norm``/``n_abs`` are exact
    complexities for arbitrary linear information, and ``n_spline`` is the
    prime node count from the lattice spline bound at the optimised lambda
    (compared in log space when it exceeds 64 bits).  ``total_sum_scale`` is
    a fault-injection hook applied to the lower bound only.
    """
    base = template.with_(p=math.inf, info_class=ALL)
    out = []
    for d in d_list:
        for eps in eps_list:
            spec = base.with_(d=int(d))
            lower = qpt_lower_bound(spec, eps) * total_sum_scale
            r_norm = info_complexity(spec.with_(criterion=NORM), eps, cap=cap)
            r_abs = info_complexity(spec.with_(criterion=ABS), eps, cap=cap)
            lam, log_m = optimize_spline_log_m(spec, eps)
            try:
                upper = spline_n_sufficient(spec, eps, lam)
            except SplineOverflow:
                upper = None
            chk = BoundCheck(int(d), float(eps), lower, None, None, log_m, upper, lam, "skipped")
            if r_norm.capped or r_abs.capped:
                out.append(chk)
                continue
            chk.n_norm, chk.n_abs = r_norm.n, r_abs.n
            if not lower <= chk.n_norm:
                chk.failures.append("lower > n_norm")
            if not chk.n_norm <= chk.n_abs:
                chk.failures.append("n_norm > n_abs")
            if upper is not None:
                if not chk.n_abs <= upper:
                    chk.failures.append("n_abs > n_spline")
            elif not math.log(chk.n_abs) <= log_m:
                chk.failures.append("n_abs > n_spline")
            chk.status = "fail" if chk.failures else "pass"
            out.append(chk)
    return out


def estimate_exponent(partial_sums_ok, lo=1e-3, hi=10.0, iters=40):
    """Bisect a monotone predicate on kappa; returns an ExponentValue bracket.

    ``partial_sums_ok(kappa)`` must be True above the exponent and False below.
    Used as a numerical cross-check of the closed-form exponents.
    """
    if not partial_sums_ok(hi):
        return ExponentValue(math.inf, "numerical_estimate", (hi, math.inf))
    if partial_sums_ok(lo):
        return ExponentValue(0.0, "numerical_estimate", (0.0, lo))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if partial_sums_ok(mid):
            hi = mid
        else:
            lo = mid
    return ExponentValue(0.5 * (lo + hi), "numerical_estimate", (lo, hi))

