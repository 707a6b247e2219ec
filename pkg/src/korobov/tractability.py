"""Tractability verdicts for product-weighted Korobov approximation.

Conditions are evaluated on the weight family in closed form (see
:mod:`korobov.weights`).  Where only a necessary and a sufficient condition
are known and they disagree, the verdict is an :class:`OpenGap` carrying both
truth values; the classifier never resolves such gaps on its own.  After the
per-notion rules are applied, verdicts are closed under the implication chain
SPT => PT => QPT => UWT => (sigma,tau)-WT (sigma <= 1), which can upgrade a
gap to Holds (an implied notion) or downgrade it to Fails (a failing
consequence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import DomainError, UnsupportedCriterion
from .spectrum import ABS, ALL, NORM, STD
from .weights import (
    WeightFamily,
    gamma_inf,
    power_sum_converges,
    power_sum_log_bounded,
    power_sum_vanishes,
    power_sum_vanishes_all_sigma,
    sum_exponent,
    t_exponent,
    u_exponent,
    u_exponent_below_one_all_sigma,
)

HOLDS, FAILS, OPEN = "holds", "fails", "open"
DEFAULT_SIGMAS = (0.25, 0.5, 1.0)
SIGMA_ABOVE_ONE = "(sigma>1,tau)-WT"
CHAIN = ("SPT", "PT", "QPT", "UWT")


@dataclass(frozen=True)
class Verdict:
    status: str
    nec: Optional[bool] = None
    suff: Optional[bool] = None

    @classmethod
    def iff(cls, cond):
        return cls(HOLDS if cond else FAILS)

    @classmethod
    def gap(cls, nec, suff):
        if suff:
            return cls(HOLDS)
        if not nec:
            return cls(FAILS)
        return cls(OPEN, nec=True, suff=False)

    def to_json(self):
        if self.status == OPEN:
            return {"open": {"nec": self.nec, "suff": self.suff}}
        return self.status

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, dict):
            o = obj["open"]
            return cls(OPEN, nec=o["nec"], suff=o["suff"])
        return cls(obj)

    def __str__(self):
        if self.status == OPEN:
            return f"OpenGap(nec={self.nec}, suff={self.suff})"
        return self.status.capitalize()


def sigma_key(sigma: float) -> str:
    return f"({sigma:g},tau)-WT"


@dataclass
class TractabilityReport:
    family: str
    alpha: float
    p: Union[int, float]
    info_class: str
    criterion: str
    verdicts: dict = field(default_factory=dict)
    spt_exponent: Optional[float] = None
    qpt_exponent: Optional[float] = None
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "spec": {
                "family": self.family,
                "alpha": self.alpha,
                "p": "inf" if self.p == math.inf else self.p,
                "info_class": self.info_class,
                "criterion": self.criterion,
            },
            "verdicts": {k: v.to_json() for k, v in self.verdicts.items()},
            "tau_star": self.spt_exponent,
            "t_star": self.qpt_exponent,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, obj):
        s = obj["spec"]
        return cls(
            family=s["family"],
            alpha=s["alpha"],
            p=math.inf if s["p"] == "inf" else s["p"],
            info_class=s["info_class"],
            criterion=s["criterion"],
            verdicts={k: Verdict.from_json(v) for k, v in obj["verdicts"].items()},
            spt_exponent=obj["tau_star"],
            qpt_exponent=obj["t_star"],
            notes=list(obj.get("notes", [])),
        )


def _l2_rules(family, info_class, sigmas):
    v, notes = {}, []
    if info_class == ALL:
        s = sum_exponent(family).value
        gi = gamma_inf(family)
        v["SPT"] = v["PT"] = Verdict.iff(s < math.inf)
        notes.append(f"SPT, PT: s_gamma < inf (s_gamma = {s:g})")
        for key in ("QPT", "UWT", "WT"):
            v[key] = Verdict.iff(gi < 1.0)
        for sg in sigmas:
            v[sigma_key(sg)] = Verdict.iff(gi < 1.0)
        notes.append(f"QPT, UWT, WT, (sigma,tau)-WT: gamma_inf < 1 (gamma_inf = {gi:g})")
    else:
        v["SPT"] = Verdict.iff(power_sum_converges(family))
        notes.append("SPT: sum_j gamma_j < inf")
        v["PT"] = v["QPT"] = Verdict.iff(power_sum_log_bounded(family))
        notes.append("PT, QPT: limsup sum_{j<=d} gamma_j / ln(d+1) < inf")
        v["UWT"] = Verdict.iff(power_sum_vanishes_all_sigma(family))
        notes.append("UWT: lim sum_{j<=d} gamma_j / d^sigma = 0 for all sigma in (0,1]")
        v["WT"] = Verdict.iff(power_sum_vanishes(family, 1.0))
        notes.append("WT: lim sum_{j<=d} gamma_j / d = 0")
        for sg in sigmas:
            v[sigma_key(sg)] = Verdict.iff(power_sum_vanishes(family, sg))
    v[SIGMA_ABOVE_ONE] = Verdict(HOLDS)
    return v, notes


def _linf_rules(family, sigmas):
    v, notes = {}, []
    s = sum_exponent(family).value
    t = t_exponent(family).value
    v["SPT"] = Verdict.iff(s < 1.0)
    notes.append(f"SPT: s_gamma < 1 (s_gamma = {s:g})")
    v["PT"] = Verdict.iff(t < 1.0)
    notes.append(f"PT: t_gamma < 1 (t_gamma = {t:g})")
    # no sufficient condition for QPT beyond PT itself
    v["QPT"] = Verdict.gap(nec=power_sum_log_bounded(family), suff=t < 1.0)
    notes.append("QPT: nec. limsup sum_{j<=d} gamma_j / ln(d+1) < inf; no separate suff. condition known")
    v["UWT"] = Verdict.gap(
        nec=power_sum_vanishes_all_sigma(family), suff=u_exponent_below_one_all_sigma(family)
    )
    notes.append("UWT: nec. lim sum gamma_j / d^sigma = 0 for all sigma in (0,1]; suff. u_{gamma,sigma} < 1 for all sigma")
    u1 = u_exponent(family, 1.0).value
    v["WT"] = Verdict.gap(nec=power_sum_vanishes(family, 1.0), suff=u1 < 1.0)
    notes.append(f"WT: nec. lim sum gamma_j / d = 0; suff. u_(gamma,1) < 1 (u = {u1:g})")
    for sg in sigmas:
        us = u_exponent(family, sg).value
        v[sigma_key(sg)] = Verdict.gap(nec=power_sum_vanishes(family, sg), suff=us < 1.0)
    v[SIGMA_ABOVE_ONE] = Verdict(HOLDS)
    return v, notes


def _sandwich(lower, upper):
    """Verdicts for 2 < p < inf: necessary side from L2, sufficient from L-inf."""
    out = {}
    for key, lo in lower.items():
        hi = upper[key]
        out[key] = Verdict.gap(nec=lo.status != FAILS, suff=hi.status == HOLDS)
    return out


def _close_hierarchy(v, sigmas):
    order = list(CHAIN)
    weak = [sigma_key(s) for s in sigmas] + ["WT"]
    changed = True
    while changed:
        changed = False

        def set_(key, status):
            nonlocal changed
            if v[key].status != status:
                if v[key].status != OPEN:
                    raise RuntimeError(f"inconsistent tractability verdicts at {key}")
                v[key] = Verdict(status)
                changed = True

        for a, b in zip(order, order[1:]):
            if v[a].status == HOLDS:
                set_(b, HOLDS)
            if v[b].status == FAILS:
                set_(a, FAILS)
        for w in weak:
            if v["UWT"].status == HOLDS:
                set_(w, HOLDS)
            if v[w].status == FAILS:
                set_("UWT", FAILS)
    return v


def classify(
    family: WeightFamily,
    alpha: float,
    p=2,
    info_class: str = ALL,
    sigma_grid: Sequence[float] = DEFAULT_SIGMAS,
    criterion: str = ABS,
) -> TractabilityReport:
    """Per-notion verdicts for ``APP_p`` with the given weights.

    ``p`` may be 2, ``math.inf`` or any real in (2, inf); the latter is only
    answered for the absolute criterion.
    """
    if not alpha > 1 or math.isinf(alpha):
        raise DomainError(f"alpha must be a real > 1, got {alpha}")
    p = math.inf if str(p).lower() in ("inf", "infinity") else float(p)
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    info_class, criterion = info_class.lower(), criterion.lower()
    if info_class not in (ALL, STD) or criterion not in (ABS, NORM):
        raise DomainError("unknown information class or error criterion")
    sigmas = tuple(sorted(set(float(s) for s in sigma_grid)))
    if any(not 0.0 < s <= 1.0 for s in sigmas):
        raise DomainError("sigma_grid values must lie in (0, 1]")
    sigmas = tuple(s for s in sigmas if s != 1.0)  # sigma = 1 is WT itself

    if p == 2:
        verdicts, notes = _l2_rules(family, info_class, sigmas)
    elif p == math.inf:
        verdicts, notes = _linf_rules(family, sigmas)
    else:
        if criterion == NORM:
            raise UnsupportedCriterion(
                "normalized criterion for 2 < p < inf is open; only the absolute criterion is classified"
            )
        lower, notes = _l2_rules(family, info_class, sigmas)
        upper, unotes = _linf_rules(family, sigmas)
        verdicts = _sandwich(lower, upper)
        notes = [f"necessary (L2): {n}" for n in notes] + [f"sufficient (Linf): {n}" for n in unotes]
    verdicts = _close_hierarchy(verdicts, sigmas)
    verdicts[sigma_key(1.0)] = verdicts["WT"]
    pv = 2 if p == 2 else p
    report = TractabilityReport(
        family=family.spec_string(),
        alpha=float(alpha),
        p=pv,
        info_class=info_class,
        criterion=criterion,
        verdicts=verdicts,
        notes=notes,
    )
    if verdicts["SPT"].status == HOLDS:
        report.spt_exponent = spt_exponent_value(family, alpha, pv, info_class)
    if p == 2 and info_class == ALL and verdicts["QPT"].status == HOLDS:
        report.qpt_exponent = qpt_exponent_value(family, alpha)
    return report


def spt_exponent_value(family: WeightFamily, alpha: float, p=2, info_class: str = ALL):
    """``2 max(s_gamma, 1/alpha)`` when SPT holds for L2; None otherwise."""
    if p != 2:
        return None
    if info_class == ALL:
        holds = sum_exponent(family).is_finite
    else:
        holds = power_sum_converges(family)
    if not holds:
        return None
    return 2.0 * max(sum_exponent(family).value, 1.0 / alpha)


def qpt_exponent_value(family: WeightFamily, alpha: float):
    """``2 max(1/alpha, 1/ln(1/gamma_inf))`` for L2 with arbitrary linear
    information, taking the second term as 0 when ``gamma_inf = 0``; None
    when QPT fails (``gamma_inf = 1``)."""
    sum_exponent(family)  # rejects truncated families
    gi = gamma_inf(family)
    if gi >= 1.0:
        return None
    second = 0.0 if gi == 0.0 else 1.0 / math.log(1.0 / gi)
    return 2.0 * max(1.0 / alpha, second)
