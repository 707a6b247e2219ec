"""Product weight sequences ``1 >= g_1 >= g_2 >= ... > 0`` and their decay
exponents.

Every asymptotic condition used downstream is a statement about power sums
``S_k(d) = sum_{j<=d} g_j**k``.  For the supported families these are decided
in closed form:

* ``poly`` (``c * j**-beta``): ``g_j**k`` is again polynomial with exponent
  ``beta*k``.  ``S_k`` converges iff ``beta*k > 1``, grows like ``ln d`` at
  ``beta*k == 1``, and like ``d**(1 - beta*k)`` below that.
* ``geo`` (``c * q**(j-1)``): ``S_k`` converges for every ``k > 0``.
* ``const`` and ``explicit`` with a repeated last value: ``S_k(d) ~ g**k * d``.

From these: ``s = 1/beta``, ``t = 1/beta``, ``u(sigma) = max(0, (1-sigma)/beta)``
for ``poly``; all zero for ``geo``; and for constant tails ``s = t = inf`` while
``u(sigma)`` is 0 for ``sigma > 1`` and infinite otherwise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import UnsupportedFamily

REPEAT_LAST = "repeat-last"
TRUNCATED = "undefined-beyond-length"


@dataclass(frozen=True)
class PolynomialDecay:
    c: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.c <= 1.0:
            raise ValueError(f"poly: c must lie in (0, 1], got {self.c}")
        if not self.beta > 0.0 or math.isinf(self.beta):
            raise ValueError(f"poly: beta must be a positive real, got {self.beta}")

    def spec_string(self):
        return f"poly:c={self.c!r},beta={self.beta!r}"


@dataclass(frozen=True)
class GeometricDecay:
    c: float = 1.0
    q: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.c <= 1.0:
            raise ValueError(f"geo: c must lie in (0, 1], got {self.c}")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"geo: q must lie in (0, 1), got {self.q}")

    def spec_string(self):
        return f"geo:c={self.c!r},q={self.q!r}"


@dataclass(frozen=True)
class Constant:
    g: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.g <= 1.0:
            raise ValueError(f"const: g must lie in (0, 1], got {self.g}")

    def spec_string(self):
        return f"const:g={self.g!r}"


@dataclass(frozen=True)
class Explicit:
    values: tuple = field(default_factory=tuple)
    tail_rule: str = REPEAT_LAST

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("explicit: at least one weight is required")
        if self.tail_rule not in (REPEAT_LAST, TRUNCATED):
            raise ValueError(f"explicit: unknown tail rule {self.tail_rule!r}")
        for i, v in enumerate(vals):
            if not 0.0 < v <= 1.0:
                raise ValueError(f"explicit: weight {i + 1} = {v} is outside (0, 1]")
            if i and v > vals[i - 1]:
                raise ValueError(f"explicit: weights must be non-increasing (index {i + 1})")

    @property
    def truncated(self):
        return self.tail_rule == TRUNCATED

    def spec_string(self):
        return "explicit:" + ",".join(repr(v) for v in self.values) + ";" + self.tail_rule


WeightFamily = Union[PolynomialDecay, GeometricDecay, Constant, Explicit]


def gamma(family: WeightFamily, j: int) -> float:
    """The ``j``-th weight (1-based)."""
    if j < 1:
        raise IndexError(f"weights are indexed from 1, got {j}")
    if isinstance(family, PolynomialDecay):
        return family.c * float(j) ** -family.beta
    if isinstance(family, GeometricDecay):
        return family.c * family.q ** (j - 1)
    if isinstance(family, Constant):
        return family.g
    if isinstance(family, Explicit):
        if j <= len(family.values):
            return family.values[j - 1]
        if family.truncated:
            raise IndexError(f"explicit weights have only {len(family.values)} entries, asked for {j}")
        return family.values[-1]
    raise TypeError(f"not a weight family: {family!r}")


def weights(family: WeightFamily, d: int) -> list[float]:
    return [gamma(family, j) for j in range(1, d + 1)]


def gamma_inf(family: WeightFamily) -> float:
    """Infimum of the weights.

    For truncated explicit lists this is the minimum of the given data; check
    ``family.truncated`` before treating it as the limit.
    """
    if isinstance(family, (PolynomialDecay, GeometricDecay)):
        return 0.0
    if isinstance(family, Constant):
        return family.g
    if isinstance(family, Explicit):
        return family.values[-1]
    raise TypeError(f"not a weight family: {family!r}")


@dataclass(frozen=True)
class ExponentValue:
    value: float
    provenance: str = "closed_form"
    bracket: Optional[tuple] = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("exponents are non-negative")
        if self.provenance not in ("closed_form", "numerical_estimate"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance == "numerical_estimate":
            if self.bracket is None or self.bracket[0] > self.bracket[1]:
                raise ValueError("numerical estimates need a bracket lo <= hi")

    @property
    def is_finite(self):
        return math.isfinite(self.value)

    def __float__(self):
        return self.value


def _asymptotic_kind(family):
    """('poly', beta) | ('summable', None) | ('flat', g)."""
    if isinstance(family, PolynomialDecay):
        return "poly", family.beta
    if isinstance(family, GeometricDecay):
        return "summable", None
    if isinstance(family, Constant):
        return "flat", family.g
    if isinstance(family, Explicit):
        if family.truncated:
            raise UnsupportedFamily(
                "asymptotic conditions need an infinite weight sequence; "
                "truncated explicit weights do not define one"
            )
        return "flat", family.values[-1]
    raise TypeError(f"not a weight family: {family!r}")


# Closed-form decisions on S_k(d) = sum_{j<=d} g_j**k.

def power_sum_converges(family: WeightFamily, kappa: float = 1.0) -> bool:
    """Whether ``sum_j g_j**kappa < inf``."""
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        return beta * kappa > 1.0
    return kind == "summable"


def power_sum_log_bounded(family: WeightFamily, kappa: float = 1.0) -> bool:
    """Whether ``limsup_d S_kappa(d) / ln(d+1) < inf``."""
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        return beta * kappa >= 1.0
    return kind == "summable"


def power_sum_vanishes(family: WeightFamily, sigma: float, kappa: float = 1.0) -> bool:
    """Whether ``lim_d S_kappa(d) / d**sigma == 0``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        return beta * kappa > 1.0 - sigma
    if kind == "summable":
        return True
    return sigma > 1.0


def power_sum_vanishes_all_sigma(family: WeightFamily, kappa: float = 1.0) -> bool:
    """``lim S_kappa(d) / d**sigma == 0`` for every ``sigma`` in (0, 1]."""
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        # beta*kappa > 1 - sigma for all sigma > 0
        return beta * kappa >= 1.0
    return kind == "summable"


def sum_exponent(family: WeightFamily) -> ExponentValue:
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        return ExponentValue(1.0 / beta)
    return ExponentValue(0.0 if kind == "summable" else math.inf)


def t_exponent(family: WeightFamily) -> ExponentValue:
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        return ExponentValue(1.0 / beta)
    return ExponentValue(0.0 if kind == "summable" else math.inf)


def u_exponent(family: WeightFamily, sigma: float) -> ExponentValue:
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        return ExponentValue(max(0.0, (1.0 - sigma) / beta))
    if kind == "summable" or sigma > 1.0:
        return ExponentValue(0.0)
    return ExponentValue(math.inf)


def u_exponent_below_one_all_sigma(family: WeightFamily) -> bool:
    """``u(sigma) < 1`` for every ``sigma`` in (0, 1].

    For ``poly`` the supremum ``1/beta`` is approached as sigma -> 0 but not
    attained, so ``beta >= 1`` suffices.
    """
    kind, beta = _asymptotic_kind(family)
    if kind == "poly":
        return beta >= 1.0
    return kind == "summable"


# --- textual family specs -------------------------------------------------

GRAMMAR = (
    "expected one of: 'poly:c=<c>,beta=<beta>', 'geo:c=<c>,q=<q>', "
    "'const:g=<g>', 'explicit:<w1>,<w2>,...;repeat-last|undefined-beyond-length'"
)

_PARAMS = {
    "poly": (PolynomialDecay, {"c", "beta"}),
    "geo": (GeometricDecay, {"c", "q"}),
    "const": (Constant, {"g"}),
}
_NUMBER = re.compile(r"\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?)\s*")


class FamilySyntaxError(ValueError):
    def __init__(self, text, pos, problem):
        self.text, self.pos = text, pos
        super().__init__(f"{problem} at position {pos} in {text!r}; {GRAMMAR}")


def _number(text, pos, end):
    m = _NUMBER.fullmatch(text, pos, end)
    if not m:
        raise FamilySyntaxError(text, pos, "expected a number")
    return float(m.group(1))


def parse_family(text: str) -> WeightFamily:
    """Parse a family spec such as ``"poly:c=1,beta=2"`` (case-insensitive)."""
    src = text.lower()
    colon = src.find(":")
    if colon < 0:
        raise FamilySyntaxError(text, 0, "missing ':' after the family name")
    name = src[:colon].strip()
    body_start = colon + 1
    if name == "explicit":
        semi = src.find(";", body_start)
        if semi < 0:
            raise FamilySyntaxError(text, len(src), "missing ';<tail rule>'")
        rule = src[semi + 1:].strip()
        if rule not in (REPEAT_LAST, TRUNCATED):
            raise FamilySyntaxError(text, semi + 1, f"unknown tail rule {rule!r}")
        values, pos = [], body_start
        for chunk in src[body_start:semi].split(","):
            values.append(_number(text, pos, pos + len(chunk)))
            pos += len(chunk) + 1
        try:
            return Explicit(tuple(values), rule)
        except ValueError as exc:
            raise FamilySyntaxError(text, body_start, str(exc)) from None
    if name not in _PARAMS:
        raise FamilySyntaxError(text, 0, f"unknown family {name!r}")
    cls, allowed = _PARAMS[name]
    kwargs, pos = {}, body_start
    body = src[body_start:]
    for chunk in body.split(",") if body.strip() else []:
        key, eq, _ = chunk.partition("=")
        key = key.strip()
        if not eq or key not in allowed or key in kwargs:
            raise FamilySyntaxError(text, pos, f"bad parameter {chunk.strip()!r} for {name}")
        val_pos = pos + chunk.index("=") + 1
        kwargs[key] = _number(text, val_pos, pos + len(chunk))
        pos += len(chunk) + 1
    missing = sorted(allowed - kwargs.keys())
    if missing:
        raise FamilySyntaxError(text, len(text), f"missing parameter {missing[0]!r} for {name}")
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise FamilySyntaxError(text, body_start, str(exc)) from None
