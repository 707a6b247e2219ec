"""Independent reference implementations used by several test modules."""

import itertools
import math
import random

import numpy as np

from korobov.harness import brute_force_spectrum, certified_box


def enumerate_box(gammas, alpha, H):
    """Every r(h) over [-H, H]^d by direct iteration (pure Python)."""
    out = []
    for h in itertools.product(range(-H, H + 1), repeat=len(gammas)):
        v = 1.0
        for g, x in zip(gammas, h):
            if x:
                v *= g / abs(x) ** alpha
        out.append(v)
    out.sort(reverse=True)
    return out


def box_spectrum(spec, T):
    """Brute-force ``(count, sum)`` above ``T`` on the certified box."""
    H = certified_box(spec, T)
    blocks = brute_force_spectrum(spec, H)
    above = [(v, c) for v, c in blocks if v > T]
    return sum(c for _, c in above), math.fsum(v * c for v, c in above)


def thresholds_between(spec, T_min, count, seed):
    """``count`` thresholds in (T_min, 1), each at a geometric midpoint
    between two distinct neighbouring eigenvalues, so none sits near a tie."""
    H = certified_box(spec, T_min)
    vals = [v for v, _ in brute_force_spectrum(spec, H) if v > T_min]
    gaps = [(a, b) for a, b in zip(vals, vals[1:]) if a > b * (1 + 1e-9)]
    if not gaps:
        return []
    rng = random.Random(seed)
    picks = rng.sample(gaps, min(count, len(gaps)))
    return [math.sqrt(a * b) for a, b in picks]


def rectangular_box(spec, T):
    """Per-coordinate radii ``H_j`` with ``g_j / H_j**alpha < T``.  Any point
    outside the box has a factor below T, so the box is exact above T."""
    radii = []
    for g in spec.gammas:
        H = max(1, int((g / T) ** (1.0 / spec.alpha)))
        while not g / float(H) ** spec.alpha < T:
            H += 1
        radii.append(H)
    return radii


def rectangular_values(spec, radii):
    """All ``r(h)`` over the rectangular box, sorted non-increasing."""
    vals = np.ones(1)
    for g, H in zip(spec.gammas, radii):
        m = np.abs(np.arange(-H, H + 1)).astype(np.float64)
        f = np.ones_like(m)
        f[m > 0] = g / m[m > 0] ** spec.alpha
        vals = np.multiply.outer(vals, f).ravel()
    return np.sort(vals)[::-1]
