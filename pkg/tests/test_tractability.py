import json
import math
import random

import pytest

from korobov.errors import DomainError, UnsupportedCriterion, UnsupportedFamily
from korobov.tractability import (
    CHAIN,
    FAILS,
    HOLDS,
    OPEN,
    SIGMA_ABOVE_ONE,
    TractabilityReport,
    classify,
    qpt_exponent_value,
    sigma_key,
    spt_exponent_value,
)
from korobov.weights import (
    REPEAT_LAST,
    TRUNCATED,
    Constant,
    Explicit,
    GeometricDecay,
    PolynomialDecay,
    parse_family,
)

from golden_tables import TABLES

SIGMAS = (0.25, 0.5, 1.0)


def golden_mismatches():
    bad = []
    for (p, cls), rows in TABLES.items():
        for notion, fam, expected in rows:
            rep = classify(parse_family(fam), 2.0, p, cls, SIGMAS)
            got = rep.verdicts[notion].status
            if got != expected:
                bad.append((p, cls, notion, fam, expected, got))
    return bad


def test_golden_tables():
    assert golden_mismatches() == []


def test_each_condition_has_both_sides():
    for rows in TABLES.values():
        notions = {n for n, _, _ in rows}
        for n in notions - {SIGMA_ABOVE_ONE}:
            statuses = {s for m, _, s in rows if m == n}
            assert {HOLDS, FAILS} <= statuses, n


def test_examples():
    r = classify(Constant(0.5), 2, 2, "all")
    assert r.verdicts["SPT"].status == FAILS
    assert all(r.verdicts[k].status == HOLDS for k in ("QPT", "UWT", "WT"))
    r = classify(Constant(1.0), 2, 2, "all")
    assert r.verdicts["QPT"].status == FAILS and r.verdicts[SIGMA_ABOVE_ONE].status == HOLDS
    r = classify(PolynomialDecay(1, 1), 2, math.inf, "all")
    v = r.verdicts
    assert v["SPT"].status == FAILS and v["PT"].status == FAILS and v["WT"].status == HOLDS
    assert v["QPT"].status == OPEN and v["QPT"].nec is True and v["QPT"].suff is False


def test_table_discrepancies_follow_l2_column():
    # The p in (2, inf) table lists "s < 1" as necessary for PT with all
    # linear information and "s <= 1" for SPT with point evaluations; the
    # classifier takes necessary conditions from the L2 table instead.
    v = classify(PolynomialDecay(1, 1), 2, 3.0, "all").verdicts
    assert v["PT"].status == OPEN
    v = classify(PolynomialDecay(1, 1), 2, 3.0, "std").verdicts
    assert v["SPT"].status == FAILS


def test_exponents():
    assert spt_exponent_value(PolynomialDecay(1, 2), 2, 2, "all") == 1.0
    assert spt_exponent_value(PolynomialDecay(1, 3), 4, 2, "std") == pytest.approx(2 / 3)
    assert spt_exponent_value(GeometricDecay(1, 0.5), 2, 2, "all") == 1.0
    assert spt_exponent_value(PolynomialDecay(1, 2), 2, math.inf, "all") is None
    assert spt_exponent_value(Constant(0.5), 2, 2, "all") is None
    assert qpt_exponent_value(PolynomialDecay(1, 2), 3) == pytest.approx(2 / 3)
    assert qpt_exponent_value(Constant(math.exp(-4)), 1.25) == pytest.approx(1.6)
    assert qpt_exponent_value(Constant(math.exp(-1)), 4) == pytest.approx(2.0)
    assert qpt_exponent_value(Constant(1.0), 2) is None


def test_report_exponent_presence():
    r = classify(PolynomialDecay(1, 2), 2, 2, "all")
    assert r.spt_exponent == 1.0 and r.qpt_exponent == 1.0
    r = classify(PolynomialDecay(1, 2), 2, math.inf, "all")
    assert r.verdicts["SPT"].status == HOLDS and r.spt_exponent is None


def test_errors():
    with pytest.raises(DomainError):
        classify(Constant(0.5), 1.0)
    with pytest.raises(UnsupportedFamily):
        classify(Explicit((1, 0.5), TRUNCATED), 2)
    with pytest.raises(UnsupportedCriterion):
        classify(Constant(0.5), 2, 3.0, "all", criterion="norm")
    with pytest.raises(DomainError):
        classify(Constant(0.5), 2, 2, "all", sigma_grid=[1.5])


def random_family(rng):
    kind = rng.randrange(4)
    if kind == 0:
        return PolynomialDecay(rng.uniform(0.05, 1), rng.choice([0.25, 0.5, 1.0, 1.5, rng.uniform(0.05, 4)]))
    if kind == 1:
        return GeometricDecay(rng.uniform(0.05, 1), rng.uniform(0.01, 0.99))
    if kind == 2:
        return Constant(rng.choice([1.0, rng.uniform(0.01, 1)]))
    vals = sorted((rng.uniform(0.01, 1) for _ in range(rng.randrange(1, 5))), reverse=True)
    if rng.random() < 0.3:
        vals.append(1.0 if vals[-1] == 1.0 else vals[-1])
    return Explicit(tuple(vals), REPEAT_LAST)


def hierarchy_violations(report, sigmas=SIGMAS):
    v = {k: x.status for k, x in report.verdicts.items()}
    bad = []
    chain = list(CHAIN)
    for a, b in zip(chain, chain[1:]):
        if v[a] == HOLDS and v[b] == FAILS:
            bad.append((a, b))
        if v[b] == FAILS and v[a] != FAILS:
            bad.append((b, a))
        if v[a] == HOLDS and v[b] != HOLDS:
            bad.append((a, b))
    for w in ["WT"] + [sigma_key(s) for s in sigmas]:
        if v["UWT"] == HOLDS and v[w] != HOLDS:
            bad.append(("UWT", w))
        if v[w] == FAILS and v["UWT"] != FAILS:
            bad.append((w, "UWT"))
    if v[SIGMA_ABOVE_ONE] != HOLDS:
        bad.append(SIGMA_ABOVE_ONE)
    return bad


def hierarchy_battery(n=200, seed=2024):
    rng = random.Random(seed)
    violations = 0
    for _ in range(n):
        fam = random_family(rng)
        for alpha in (1.1, 2.0, 4.0):
            for p in (2, 3.0, math.inf):
                for cls in ("all", "std"):
                    if hierarchy_violations(classify(fam, alpha, p, cls, SIGMAS)):
                        violations += 1
    return violations


def test_hierarchy_randomized():
    assert hierarchy_battery() == 0


def test_sandwich_coherence():
    rng = random.Random(9)
    for _ in range(200):
        fam = random_family(rng)
        for cls in ("all", "std"):
            lo = classify(fam, 2.0, 2, cls).verdicts
            mid = classify(fam, 2.0, 4.5, cls).verdicts
            hi = classify(fam, 2.0, math.inf, cls).verdicts
            for k in mid:
                if lo[k].status == FAILS:
                    assert mid[k].status != HOLDS
                if hi[k].status == HOLDS:
                    assert mid[k].status != FAILS


def test_tau_invariance():
    # verdicts depend on sigma only; tau never enters the classifier
    rng = random.Random(1)
    for _ in range(50):
        fam = random_family(rng)
        a = classify(fam, 2.0, math.inf, "all", (0.1, 0.5, 1.0))
        b = classify(fam, 2.0, math.inf, "all", (1.0, 0.5, 0.1))
        assert a.verdicts == b.verdicts


def test_sigma_one_is_wt():
    r = classify(PolynomialDecay(1, 0.3), 2, math.inf, "all")
    assert r.verdicts[sigma_key(1.0)] == r.verdicts["WT"]


def test_json_round_trip():
    rng = random.Random(4)
    for _ in range(40):
        fam = random_family(rng)
        for p in (2, 3.0, math.inf):
            r = classify(fam, rng.choice([1.1, 2.0, 4.0]), p, rng.choice(["all", "std"]))
            doc = json.loads(json.dumps(r.to_json()))
            assert TractabilityReport.from_json(doc) == r


def test_open_gap_json_shape():
    r = classify(PolynomialDecay(1, 1), 2, math.inf)
    assert r.to_json()["verdicts"]["QPT"] == {"open": {"nec": True, "suff": False}}
