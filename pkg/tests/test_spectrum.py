import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from korobov.errors import CapExceeded, DomainError
from korobov.harness import brute_force_spectrum
from korobov.spectrum import (
    ProblemSpec,
    SpectrumCursor,
    count_above,
    decay_value,
    eigenvalue,
    head_sum,
    log_total_sum,
    scan_above,
    sum_above,
    total_sum,
)
from korobov.weights import Constant, Explicit, GeometricDecay, PolynomialDecay

from oracles import box_spectrum, enumerate_box, thresholds_between


def spec(d, alpha, fam, **kw):
    return ProblemSpec(d, alpha, fam, **kw)


def test_problem_spec_validation():
    with pytest.raises(DomainError):
        spec(0, 2, Constant(1))
    with pytest.raises(DomainError):
        spec(1, 1.0, Constant(1))
    with pytest.raises(DomainError):
        spec(1, 2, Constant(1), p=3)
    with pytest.raises(DomainError):
        spec(1, 2, Constant(1), info_class="foo")
    assert spec(1, 2, Constant(1), p="inf").p == math.inf


def test_decay_value_examples():
    s = spec(2, 2, Explicit((1, 0.25)))
    assert decay_value(s, (0, 0)) == 1.0
    assert decay_value(s, (-2, 1)) == 0.25 * 0.25
    assert decay_value(spec(3, 2, PolynomialDecay(1, 1)), (1, 1, 1)) == pytest.approx(1 / 6)


def test_total_sum_closed_form():
    assert total_sum(spec(1, 2, Constant(1))) == pytest.approx(1 + math.pi**2 / 3, rel=1e-15)
    assert total_sum(spec(2, 2, Constant(1))) == pytest.approx((1 + math.pi**2 / 3) ** 2, rel=1e-15)
    big = spec(5000, 1.5, Constant(1))
    with pytest.raises(OverflowError):
        total_sum(big)
    assert log_total_sum(big) == pytest.approx(5000 * math.log1p(2 * 2.612375348685488), rel=1e-12)


def test_count_sum_examples():
    s = spec(1, 2, Constant(1))
    assert count_above(s, 0.36) == 3
    assert sum_above(s, 0.36) == 3.0
    assert sum_above(s, 0.2) == 3.5
    # frozen from a 49-point enumeration
    assert count_above(spec(2, 2, Explicit((1, 0.25))), 0.2) == 11


def test_threshold_domain():
    with pytest.raises(DomainError):
        count_above(spec(1, 2, Constant(1)), 1.0)
    with pytest.raises(DomainError):
        count_above(spec(1, 2, Constant(1)), 0.0)


def test_cursor_first_blocks():
    cur = SpectrumCursor(spec(2, 2, Constant(1)))
    blocks = [cur.next_eigenvalue() for _ in range(5)]
    assert blocks[0] == (1.0, 1)
    assert sorted(blocks[1:4], key=lambda b: b[1]) == [(1.0, 2), (1.0, 2), (1.0, 4)]
    assert blocks[4][0] == 0.25
    one = [b for b in blocks if b[0] == 1.0]
    assert sum(m for _, m in one) == 9  # brute force: nine vectors with r(h) = 1


def test_cursor_d1_blocks():
    cur = SpectrumCursor(spec(1, 2, Constant(1)))
    assert [cur.next_eigenvalue() for _ in range(3)] == [(1.0, 1), (1.0, 2), (0.25, 2)]


def test_brute_force_examples():
    assert brute_force_spectrum(spec(1, 2, Constant(1)), 2) == [(1.0, 3), (0.25, 2)]
    assert brute_force_spectrum(spec(2, 2, Constant(1)), 1) == [(1.0, 9)]
    assert brute_force_spectrum(spec(2, 2, Explicit((1, 0.25))), 1) == [(1.0, 3), (0.25, 6)]


def test_brute_force_matches_pure_python():
    s = spec(3, 1.5, PolynomialDecay(1, 1))
    flat = [v for v, c in brute_force_spectrum(s, 3) for _ in range(c)]
    assert flat == pytest.approx(enumerate_box(s.gammas, 1.5, 3), rel=1e-15)


def test_witnesses_match_brute_force():
    s = spec(3, 2, PolynomialDecay(1, 1))
    T = 0.013
    st_ = scan_above(s, T)
    vals = enumerate_box(s.gammas, 2, 9)
    above = [v for v in vals if v > T]
    assert st_.count == len(above)
    assert st_.min_above == min(above)
    assert st_.max_below == max(v for v in vals if v <= T)


@pytest.mark.parametrize("fam", [PolynomialDecay(1, 2), GeometricDecay(0.8, 0.5), Constant(0.7)])
@pytest.mark.parametrize("alpha", [1.5, 3.0])
def test_streaming_consistency(fam, alpha):
    s = spec(3, alpha, fam)
    for T in thresholds_between(s, 2e-3, 5, seed=11):
        cur = SpectrumCursor(s)
        n = count_above(s, T)
        while cur.emitted_count < n:
            cur.next_eigenvalue()
        assert cur.emitted_count == n
        assert cur.emitted_sum == pytest.approx(sum_above(s, T), rel=1e-10)


def test_cursor_non_increasing_and_bounded():
    s = spec(4, 2, PolynomialDecay(1, 1))
    cur = SpectrumCursor(s)
    prev, tot = 2.0, total_sum(s)
    for value, mult in (cur.next_eigenvalue() for _ in range(3000)):
        assert value <= prev and mult in (1, 2, 4, 8, 16)
        prev = value
        assert cur.emitted_sum <= tot


def test_cursor_cap():
    cur = SpectrumCursor(spec(2, 2, Constant(1)), cap=5)
    cur.next_eigenvalue()
    cur.next_eigenvalue()
    with pytest.raises(CapExceeded):
        for _ in range(10):
            cur.next_eigenvalue()
    assert cur.emitted_count <= 5


def test_scan_cap():
    with pytest.raises(CapExceeded) as info:
        count_above(spec(3, 2, Constant(1)), 1e-4, cap=100)
    assert info.value.lower_bound == 100


def test_eigenvalue_and_head_sum():
    s = spec(1, 2, Constant(1))
    assert [eigenvalue(s, k) for k in range(1, 6)] == [1.0, 1.0, 1.0, 0.25, 0.25]
    assert head_sum(s, 4) == 3.25
    assert head_sum(s, 0) == 0.0


specs = st.builds(
    ProblemSpec,
    st.integers(1, 3),
    st.sampled_from([1.5, 2.0, 3.0, 4.0]),
    st.one_of(
        st.builds(PolynomialDecay, st.floats(0.3, 1.0), st.floats(0.5, 3.0)),
        st.builds(GeometricDecay, st.floats(0.3, 1.0), st.floats(0.1, 0.9)),
        st.builds(Constant, st.floats(0.2, 1.0)),
    ),
)


@settings(max_examples=60, deadline=None)
@given(specs, st.floats(0.02, 0.9))
def test_count_matches_box(s, T):
    count, total = box_spectrum(s, T)
    stats = scan_above(s, T)
    assert stats.count == count
    assert stats.total == pytest.approx(total, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(specs, st.floats(0.005, 0.9))
def test_monotone_in_d(s, T):
    assert count_above(s.with_(d=s.d + 1), T) >= count_above(s, T)


@settings(max_examples=60, deadline=None)
@given(specs, st.floats(0.02, 0.9))
def test_tail_identity(s, T):
    tail = total_sum(s) - sum_above(s, T)
    assert tail >= 0
    if s.d == 1:
        box = [v for v, c in brute_force_spectrum(s, 4000) for _ in range(c) if v <= T]
        # the box misses the far tail, which is tiny and positive
        assert math.fsum(box) <= tail + 1e-12
        assert tail - math.fsum(box) < 2 * s.gammas[0] * 4000 ** (1 - s.alpha) / (s.alpha - 1) + 1e-12
