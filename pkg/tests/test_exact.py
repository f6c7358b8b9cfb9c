from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from regcantor.exact import (
    CReal,
    DomainError,
    Interval,
    Ordering,
    TaggedPoint,
    abs_diff_at_least,
    approx,
    compare,
    creal_of,
    dyadic,
    format_rational,
    is_rational,
    parse_point,
    parse_rational,
    rational_lower_bound,
)
from regcantor.realisers import cantor_outside

from .conftest import fractions, tagged_points

SQRT2 = TaggedPoint(0, 1)


def squaring_compare(q: Fraction, r: Fraction) -> int:
    """Independent sign of q + r*sqrt2 via floats far from the boundary, squares otherwise."""
    if r == 0:
        return (q > 0) - (q < 0)
    # q + r s > 0  <=>  r s > -q; square both sides keeping track of signs
    lhs_pos = r > 0
    if lhs_pos and -q < 0:
        return 1
    if not lhs_pos and -q > 0:
        return -1
    cmp = 2 * r * r - q * q  # |r s|^2 - |q|^2
    if lhs_pos:
        return 1 if cmp > 0 else -1
    return -1 if cmp > 0 else 1


def test_compare_examples():
    assert compare(Fraction(1, 2), TaggedPoint(Fraction(2, 4))) is Ordering.EQ
    assert compare(Fraction(7, 5), SQRT2) is Ordering.LT
    assert compare(Fraction(3, 2), SQRT2) is Ordering.GT


def test_is_rational_examples():
    assert is_rational(TaggedPoint(Fraction(3, 4)))
    assert not is_rational(TaggedPoint(Fraction(3, 4), Fraction(1, 2)))
    assert not is_rational(TaggedPoint(0, -1))


def test_approx_examples():
    assert approx(creal_of(Fraction(1, 3)), 2) == Fraction(1, 3)
    assert approx(creal_of(0), 10) == 0


def test_approx_of_hand_traced_trisection():
    # (1/2, 1/4, 3/4): thirds 0, 0, 2 -> stage-3 interval [2/27, 1/9]
    y, _ = cantor_outside([TaggedPoint(Fraction(1, 2)), TaggedPoint(Fraction(1, 4)), TaggedPoint(Fraction(3, 4))])
    assert approx(y, 3) == Fraction(5, 54)


@given(tagged_points(), tagged_points())
def test_compare_matches_squaring_oracle(x, y):
    d = x - y
    assert int(compare(x, y)) == squaring_compare(d.q, d.r)


@given(tagged_points(), tagged_points(), tagged_points())
def test_compare_is_a_total_order(x, y, z):
    c = compare(x, y)
    assert c in (Ordering.LT, Ordering.EQ, Ordering.GT)
    assert compare(y, x) == Ordering(-int(c))
    assert (c is Ordering.EQ) == (x == y)
    if compare(x, y) <= 0 and compare(y, z) <= 0:
        assert compare(x, z) <= 0


@given(tagged_points(), st.integers(0, 200))
def test_enclosure_brackets_point(x, n):
    lo, hi = x.enclosure(n)
    assert hi - lo <= dyadic(n)
    assert x >= lo and x <= hi


@given(tagged_points(), st.lists(st.tuples(st.integers(0, 120), st.integers(0, 120)), min_size=1, max_size=100))
def test_cauchy_modulus(x, pairs):
    y = creal_of(x)
    for a, b in pairs:
        m, n = min(a, b), max(a, b)
        assert abs(y.approx(m) - y.approx(n)) <= dyadic(m)
        if not x.is_rational():
            assert abs(y.approx(m) - y.approx(n)) < dyadic(m)


@given(fractions(), st.integers(0, 500))
def test_rational_embedding_is_exact(q, n):
    assert approx(creal_of(q), n) == q


@given(fractions(), tagged_points(), st.integers(0, 40))
def test_abs_diff_at_least_agrees_with_exact(a, x, n):
    d = abs(a - x)
    if d.sign() <= 0:
        return
    b = rational_lower_bound(d) / 2
    # |a - x| >= b + 2^-n decided exactly
    assert abs_diff_at_least(a, x, b, n) == (d >= b + dyadic(n))


def test_creal_rejects_negative_index():
    with pytest.raises(DomainError):
        creal_of(1).approx(-1)


def test_creal_memo_is_bounded_and_consistent():
    calls = []

    def fn(n):
        calls.append(n)
        return Fraction(1, 3)

    y = CReal(fn)
    for n in range(200):
        assert y.approx(n) == Fraction(1, 3)
    assert y.approx(199) == Fraction(1, 3)
    assert len(calls) <= 201


def test_parse_and_format_round_trip():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert format_rational(Fraction(2)) == "2/1"
    p = parse_point("1/2 + 1/3*sqrt2")
    assert p == TaggedPoint(Fraction(1, 2), Fraction(1, 3))
    assert parse_point(str(p)) == p
    assert parse_point("-1/2*sqrt2") == TaggedPoint(0, Fraction(-1, 2))


def test_interval_rejects_empty():
    with pytest.raises(DomainError):
        Interval(Fraction(1), Fraction(0))
    assert Interval(0, 1).midpoint == Fraction(1, 2)
