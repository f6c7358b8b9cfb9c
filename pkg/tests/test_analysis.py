from dataclasses import replace
from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regcantor.analysis import (
    FORWARD_OPS,
    continuity_point,
    continuity_point_near,
    enumerate_strict_maxima,
    ftc_point,
    infinite_band,
    integral_zero_point,
    non_strict_max_point,
    riemann_integral,
    volterra_dense,
    volterra_pair,
    volterra_rational,
    weak_continuity_point,
)
from regcantor.corpus import random_heightset, random_presentation
from regcantor.exact import Interval, TaggedPoint, dyadic
from regcantor.presentations import (
    HeightSet,
    PreconditionError,
    Step,
    constant,
    pl,
    pl_identity,
    range_bounds,
    rationals,
    spike_indicator,
    tent,
    thomae,
)
from regcantor.realisers import OracleKind, strong_cantor_from_oracle
from regcantor.verification import (
    band_checker,
    check_separation,
    discontinuity_checker,
    ftc_checker,
    grid_continuity_oracle,
    integral_zero_checker,
    nonmax_checker,
    riemann_sum_oracle,
    strict_max_checker,
)

from .conftest import fractions

F = Fraction
T = TaggedPoint
HALF = F(1, 2)
ONE_HALF_SET = HeightSet.from_levels({0: [HALF]})
SQRT2_HALF = T(0, HALF)


def _in(y, lo, hi, n=60):
    a = y.approx(n)
    return lo - dyadic(n) <= a <= hi + dyadic(n)


# -- continuity points ---------------------------------------------------------------


def test_continuity_point_thomae():
    f = thomae()
    y, cert = continuity_point(f)
    assert check_separation(cert, rationals(), 8).passed
    assert grid_continuity_oracle(f, y, 8).passed


def test_continuity_point_identity_and_single_spike():
    y, _ = continuity_point(pl_identity())
    assert grid_continuity_oracle(pl_identity(), y, 8).passed
    f = spike_indicator(ONE_HALF_SET)
    y, cert = continuity_point(f)
    assert check_separation(cert, ONE_HALF_SET, 0).passed
    assert grid_continuity_oracle(f, y, 8).passed


def test_near_thomae_half():
    y, cert = continuity_point_near(thomae(), HALF, 3)
    assert _in(y, F(3, 8), F(5, 8))
    assert check_separation(cert, rationals(), 8).passed


def test_near_examples():
    y, _ = continuity_point_near(pl_identity(), 0, 1)
    assert _in(y, F(0), HALF)
    f = spike_indicator(ONE_HALF_SET)
    y, cert = continuity_point_near(f, HALF, 2)
    assert _in(y, F(1, 4), F(3, 4))
    assert check_separation(cert, ONE_HALF_SET, 0).passed


def test_near_rejects_outside_point():
    from regcantor.exact import DomainError

    with pytest.raises(DomainError):
        continuity_point_near(thomae(), F(3, 2), 2)


@pytest.mark.parametrize("make", [thomae, pl_identity, lambda: spike_indicator(ONE_HALF_SET)])
def test_weak_continuity_point_flags(make):
    f = make()
    y, cert, flags = weak_continuity_point(f)
    assert (flags.usc, flags.lsc, flags.quasi, flags.darboux) == (True, True, True, True)
    assert grid_continuity_oracle(f, y, 8).passed


# -- Volterra ------------------------------------------------------------------------


def test_volterra_rational_budgeted_left_branch():
    ans = volterra_rational(thomae(), budget=0)
    assert ans.is_left
    assert isinstance(ans.value, Fraction)
    assert discontinuity_checker(thomae(), ans.value).passed


def test_volterra_rational_right_branches():
    for f in (thomae(), pl_identity()):
        ans = volterra_rational(f)
        assert ans.branch == "right"
        assert check_separation(ans.certificate, rationals(), 6).passed
    f = spike_indicator(HeightSet.from_levels({0: [SQRT2_HALF]}))
    ans = volterra_rational(f)
    assert ans.branch == "right"
    assert check_separation(ans.certificate, rationals(), 6).passed
    assert ans.certificate.entry_for(SQRT2_HALF).gap > 0


def test_volterra_pair_common_continuity_point():
    f, g = thomae(), spike_indicator(rationals())
    y, cert = volterra_pair(f, g)
    assert check_separation(cert, rationals(), 7).passed
    assert grid_continuity_oracle(f, y, 8).passed
    assert grid_continuity_oracle(g, y, 8).passed
    y, _ = volterra_pair(pl_identity(), pl_identity())
    assert grid_continuity_oracle(pl_identity(), y, 6).passed


def test_volterra_dense():
    ans = volterra_dense(thomae(), rationals())
    assert ans.branch == "right"
    assert check_separation(ans.certificate, rationals(), 7).passed
    D = rationals()
    ans = volterra_dense(spike_indicator(D), D)
    assert ans.branch == "right"
    assert grid_continuity_oracle(spike_indicator(D), ans.value, 8).passed
    D = random_heightset(3, levels=6)
    ans = volterra_dense(pl_identity(), D)
    assert check_separation(ans.certificate, D, 5).passed


# -- bands ---------------------------------------------------------------------------


def test_band_identity_values():
    cert = infinite_band(pl_identity())
    assert (cert.a, cert.b) == (T(F(1, 4)), T(F(3, 4)))
    assert cert.J == Interval(F(3, 8), F(5, 8))
    assert band_checker(cert, pl_identity(), 1000).passed


@pytest.mark.parametrize("make", [thomae, lambda: spike_indicator(rationals())])
def test_band_constant_case(make):
    f = make()
    cert = infinite_band(f)
    # a = b is an irrational point of J, hence no spike
    assert cert.a == cert.b and cert.a.r != 0
    assert cert.J.lo < cert.J.hi and cert.J.lo <= cert.a <= cert.J.hi
    assert band_checker(cert, f, 1000).passed


def test_band_shrunk_to_point_fails():
    f = pl_identity()
    cert = infinite_band(f)
    bad = replace(cert, J=Interval(HALF, HALF))
    report = band_checker(bad, f, 100)
    assert not report.passed
    failure = report.failures()[0]
    assert failure.witness["J"] == Interval(HALF, HALF)


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_band_random_presentations(seed):
    f = random_presentation(seed)
    assert band_checker(infinite_band(f), f, 200).passed


# -- integration ---------------------------------------------------------------------


def test_integral_examples():
    assert riemann_integral(pl_identity(), 0, 1) == HALF
    assert riemann_integral(spike_indicator(rationals()), 0, 1) == 0
    assert riemann_integral(thomae(), 0, 1) == 0
    step = pl([(0, 0), (1, 0)], steps=[Step(T(HALF), F(1), F(0), F(0))])
    assert riemann_integral(step, 0, 1) == HALF
    assert riemann_sum_oracle(step, HALF, mesh_bits=12, tol_bits=10).passed


def test_integral_irrational_bound():
    v = riemann_integral(pl_identity(), 0, SQRT2_HALF)
    assert v == T(F(1, 4))  # (sqrt2/2)^2 / 2


def test_integral_domain():
    from regcantor.exact import DomainError

    with pytest.raises(DomainError):
        riemann_integral(pl_identity(), HALF, F(1, 4))


@given(st.integers(0, 10**6), fractions(0, 1, 64), fractions(0, 1, 64), fractions(0, 1, 64))
def test_integral_additive(seed, a, b, c):
    a, b, c = sorted((a, b, c))
    f = random_presentation(seed)
    assert riemann_integral(f, a, b) + riemann_integral(f, b, c) == riemann_integral(f, a, c)


@pytest.mark.parametrize("seed", range(20))
def test_integral_matches_riemann_sums(seed):
    f = random_presentation(seed)
    # total variation of base+steps on these presentations is below 8
    assert riemann_sum_oracle(f, riemann_integral(f), mesh_bits=10, tol_bits=6).passed


def test_integral_zero_point_spikes():
    f = spike_indicator(rationals())
    y, cert = integral_zero_point(f)
    assert integral_zero_checker(y, cert, f).passed
    assert check_separation(cert.separation, rationals(), 6).passed
    prev, r = None, F(1)
    for m in range(2, 10):
        r = min([r] + [cert.separation.entry_for(x).gap for x in rationals().level(m - 1)])
        a = y.approx(m + 40)
        lo, hi = range_bounds(f, Interval(a - r / 2, a + r / 2), m)
        assert -dyadic(m) <= lo <= 0 <= hi <= dyadic(m)
        if prev is not None:
            assert hi - lo < prev
        prev = hi - lo


def test_integral_zero_point_trivial_and_errors():
    y, cert = integral_zero_point(constant(0))
    assert integral_zero_checker(y, cert, constant(0)).passed
    with pytest.raises(PreconditionError):
        integral_zero_point(pl_identity())
    with pytest.raises(PreconditionError):
        integral_zero_point(constant(F(-1, 2)))


def test_ftc_examples():
    f = spike_indicator(rationals())
    y, cert = ftc_point(f)
    assert cert.quotient == 0
    assert ftc_checker(y, cert, f).passed
    y, cert = ftc_point(constant(1))
    assert cert.quotient == 1
    f = pl_identity()
    y, cert = ftc_point(f)
    assert abs(cert.quotient - y.approx(20)) <= dyadic(10)
    assert ftc_checker(y, cert, f).passed
    assert _in(y, F(1, 4), F(3, 4))


# -- maxima --------------------------------------------------------------------------


def test_non_strict_max_examples():
    f = tent(separation=F(1, 4))
    y, cert = non_strict_max_point(f)
    assert check_separation(cert, ONE_HALF_SET, 0).passed
    assert nonmax_checker(y, cert, f).passed
    f = spike_indicator(rationals())
    y, cert = non_strict_max_point(f)
    assert check_separation(cert, rationals(), 6).passed
    non_strict_max_point(constant(0))
    with pytest.raises(PreconditionError):
        non_strict_max_point(pl([(0, 0), (1, 0)], steps=[Step(T(HALF), F(0), F(1), F(0))]))


def test_enumerate_strict_maxima():
    f = tent(separation=F(1, 4))
    ws = list(enumerate_strict_maxima(f))
    assert [(w.location, w.kind) for w in ws] == [(T(HALF), "peak")]
    assert strict_max_checker(ws[0], f).passed
    assert list(enumerate_strict_maxima(constant(0))) == []
    f = spike_indicator(rationals())
    ws = list(islice(enumerate_strict_maxima(f), 12))
    assert [w.location for w in ws[:5]] == [T(F(0)), T(F(1)), T(HALF), T(F(1, 3)), T(F(2, 3))]
    for w in ws:
        assert strict_max_checker(w, f).passed


def test_strict_maxima_need_separation():
    with pytest.raises(PreconditionError):
        list(enumerate_strict_maxima(tent()))


# -- round trips ----------------------------------------------------------------------


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_round_trip_every_kind(seed):
    A = random_heightset(seed, levels=6, per_level=4)
    for kind in OracleKind:
        y, cert = strong_cantor_from_oracle(kind, FORWARD_OPS[kind], depth=5)(A)
        assert check_separation(cert, A, 5).passed
