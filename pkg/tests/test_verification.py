from dataclasses import replace
from fractions import Fraction
from itertools import islice

from hypothesis import given
from hypothesis import strategies as st

from regcantor.analysis import enumerate_strict_maxima, ftc_point, integral_zero_point
from regcantor.exact import CReal, Interval, TaggedPoint, creal_of, dyadic
from regcantor.presentations import (
    HeightSet,
    constant,
    pl_identity,
    rationals,
    spike_indicator,
    thomae,
)
from regcantor.realisers import strong_cantor
from regcantor.verification import (
    VerificationReport,
    check_separation,
    discontinuity_checker,
    ftc_checker,
    grid_continuity_oracle,
    integral_zero_checker,
    interval_membership,
    riemann_sum_oracle,
    strict_max_checker,
    volterra_impossibility,
)

F = Fraction
T = TaggedPoint
HALF = F(1, 2)
EXACT = (Fraction, TaggedPoint, Interval, int)


def _exact_witness(report):
    failure = report.failures()[0]
    assert failure.witness, failure.description
    assert all(isinstance(v, EXACT) for v in failure.witness.values()), failure.witness
    return failure.witness


def test_separation_single_point():
    A = HeightSet.from_levels({0: [HALF]})
    _, cert = strong_cantor(A)
    report = check_separation(cert, A, 0)
    assert report.passed and len(report.checks) == 1


def test_separation_missing_entry_fails():
    A = HeightSet.from_levels({0: [HALF]})
    _, cert = strong_cantor(A)
    other = HeightSet.from_levels({0: [F(1, 3)]})
    report = check_separation(cert, other, 0)
    assert not report.passed
    assert _exact_witness(report)["x"] == T(F(1, 3))


def test_separation_doubled_gap_fails():
    A = HeightSet.from_levels({0: [HALF], 1: [F(1, 3), F(2, 3)]})
    _, cert = strong_cantor(A)
    snap = cert.snapshot(3)
    e = snap.entry(1)
    bad = snap.replace_entry(1, gap=2 * e.gap + 1)
    report = check_separation(bad, A, 1)
    assert not report.passed
    w = _exact_witness(report)
    assert w["x"] == e.excluded and w["gap"] == 2 * e.gap + 1


def test_grid_oracle_examples():
    y, _ = strong_cantor(rationals())
    assert grid_continuity_oracle(thomae(), y, 8).passed
    assert grid_continuity_oracle(pl_identity(), y, 8).passed
    assert grid_continuity_oracle(pl_identity(), creal_of(F(1, 3)), 8).passed


def test_grid_oracle_fails_at_known_discontinuity():
    report = grid_continuity_oracle(thomae(), creal_of(HALF), 2)
    assert not report.passed
    w = _exact_witness(report)
    assert w["sample"] == T(HALF)
    assert w["deviation"] == HALF


def test_grid_oracle_sees_step_oscillation():
    from regcantor.presentations import Step, pl

    f = pl([(0, 0), (1, 0)], steps=[Step(T(HALF), F(0), F(1, 2), F(1, 2))])
    report = grid_continuity_oracle(f, creal_of(HALF), 3)
    assert not report.passed
    assert _exact_witness(report)["oscillation"] == HALF


def test_volterra_impossibility_examples():
    for f in (thomae(), pl_identity(), spike_indicator(rationals())):
        report = volterra_impossibility(f)
        assert report.passed, report.to_text()
        assert isinstance(report.checks[0].witness["approx"], Fraction)


def test_ftc_checker_rejects_wrong_quotient():
    f = pl_identity()
    y, cert = ftc_point(f)
    bad = replace(cert, quotient=cert.quotient + 1)
    report = ftc_checker(y, bad, f)
    assert not report.passed
    assert isinstance(_exact_witness(report)["quotient"], Fraction)


def test_integral_zero_checker_rejects_wrong_interval():
    f = constant(0)
    y, cert = integral_zero_point(f)
    far = Interval(F(0), dyadic(70))
    report = integral_zero_checker(y, replace(cert, interval=far), f)
    assert not report.passed
    assert isinstance(_exact_witness(report)["approx"], Fraction)


def test_strict_max_checker_rejects_wide_ball():
    f = spike_indicator(rationals())
    w = list(islice(enumerate_strict_maxima(f), 3))[2]
    assert w.location == T(HALF)
    assert strict_max_checker(w, f).passed
    # radius 1 around 1/2 contains 0, whose spike 1/2 beats the 1/4 at 1/2
    report = strict_max_checker(replace(w, N=0), f)
    assert not report.passed


def test_riemann_sum_oracle_rejects_wrong_value():
    report = riemann_sum_oracle(pl_identity(), F(1, 3), mesh_bits=8, tol_bits=6)
    assert not report.passed
    assert _exact_witness(report)["difference"] > dyadic(6)


def test_pointwise_checkers():
    assert interval_membership(creal_of(HALF), Interval(0, 1)).passed
    assert not interval_membership(creal_of(HALF), Interval(0, HALF)).passed
    assert discontinuity_checker(thomae(), HALF).passed
    report = discontinuity_checker(pl_identity(), HALF)
    assert not report.passed
    assert _exact_witness(report)["value"] == HALF


def test_report_rendering():
    report = check_separation(strong_cantor(HeightSet.from_levels({0: [HALF]}))[1], HeightSet.from_levels({0: [HALF]}), 0)
    text = report.to_text()
    assert text.startswith("report separation: PASS")
    data = report.to_structured()
    assert data["overall"] == "pass" and data["checks"][0]["passed"] is True
    bad = grid_continuity_oracle(thomae(), creal_of(HALF), 2)
    assert "sample=1/2" in bad.to_text()
    assert bad.to_structured()["checks"][-1]["witness"]["sample"] == "1/2"


@given(st.lists(st.booleans(), max_size=8))
def test_report_is_conjunction(flags):
    report = VerificationReport("x")
    for i, ok in enumerate(flags):
        report.add(f"check {i}", ok, index=i)
    assert report.passed == all(flags)
    assert [c.description for c in report.failures()] == [f"check {i}" for i, ok in enumerate(flags) if not ok]


def test_checkers_take_plain_creals():
    # the checkers need nothing but approximants: a hand-built CReal works
    y = CReal(lambda n: F(1, 3) + F(1, 7) * dyadic(n + 2), label="near 1/3")
    assert grid_continuity_oracle(pl_identity(), y, 6).passed
