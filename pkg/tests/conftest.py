import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from regcantor.exact import TaggedPoint

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def fractions(lo=-4, hi=4, max_den=64):
    return st.builds(
        Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den)
    ).filter(lambda q: lo <= q <= hi)


def unit_fractions(max_den=64):
    return st.integers(1, max_den).flatmap(
        lambda q: st.integers(0, q).map(lambda p: Fraction(p, q))
    )


def tagged_points(max_den=64):
    return st.builds(TaggedPoint, fractions(max_den=max_den), fractions(-2, 2, max_den))


def unit_points(max_den=32):
    """Points of [0, 1], rational or q + r*sqrt2."""
    irr = st.builds(
        TaggedPoint, unit_fractions(max_den), fractions(-1, 1, max_den)
    ).filter(lambda p: 0 <= p and p <= 1)
    return st.one_of(unit_fractions(max_den).map(TaggedPoint), irr)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
