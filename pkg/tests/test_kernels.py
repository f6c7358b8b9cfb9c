import os
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

import regcantor._kernels as kernels
from regcantor._kernels import _pykernels

try:
    from regcantor._kernels import _ctrisect
except ImportError:  # extension not built
    _ctrisect = None

BACKENDS = [_pykernels] + ([_ctrisect] if _ctrisect is not None else [])
needs_ext = pytest.mark.skipif(_ctrisect is None, reason="compiled kernels not built")


def naive_third(m, pow3, c: Fraction, pref):
    """Reference: first third in (pref, 1, 2-pref) whose closed extent misses the ball."""
    w = Fraction(1, pow3)
    a = m * w
    r = w / 9
    for j in (pref, 1, 2 - pref):
        lo, hi = a + j * w / 3, a + (j + 1) * w / 3
        if c + r < lo or c - r > hi:
            return j
    raise AssertionError("no third")


def naive_run(m, pow3, centres, k0):
    digits = []
    for i, c in enumerate(centres):
        pref = 2 * (bin(k0 + i).count("1") & 1)
        j = pref if c is None else naive_third(m, pow3, Fraction(*c), pref)
        digits.append(j)
        m, pow3 = 3 * m + j, 3 * pow3
    return m, pow3, bytes(digits)


@st.composite
def batches(draw):
    k0 = draw(st.integers(0, 60))
    pow3 = 3**k0
    m = draw(st.integers(0, pow3 - 1))
    n = draw(st.integers(1, 24))
    centres = []
    lo, hi = m, m + 1
    for i in range(n):
        kind = draw(st.sampled_from(["blank", "far", "near"]))
        if kind == "blank":
            centres.append(None)
        elif kind == "far":
            den = draw(st.integers(1, 10**6))
            centres.append((draw(st.integers(-den, 2 * den)), den))
        else:
            # within a few stage widths of the batch interval, with a fine denominator
            den = pow3 * 3 ** draw(st.integers(0, n + 2)) * draw(st.integers(1, 36))
            span = den // pow3
            centres.append((draw(st.integers(lo * span - span, hi * span + span)), den))
    return m, pow3, centres, k0


def test_preference_is_thue_morse():
    expected = [0, 2, 2, 0, 2, 0, 0, 2, 2, 0, 0, 2, 0, 2, 2, 0]
    for backend in BACKENDS:
        assert [backend.preference(k) for k in range(16)] == expected


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
@given(batches())
def test_run_stages_matches_naive(backend, batch):
    m, pow3, centres, k0 = batch
    assert backend.run_stages(m, pow3, centres, k0) == naive_run(m, pow3, centres, k0)


@needs_ext
@given(batches())
def test_backends_agree(batch):
    assert _ctrisect.run_stages(*batch) == _pykernels.run_stages(*batch)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def test_hand_example_digits(backend):
    # 1/2 forces the left third, 1/4 rules out the right third of [0, 1/3]
    assert backend.run_stages(0, 1, [(1, 2), (1, 4), (3, 4)], 0) == (2, 27, bytes([0, 0, 2]))


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
@given(st.integers(1, 40), st.integers(-3, 12), st.integers(-3, 12), st.integers(1, 5))
def test_coprime_band_matches_naive(backend, q_hi, a, b, scale):
    lo, hi = Fraction(a, 8 * scale), Fraction(b, 8 * scale)
    got = backend.coprime_band(1, q_hi, lo.numerator, lo.denominator, hi.numerator, hi.denominator)
    want = [
        (p, q)
        for q in range(1, q_hi)
        for p in range(-4 * q, 4 * q + 1)
        if gcd(p, q) == 1 and lo <= Fraction(p, q) <= hi
    ]
    assert got == want


def test_selected_backend():
    assert kernels.BACKEND in ("python", "cython")
    if os.environ.get("REGCANTOR_PURE_PYTHON"):
        assert kernels.BACKEND == "python"
    elif _ctrisect is not None:
        assert kernels.BACKEND == "cython"
