"""Forward operations on regulated presentations, each with a checkable answer.

Every point-valued operation reduces to the strong Cantor realiser over a
height set that contains all the points the answer has to avoid; the
resulting separation certificate is the evidence.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Iterator, Optional, Union

from .exact import (
    CReal,
    DomainError,
    Interval,
    TaggedPoint,
    as_point,
    dyadic,
    rational_lower_bound,
)
from .presentations import (
    DEFAULT_SCAN,
    HeightSet,
    PreconditionError,
    RegulatedPresentation,
    WeakContinuity,
    _bs_extrema,
    base_slope,
    bs_value,
    classify_point,
    discontinuity_candidates,
    lipschitz_bound,
    pieces,
    range_bounds,
    rationals,
)
from .realisers import (
    UNIT,
    Disjunct,
    OracleKind,
    PointCertificate,
    SeparationCertificate,
    TrisectionCertificate,
    heightset_to_enumeration,
    strong_cantor,
)

__all__ = [
    "FORWARD_OPS",
    "BandCertificate",
    "StrictMaxWitness",
    "FtcCertificate",
    "IntegralZeroCertificate",
    "continuity_point",
    "continuity_point_near",
    "weak_continuity_point",
    "volterra_rational",
    "volterra_pair",
    "volterra_dense",
    "infinite_band",
    "riemann_integral",
    "integral_zero_point",
    "ftc_point",
    "non_strict_max_point",
    "enumerate_strict_maxima",
    "strict_peaks",
]

ZERO = Fraction(0)
ONE = Fraction(1)


# -- continuity points ---------------------------------------------------------------------


def continuity_point(f: RegulatedPresentation, start: Interval = UNIT):
    """A point of ``start`` avoiding every step and spike location of f (so f is continuous there)."""
    return strong_cantor(discontinuity_candidates(f), start)


def _ball(x: TaggedPoint, k: int) -> Interval:
    r = dyadic(k)
    lo, hi = x - r, x + r
    lo = lo.q if lo.r == 0 else lo.enclosure(k + 4)[1]
    hi = hi.q if hi.r == 0 else hi.enclosure(k + 4)[0]
    return Interval(max(lo, ZERO), min(hi, ONE))


def continuity_point_near(f: RegulatedPresentation, x, k: int):
    """A continuity point of f in [0, 1] ∩ [x - 2^-k, x + 2^-k]."""
    x = as_point(x)
    if x < 0 or x > 1:
        raise DomainError(f"{x} is outside [0, 1]")
    return continuity_point(f, _ball(x, k))


def weak_continuity_point(f: RegulatedPresentation):
    """A continuity point; continuity gives usc, lsc, quasi-continuity and the Darboux property."""
    y, cert = continuity_point(f)
    return y, cert, WeakContinuity(True, True, True, True)


class _RationalSequence:
    """q_n: the rationals of [0, 1] in level order, one per level."""

    def __init__(self):
        self._it = heightset_to_enumeration(rationals())
        self._seen: list = []
        self._lock = threading.Lock()

    def __call__(self, n):
        with self._lock:
            while len(self._seen) <= n:
                self._seen.append(next(self._it))
            return (self._seen[n],)


def _with_rationals(H: HeightSet) -> HeightSet:
    seq = HeightSet(_RationalSequence(), membership=lambda x: x.r == 0 and 0 <= x.q <= 1, name="q_n")
    return H.union(seq, name=f"{H.name} ∪ q_n")


def _listed_discontinuity(f, H: HeightSet, budget: int, accept) -> Optional[TaggedPoint]:
    """First point of H (levels 0..budget) accepted and classified as a discontinuity; interior first."""
    endpoint = None
    for n in range(budget + 1):
        for x in H.level(n):
            if not accept(x):
                continue
            c = classify_point(f, x, budget)
            if c.kind == "discontinuous":
                if 0 < x < 1:
                    return x
                endpoint = endpoint or x
    return endpoint


def volterra_rational(f: RegulatedPresentation, budget: Optional[int] = None) -> Disjunct:
    """Either a rational discontinuity of f or an irrational continuity point.

    With ``budget`` the candidate levels 0..budget are scanned for a rational
    discontinuity first; the continuity branch is the default.
    """
    cand = discontinuity_candidates(f)
    if budget is not None:
        q = _listed_discontinuity(f, cand, budget, lambda x: x.r == 0)
        if q is not None:
            return Disjunct("left", q.q, note=f"discontinuous at the rational {q}")
    y, cert = strong_cantor(_with_rationals(cand))
    return Disjunct("right", y, cert, note="irrational continuity point")


def volterra_pair(f: RegulatedPresentation, g: RegulatedPresentation):
    """A common continuity point of f and g."""
    H = discontinuity_candidates(f).union(discontinuity_candidates(g), name="candidates(f) ∪ candidates(g)")
    return strong_cantor(H)


def volterra_dense(f: RegulatedPresentation, D: HeightSet, budget: Optional[int] = None) -> Disjunct:
    """Either d in D where f is discontinuous or a continuity point of f outside D (D dense)."""
    cand = discontinuity_candidates(f)
    if budget is not None:
        d = _listed_discontinuity(f, D, budget, lambda x: True)
        if d is not None:
            return Disjunct("left", d, note=f"discontinuous at {d} in D")
    y, cert = strong_cantor(cand.union(D, name=f"candidates ∪ {D.name}"))
    return Disjunct("right", y, cert, note="continuity point outside D")


# -- bands -----------------------------------------------------------------------------------


@dataclass(frozen=True)
class BandCertificate:
    """f(a) <= f(x) <= f(b) for every x in J outside ``exceptions``.

    a and b are exact points whose values are bounded within 2^-m by
    base+steps, or, in the constant case, certified non-spike points
    (``a_certificate``) inside a region where base+steps is constant.
    """

    a: Union[TaggedPoint, CReal]
    b: Union[TaggedPoint, CReal]
    J: Interval
    m: int
    exceptions: HeightSet
    fa_upper: Fraction
    fb_lower: Fraction
    a_certificate: Optional[SeparationCertificate] = None
    b_certificate: Optional[SeparationCertificate] = None
    a_region: Optional[Interval] = None
    b_region: Optional[Interval] = None


def _spikes_in(f: RegulatedPresentation, J: Interval) -> HeightSet:
    sp = f.spikes

    def level(n):
        return [x for x, v in sp.level_in(n, J.lo, J.hi) if v != 0]

    membership = None
    if sp.lookup is not None:
        def membership(x):
            hit = sp.lookup(x)
            return hit is not None and hit[1] != 0 and J.lo <= x and x <= J.hi

    return HeightSet(
        level,
        height_bound=sp.height_bound,
        membership=membership,
        level_in=lambda n, lo, hi: [x for x in level(n) if lo <= x and x <= hi],
        name=f"spikes in {J}",
    )


def _rational_inside(lo: TaggedPoint, hi: TaggedPoint, frac: Fraction) -> Fraction:
    """A rational in the open interval (lo, hi) near lo + frac*(hi - lo)."""
    t = lo + (hi - lo) * frac
    if t.r == 0:
        return t.q
    n = 8
    while True:
        c = t.approx(n)
        if lo < c < hi:
            return c
        n += 8


def _non_spike_irrational(f, lo: Fraction, hi: Fraction) -> Optional[TaggedPoint]:
    """An irrational point of (lo, hi) that is provably no spike location, if one can be decided."""
    w = hi - lo
    root = TaggedPoint(ZERO, ONE) - 1  # sqrt2 - 1, in (0, 1)
    for j in range(2, 34):
        t = lo + w * (root + j - 1) / (2 * j)
        ok, n, _ = f.spikes.resolve(t, DEFAULT_SCAN)
        if ok and n is None:
            return t
    return None


def _constant_band(f, piece) -> BandCertificate:
    lo = _rational_inside(piece.lo, piece.hi, Fraction(1, 8))
    hi = _rational_inside(piece.lo, piece.hi, Fraction(7, 8))
    c = piece.left_value
    J = Interval(lo + (hi - lo) / 4, hi - (hi - lo) / 4)
    exceptions = _spikes_in(f, J)
    a = _non_spike_irrational(f, J.lo, J.hi)
    if a is not None:
        v = bs_value(f, a, "at")
        return BandCertificate(a, a, J, 0, exceptions, _upper(v), _lower(v))
    region = Interval(lo, hi)
    y, cert = continuity_point(f, region)
    const = c.q
    return BandCertificate(
        y, y, J, 0, exceptions, const, const,
        a_certificate=cert, b_certificate=cert, a_region=region, b_region=region,
    )


def _upper(v) -> Fraction:
    v = as_point(v)
    return v.q if v.r == 0 else v.enclosure(64)[1]


def _lower(v) -> Fraction:
    v = as_point(v)
    return v.q if v.r == 0 else v.enclosure(64)[0]


def _shallow_spike(f, x, m) -> bool:
    """True when x is a spike location of level < m."""
    if m <= 0:
        return False
    ok, n, s = f.spikes.resolve(x, m - 1)
    return n is not None and n < m


def _avoiding(f, anchor: Fraction, toward: Fraction, m: int) -> Fraction:
    """A rational between anchor and toward (anchor first) that is no spike of level < m."""
    if not _shallow_spike(f, TaggedPoint(anchor), m):
        return anchor
    for s in count(1):
        for j in range(1, 1 << s, 2):
            t = anchor + (toward - anchor) * Fraction(j, 1 << s)
            if not _shallow_spike(f, TaggedPoint(t), m):
                return t


def _sloped_band(f, piece) -> BandCertificate:
    u = piece.lo.q if piece.lo.r == 0 else _rational_inside(piece.lo, piece.hi, Fraction(1, 64))
    v = piece.hi.q if piece.hi.r == 0 else _rational_inside(piece.lo, piece.hi, Fraction(63, 64))
    L = v - u
    sigma = piece.slope
    m = 0
    while not dyadic(m) < abs(sigma) * L / 8:
        m += 1
    low_anchor, low_toward = u + L / 4, u + L / 8
    high_anchor, high_toward = v - L / 4, v - L / 8
    if sigma < 0:
        low_anchor, low_toward, high_anchor, high_toward = high_anchor, high_toward, low_anchor, low_toward
    a = _avoiding(f, low_anchor, low_toward, m)
    b = _avoiding(f, high_anchor, high_toward, m)
    J = Interval(u + 3 * L / 8, u + 5 * L / 8)
    eps = dyadic(m)
    fa = bs_value(f, a, "at")
    fb = bs_value(f, b, "at")
    ok_a, na, sa = f.spikes.resolve(TaggedPoint(a), m)
    ok_b, nb, sb = f.spikes.resolve(TaggedPoint(b), m)
    fa_upper = _upper(fa + sa) if ok_a else _upper(fa) + eps
    fb_lower = _lower(fb + sb) if ok_b else _lower(fb) - eps
    jmin, jmax = _bs_extrema(f, J)
    if not (fa_upper <= jmin and jmax <= fb_lower):
        raise ArithmeticError("band margins do not hold")  # pragma: no cover - guarded by the slope bound
    return BandCertificate(TaggedPoint(a), TaggedPoint(b), J, m, _spikes_in(f, J), fa_upper, fb_lower)


def infinite_band(f: RegulatedPresentation) -> BandCertificate:
    """a, b and an interval J on which f(a) <= f <= f(b) off a countable set."""
    ps = pieces(f)
    flat = [p for p in ps if p.slope == 0]
    if flat:
        best = max(flat, key=lambda p: _length_key(p))
        return _constant_band(f, best)
    best = max(ps, key=lambda p: _length_key(p))
    return _sloped_band(f, best)


def _length_key(p):
    return p.length.approx(64)


# -- integration ---------------------------------------------------------------------------------


def riemann_integral(f: RegulatedPresentation, a=0, b=1):
    """Exact integral of f over [a, b]: trapezoids of the base plus step contributions.

    Spikes sit on a countable set with summable magnitudes and do not change
    the integral.  The result is a Fraction, or a TaggedPoint if a or b is
    irrational.
    """
    a, b = as_point(a), as_point(b)
    if a < 0 or b > 1 or b < a:
        raise DomainError(f"need 0 <= a <= b <= 1, got a={a}, b={b}")
    total = TaggedPoint(ZERO)
    bps = f.breakpoints
    for (x0, v0), (x1, v1) in zip(bps, bps[1:]):
        lo = a if a > x0 else as_point(x0)
        hi = b if b < x1 else as_point(x1)
        if lo < hi:
            slope = (v1 - v0) / (x1 - x0)
            vlo = (lo - x0) * slope + v0
            vhi = (hi - x0) * slope + v0
            total = total + (vlo + vhi) * (hi - lo) / 2
    for s in f.steps:
        left_len = max(min(b, s.at) - a, TaggedPoint(ZERO))
        right_len = max(b - max(a, s.at), TaggedPoint(ZERO))
        total = total + left_len * s.left + right_len * s.right
    return total.q if total.r == 0 else total


# -- zeros and derivatives ----------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralZeroCertificate:
    separation: TrisectionCertificate
    interval: Interval  # stage interval containing y, free of steps, where base+steps vanishes
    spike_depth: int


def integral_zero_point(f: RegulatedPresentation, spike_depth: int = 8):
    """A zero of f, for f with values in [0, 1] and integral 0."""
    lo, hi = _bs_extrema(f, UNIT)
    if lo < 0 or hi > 1:
        raise PreconditionError(f"base+steps leaves [0, 1] (range [{lo}, {hi}])")
    for n in range(spike_depth + 1):
        row = f.spikes.level(n)
        if not row:
            continue
        vals = [s for _, s in row]
        if lo + min(vals) >= 0 and hi + max(vals) <= 1:
            continue  # the whole level stays in [0, 1]
        for x, s in row:
            v = bs_value(f, x, "at") + s
            if v < 0 or v > 1:
                raise PreconditionError(f"f({x}) = {v} is outside [0, 1]")
    integral = riemann_integral(f)
    if integral != 0:
        raise PreconditionError(f"integral of f over [0, 1] is {integral}, not 0")
    y, cert = continuity_point(f)
    # steps come first in the candidate stream: after len(steps) stages they are all excluded
    cert.advance(len(f.steps))
    I = cert.stage_interval(len(f.steps))
    zlo, zhi = _bs_extrema(f, I)
    if not (zlo == 0 and zhi == 0):
        raise ArithmeticError(f"base+steps does not vanish on {I}")  # pragma: no cover - follows from the preconditions
    return y, IntegralZeroCertificate(cert, I, spike_depth)


@dataclass(frozen=True)
class FtcCertificate:
    """F(c+h) - F(c-h) over 2h lies in [lo, hi], as does f on I ∋ y; so it is within hi - lo of f(y)."""

    separation: TrisectionCertificate
    centre: Fraction
    h: Fraction
    interval: Interval
    quotient: Union[Fraction, TaggedPoint]
    lo: Fraction
    hi: Fraction
    m: int

    @property
    def oscillation(self) -> Fraction:
        return self.hi - self.lo

    @property
    def holds(self) -> bool:
        return self.lo <= self.quotient and self.quotient <= self.hi


FTC_START = Interval(Fraction(1, 4), Fraction(3, 4))


def ftc_point(f: RegulatedPresentation, h_bits: int = 12, m: int = 12):
    """A continuity point y in (0, 1) with a checked symmetric difference quotient of F = ∫_0^x f."""
    y, cert = continuity_point(f, FTC_START)
    h = dyadic(h_bits)
    c = y.approx(h_bits + 4)
    I = Interval(c - 2 * h, c + 2 * h)
    q = (riemann_integral(f, 0, c + h) - riemann_integral(f, 0, c - h)) / (2 * h)
    lo, hi = range_bounds(f, I, m)
    out = FtcCertificate(cert, c, h, I, q, lo, hi, m)
    if not out.holds:
        raise ArithmeticError("difference quotient escapes the range bounds")  # pragma: no cover
    return y, out


# -- strict maxima ---------------------------------------------------------------------------------


def strict_peaks(f: RegulatedPresentation) -> list[int]:
    """Indices of base breakpoints that are strict local maxima of the base."""
    sl = f.slopes
    out = []
    n = len(f.breakpoints)
    for i in range(n):
        up = i == 0 or sl[i - 1] > 0
        down = i == n - 1 or sl[i] < 0
        if up and down and not (i == 0 and i == n - 1):
            out.append(i)
    return out


def non_strict_max_point(f: RegulatedPresentation):
    """A point that is not a strict local maximum of f (f without steps)."""
    if f.steps:
        raise PreconditionError("non_strict_max_point needs a presentation without steps")
    peaks = tuple(TaggedPoint(f.breakpoints[i][0]) for i in strict_peaks(f))
    locs = f.spikes.locations()
    peak_set = set(peaks)

    def level(n):
        pts = locs.level(n)
        return peaks + tuple(p for p in pts if p not in peak_set) if n == 0 else tuple(p for p in pts if p not in peak_set)

    membership = None
    if locs.membership is not None:
        membership = lambda x: x in peak_set or locs.membership(x)  # noqa: E731
    bound = locs.height_bound
    if bound is not None and peaks:
        bound = max(bound, 1)
    H = HeightSet(level, height_bound=bound, membership=membership, name=f"peaks ∪ spikes({f.name})")
    return strong_cantor(H)


@dataclass(frozen=True)
class StrictMaxWitness:
    """f(y) < f(location) for every y != location with |y - location| < 2^-N."""

    location: TaggedPoint
    N: int
    kind: str  # "peak" or "spike"


def _least_n_below(r: Fraction) -> int:
    n = 0
    while not dyadic(n) < r:
        n += 1
    return n


def enumerate_strict_maxima(f: RegulatedPresentation, scan_depth: int = DEFAULT_SCAN) -> Iterator[StrictMaxWitness]:
    """All strict local maxima: base peaks first, then positive spikes level by level."""
    if f.steps:
        raise PreconditionError("enumerate_strict_maxima needs a presentation without steps")
    bps = f.breakpoints
    witnesses = []
    for i in strict_peaks(f):
        rho = None if f.separation is None else f.separation[i]
        x = bps[i][0]
        if rho is None:
            raise PreconditionError(f"no separation radius declared for the peak at {x}")
        for n in range(scan_depth + 1):
            near = [p for p, v in f.spikes.level_in(n, x - rho, x + rho) if abs(p - x) < rho]
            if near:
                raise PreconditionError(f"spike at {near[0]} lies within the separation radius of the peak {x}")
        d = rho
        if i > 0:
            d = min(d, x - bps[i - 1][0])
        if i < len(bps) - 1:
            d = min(d, bps[i + 1][0] - x)
        witnesses.append(StrictMaxWitness(TaggedPoint(x), _least_n_below(d), "peak"))
    yield from witnesses

    lip = lipschitz_bound(f)
    sp = f.spikes
    for n in count():
        if sp.height_bound is not None and n >= sp.height_bound:
            return
        for x, s in sp.level(n):
            if s <= 0:
                continue
            # deeper spikes are below s/4; shallower ones are kept outside the ball
            L2 = _least_n_below(s / 2)
            r = s / 2 if lip == 0 else min(ONE, s / (2 * lip))
            for k in range(L2):
                for p, v in sp.level_in(k, x - r, x + r):
                    if p != x:
                        gap = abs(p - x)
                        if gap < r:
                            r = rational_lower_bound(gap)
            yield StrictMaxWitness(x, _least_n_below(r) + 1, "spike")


# forward operation answering each problem of the equivalence network
FORWARD_OPS = {
    OracleKind.ContinuityPoint: continuity_point,
    OracleKind.WeakContinuityPoint: weak_continuity_point,
    OracleKind.DensityPoint: continuity_point_near,
    OracleKind.VolterraRational: volterra_rational,
    OracleKind.VolterraPair: volterra_pair,
    OracleKind.DenseVariant: volterra_dense,
    OracleKind.InfiniteBand: infinite_band,
    OracleKind.IntegralZero: integral_zero_point,
    OracleKind.FtcPoint: ftc_point,
    OracleKind.NonStrictMax: non_strict_max_point,
}
