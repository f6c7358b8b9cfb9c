"""Points outside countable sets: trisection, Baire category, and reverse reductions.

``strong_cantor`` diagonalises a height set by nested trisection.  Stage k
takes the current interval, splits it into three closed thirds and keeps
one that a small ball around the k-th point does not meet, trying an outer
third picked by the Thue-Morse parity of k first.
Every excluded point therefore ends up at a certified positive distance
from the limit point, and those distances form a SeparationCertificate.
"""

from __future__ import annotations

import enum
import threading
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import count
from math import gcd
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from . import _kernels
from .exact import (
    CReal,
    DomainError,
    Interval,
    TaggedPoint,
    abs_diff_lower_bound,
    as_point,
    bits_for,
    coprime_fraction,
    dyadic,
    format_rational,
    rational_lower_bound,
    smooth_fraction,
)
from .presentations import (
    HeightSet,
    PresentationError,
    RegulatedPresentation,
    constant,
    spike_indicator,
)

__all__ = [
    "SeparationEntry",
    "SeparationCertificate",
    "TrisectionCertificate",
    "PointCertificate",
    "ExplicitCertificate",
    "Diagonaliser",
    "cantor_outside",
    "strong_cantor",
    "heightset_to_enumeration",
    "heightset_stream",
    "DenseOpen",
    "BaireRecord",
    "baire_point",
    "strong_cantor_via_baire",
    "OracleKind",
    "ContractViolation",
    "Disjunct",
    "strong_cantor_from_oracle",
    "UNIT",
]

UNIT = Interval(Fraction(0), Fraction(1))

_LOG2_3 = 1.5849625007211563
_CHECKPOINT = 256
_FIRST_PRECISION = 16
_BATCH = 64
# entry_for gives up after this many stages when the stream has no membership test
DEFAULT_STAGE_CAP = 1 << 20


# -- certificates ---------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationEntry:
    """|y - excluded| >= gap, checkable as |approx(y, precision) - excluded| >= gap + 2^-precision."""

    index: int
    excluded: Union[TaggedPoint, CReal]
    level: Optional[int]
    gap: Fraction
    precision: int

    @property
    def description(self) -> str:
        x = self.excluded
        return str(x) if isinstance(x, TaggedPoint) else repr(x)


class SeparationCertificate:
    """Gap witnesses between ``point`` and a countable family of excluded points.

    Subclasses supply ``_lookup(x)`` (index, level, a priori lower bound on
    |point - x|) and ``_record(i)`` (the i-th recorded exclusion).  Entries
    are materialised on demand: the recorded gap is a short rational just
    below the actual distance, and the recorded precision is chosen so that
    the replay check has room to spare.
    """

    point: CReal

    def _lookup(self, x):  # pragma: no cover - interface
        raise NotImplementedError

    def _record(self, i):  # pragma: no cover - interface
        raise NotImplementedError

    def recorded(self) -> int:
        """Number of exclusions recorded so far."""
        raise NotImplementedError  # pragma: no cover

    def _materialise(self, index, x, level, bound: Fraction, n: Optional[int] = None) -> SeparationEntry:
        # the a priori precision (2^-n <= bound / 64) always works; most points sit
        # far from the limit, so coarser precisions are tried first and kept when
        # 2^-n is at most 1/64 of the observed distance
        top = bits_for(bound, 64) if n is None else n
        n = min(top, _FIRST_PRECISION)
        while True:
            a = self.point.approx(n)
            if isinstance(x, CReal):
                lb = abs_diff_lower_bound(a, x.approx(n + 6)) - dyadic(n + 6)
            else:
                lb = abs_diff_lower_bound(a, x)
            if n >= top or (lb > 0 and lb >= 64 * dyadic(n)):
                break
            n = min(top, 2 * n)
        gap = lb * Fraction(15, 16)
        if gap <= 0:
            raise ArithmeticError(f"no positive gap to {x} at index {index}")
        return SeparationEntry(index, x, level, gap, n)

    def entry_for(self, x) -> Optional[SeparationEntry]:
        """The entry covering the excluded point x, or None if x is not covered."""
        hit = self._lookup(as_point(x))
        if hit is None:
            return None
        return self._materialise(*hit)

    def entry(self, i: int) -> SeparationEntry:
        return self._materialise(*self._record(i))

    def entries(self, limit: Optional[int] = None) -> list[SeparationEntry]:
        n = self.recorded() if limit is None else limit
        out = []
        for i in range(n):
            try:
                out.append(self.entry(i))
            except IndexError:  # finite stream ran out before limit
                break
        return out

    def snapshot(self, limit: Optional[int] = None) -> "ExplicitCertificate":
        """Freeze the first ``limit`` entries (all recorded ones by default)."""
        return ExplicitCertificate(self.point, self.entries(limit))

    def summary(self) -> str:
        return f"{type(self).__name__}: {self.recorded()} exclusions recorded"


class ExplicitCertificate(SeparationCertificate):
    """A finite certificate given by its entries (snapshots, hand-made or tampered ones)."""

    def __init__(self, point: CReal, entries: Sequence[SeparationEntry]):
        self.point = point
        self._entries = list(entries)
        self._by_point = {}
        for e in self._entries:
            if isinstance(e.excluded, TaggedPoint):
                self._by_point.setdefault(e.excluded, e)

    def recorded(self) -> int:
        return len(self._entries)

    def entry(self, i: int) -> SeparationEntry:
        return self._entries[i]

    def entry_for(self, x) -> Optional[SeparationEntry]:
        return self._by_point.get(as_point(x))

    def replace_entry(self, i: int, **changes) -> "ExplicitCertificate":
        entries = list(self._entries)
        entries[i] = replace(entries[i], **changes)
        return ExplicitCertificate(self.point, entries)


class PointCertificate(SeparationCertificate):
    """Separation of an exactly known point from anything different from it."""

    def __init__(self, point: TaggedPoint, excluded: Optional[HeightSet] = None):
        self.exact = as_point(point)
        p = self.exact
        self.point = CReal(p.approx, label=str(p))
        self.excluded = excluded
        self._seen: list = []

    def recorded(self) -> int:
        return len(self._seen)

    def _record(self, i):
        return self._seen[i]

    def _lookup(self, x):
        if x == self.exact:
            return None
        bound = rational_lower_bound(abs(x - self.exact))
        level = None
        if self.excluded is not None:
            level = self.excluded.height(x)
        rec = (len(self._seen), x, level, bound)
        self._seen.append(rec)
        return rec


# -- trisection ------------------------------------------------------------------------


StreamItem = Optional[tuple]  # (point, level) or (None, level) for a blank stage


def heightset_stream(A: HeightSet) -> Iterator[tuple]:
    """Level-by-level stream of (point, level); an empty level yields one blank stage."""
    for n in count():
        if A.height_bound is not None and n >= A.height_bound:
            return
        pts = A.level(n)
        if not pts:
            yield (None, n)
        for x in pts:
            yield (x, n)


def heightset_to_enumeration(A: HeightSet) -> Iterator[TaggedPoint]:
    """Concatenation of the levels (lazy; every element appears exactly once)."""
    for x, _ in heightset_stream(A):
        if x is not None:
            yield x


class Diagonaliser:
    """Nested trisection of ``start`` against a stream of points.

    Stage k works in unit coordinates of ``start``, on the interval
    [m_k / 3^k, (m_k + 1) / 3^k].  The k-th point is approximated to within
    3^-k / 18; the ball of radius 3^-k / 9 around the approximation misses
    the chosen third, so the true point is more than width * 3^-k / 18 away
    from every later interval.
    """

    def __init__(self, items: Iterable, start: Interval = UNIT, membership=None):
        if start.width <= 0:
            raise DomainError("trisection needs an interval of positive width")
        self.start = start
        self.lo = start.lo
        self.w = start.width
        ln, ld = self.lo.numerator, self.lo.denominator
        wn, wd = self.w.numerator, self.w.denominator
        self._unit = ln == 0 and wn == wd == 1
        t, self._v3 = wn * ld, 0
        while t % 3 == 0:
            t //= 3
            self._v3 += 1
        # midpoint of stage j is (a p + b (2m+1)) / (c p) with p = 3^j
        self._mid_coeffs = (2 * ln * wd, wn * ld, 2 * ld * wd, 2 * ld * wd * 3**self._v3)
        self._items = iter(items)
        self._exhausted = False
        self._membership = membership
        self._digits = bytearray()
        self._m, self._pow3 = 0, 1
        self._stages: list = []  # per stage: (point, level) or None
        self._index: dict = {}
        self._checkpoints = [(0, 1)]
        self._cursor = (0, 0, 1)
        self._lock = threading.RLock()

    # stage processing

    def _centre(self, x, k: int):
        """(num, den) of a point within 3^-k / 18 of x in unit coordinates; not reduced."""
        ln, ld = self.lo.numerator, self.lo.denominator
        wn, wd = self.w.numerator, self.w.denominator
        if isinstance(x, CReal):
            n = int(k * _LOG2_3) + 7
            e = n + (wd // wn).bit_length()
            c = x.approx(e)
        elif x.r == 0:
            c = x.q
        else:
            n = int(k * _LOG2_3) + 7
            u = (x - self.lo) / self.w
            c = u.approx(n)
            return (c.numerator, c.denominator)
        cn, cd = c.numerator, c.denominator
        return ((cn * ld - ln * cd) * wd, cd * ld * wn)

    def _run_batch(self):
        k0 = len(self._digits)
        size = min(_BATCH, _CHECKPOINT - k0 % _CHECKPOINT)
        centres, recs = [], []
        for i in range(size):
            item = None
            if not self._exhausted:
                try:
                    item = next(self._items)
                except StopIteration:
                    self._exhausted = True
            if item is None or item[0] is None:
                centres.append(None)
                recs.append(None)
            else:
                x = item[0]
                centres.append(self._centre(x, k0 + i))
                recs.append((x, item[1]))
        m, pow3, digits = _kernels.run_stages(self._m, self._pow3, centres, k0)
        self._m, self._pow3 = m, pow3
        self._digits.extend(digits)
        for i, rec in enumerate(recs):
            self._stages.append(rec)
            if rec is not None and isinstance(rec[0], TaggedPoint):
                self._index.setdefault(rec[0], k0 + i)
        if len(self._digits) % _CHECKPOINT == 0:
            self._checkpoints.append((m, pow3))

    def ensure(self, k: int):
        """Run at least k stages."""
        with self._lock:
            while len(self._digits) < k:
                self._run_batch()

    @property
    def stages(self) -> int:
        return len(self._digits)

    @property
    def exhausted(self) -> bool:
        return self._exhausted

    def state(self, k: int) -> tuple[int, int]:
        """(m_k, 3^k): the stage-k interval is [m_k/3^k, (m_k+1)/3^k] in unit coordinates."""
        self.ensure(k)
        with self._lock:
            ck, cm, cp = self._cursor
            j = k // _CHECKPOINT
            if ck <= k and k - ck < k - j * _CHECKPOINT:
                start, m, p = ck, cm, cp
            else:
                start = j * _CHECKPOINT
                m, p = self._checkpoints[j]
            digits = self._digits
            for i in range(start, k):
                m = 3 * m + digits[i]
            if k > start:
                p *= 3 ** (k - start)
            self._cursor = (k, m, p)
            return m, p

    def interval(self, k: int) -> Interval:
        m, p = self.state(k)
        wn, wd = self.w.numerator, self.w.denominator
        lo = self.lo
        a = smooth_fraction(lo.numerator * wd * p + wn * m * lo.denominator, lo.denominator * wd * p, lo.denominator * wd)
        b = smooth_fraction(lo.numerator * wd * p + wn * (m + 1) * lo.denominator, lo.denominator * wd * p, lo.denominator * wd)
        return Interval(a, b)

    def midpoint(self, k: int) -> Fraction:
        # unit midpoint (2m+1) / (2 * 3^k): 3 divides 2m+1 once per trailing digit 1 of m
        self.ensure(k)
        j = k
        while j > 0 and self._digits[j - 1] == 1:
            j -= 1
        m, p = self.state(j)
        if self._unit:
            return coprime_fraction(2 * m + 1, 2 * p)
        a, b, c, cof = self._mid_coeffs
        num = a * p + b * (2 * m + 1)
        den = c * p
        if j <= self._v3:
            g = gcd(num, den)
            return coprime_fraction(num // g, den // g)
        # 3 does not divide 2m+1 here, so num has exactly v3 factors of 3 and
        # gcd(num, den) divides cof; strip its power of two by shifting
        tz = min((num & -num).bit_length(), (cof & -cof).bit_length()) - 1
        if tz:
            num >>= tz
            den >>= tz
        odd = cof >> tz
        if odd != 1:
            g = gcd(num, odd)
            if g != 1:
                num //= g
                den //= g
        return coprime_fraction(num, den)

    def stage_bound(self, k: int) -> Fraction:
        """Strict lower bound on the distance from the stage-k point to the limit."""
        wn, wd = self.w.numerator, self.w.denominator
        return smooth_fraction(wn, 18 * wd * 3**k, wd)

    def stage_precision(self, k: int) -> int:
        """An n with 2^-n <= stage_bound(k) / 64, without forming 3^k."""
        b = int(k * _LOG2_3) + 2  # 2^b > 3^k
        t = -((-1152 * self.w.denominator) // self.w.numerator)
        return b + t.bit_length()

    def record(self, k: int):
        self.ensure(k + 1)
        return self._stages[k]

    def find(self, x: TaggedPoint, cap: int = DEFAULT_STAGE_CAP) -> Optional[int]:
        """Stage at which x was processed, advancing the stream as needed."""
        with self._lock:
            hit = self._index.get(x)
            if hit is not None:
                return hit
            if self._membership is not None and not self._membership(x):
                return None
            while not self._exhausted and len(self._digits) < cap:
                self._run_batch()
                hit = self._index.get(x)
                if hit is not None:
                    return hit
            return None

    def limit(self, label: str = "") -> CReal:
        return CReal(self.midpoint, label=label or "trisection limit")


class TrisectionCertificate(SeparationCertificate):
    """Certificate backed by a Diagonaliser; entries are indexed by stage."""

    def __init__(self, diag: Diagonaliser, point: CReal):
        self.diag = diag
        self.point = point
        self._recorded_list: list[int] = []
        self._recorded_upto = 0

    def _sync(self):
        st = self.diag._stages
        for k in range(self._recorded_upto, len(st)):
            if st[k] is not None:
                self._recorded_list.append(k)
        self._recorded_upto = len(st)

    def recorded(self) -> int:
        with self.diag._lock:
            self._sync()
            return len(self._recorded_list)

    def _record(self, i):
        with self.diag._lock:
            self._sync()
            while i >= len(self._recorded_list) and not self.diag.exhausted:
                self.diag._run_batch()
                self._sync()
            k = self._recorded_list[i]
        x, level = self.diag._stages[k]
        return k, x, level, None, self.diag.stage_precision(k)

    def _lookup(self, x):
        k = self.diag.find(x)
        if k is None:
            return None
        _, level = self.diag._stages[k]
        return k, x, level, None, self.diag.stage_precision(k)

    def stage_interval(self, k: int) -> Interval:
        """Closed interval containing the point, after k stages."""
        return self.diag.interval(k)

    def advance(self, stages: int):
        self.diag.ensure(stages)

    def summary(self) -> str:
        d = self.diag
        return (
            f"trisection of {d.start}: {d.stages} stages run, "
            f"{self.recorded()} exclusions recorded"
            + (", stream exhausted" if d.exhausted else "")
        )


def _diagonalise(items, start: Interval, label: str, membership=None):
    diag = Diagonaliser(items, start, membership)
    y = diag.limit(label)
    return y, TrisectionCertificate(diag, y)


def cantor_outside(xs, start: Interval = UNIT) -> tuple[CReal, TrisectionCertificate]:
    """A point of ``start`` different from every xs(k).

    ``xs`` is an iterable or a callable k -> point; points are TaggedPoints
    (or anything ``as_point`` accepts) or CReals.
    """
    if callable(xs):
        seq = (xs(k) for k in count())
    else:
        seq = iter(xs)

    def items():
        for x in seq:
            yield (x if isinstance(x, CReal) else as_point(x), None)

    return _diagonalise(items(), start, "cantor_outside")


def strong_cantor(A: HeightSet, start: Interval = UNIT) -> tuple[CReal, TrisectionCertificate]:
    """A point of ``start`` (default [0, 1]) outside A, with gaps to every element."""
    return _diagonalise(heightset_stream(A), start, f"outside {A.name or 'A'}", A.membership)


# -- Baire category ------------------------------------------------------------------


OpenInterval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class DenseOpen:
    """An open set given by growing finite unions of rational open intervals.

    ``pieces(m)`` lists the intervals known at stage m; ``density(q, k)``
    returns (m, (a, b)) with (a, b) inside the ball B(q, 2^-k), inside
    [0, 1], and inside one of ``pieces(m)``.
    """

    pieces: Callable[[int], Sequence[OpenInterval]]
    density: Callable[[Fraction, int], tuple[int, OpenInterval]]
    name: str = ""
    ordered: bool = False  # pieces(m) is sorted and disjoint, so witness can bisect

    def witness(self, q: Fraction, k: int) -> tuple[int, OpenInterval, OpenInterval]:
        """Checked density witness: (m, (a, b), containing piece)."""
        try:
            m, (a, b) = self.density(q, k)
        except PresentationError:
            raise
        except Exception as exc:
            raise PresentationError(f"density witness of {self.name or 'open set'} failed at ({q}, {k}): {exc}") from exc
        a, b = Fraction(a), Fraction(b)
        r = dyadic(k)
        if not (a < b):
            raise PresentationError(f"density witness ({a}, {b}) is empty")
        if a < q - r or b > q + r or a < 0 or b > 1:
            raise PresentationError(
                f"density witness ({format_rational(a)}, {format_rational(b)}) is not inside "
                f"B({format_rational(q)}, 2^-{k}) within [0, 1]"
            )
        ps = self.pieces(m)
        if self.ordered:
            i = bisect_right(ps, a, key=lambda p: p[0])
            ps = ps[i - 1: i] if i else ()
        for lo, hi in ps:
            if lo <= a and b <= hi:
                return m, (a, b), (Fraction(lo), Fraction(hi))
        raise PresentationError(
            f"density witness ({format_rational(a)}, {format_rational(b)}) lies in no piece at stage {m}"
        )

    def replay(self, depth: int = 3):
        """Check the density witness at the dyadic probes j/2^depth with radius 2^-(depth+1)."""
        for j in range((1 << depth) + 1):
            self.witness(Fraction(j, 1 << depth), depth + 1)


def unit_open() -> DenseOpen:
    def density(q, k):
        r = dyadic(k)
        return 0, (max(q - r, Fraction(0)), min(q + r, Fraction(1)))

    return DenseOpen(lambda m: [(Fraction(0), Fraction(1))], density, name="(0,1)")


class BaireRecord:
    """Nested closed intervals I_0 ⊇ I_1 ⊇ ... with I_n inside a piece of opens(n)."""

    def __init__(self, opens, probe_depth: int = 3):
        self._opens = opens
        self.probe_depth = probe_depth
        self.intervals: list[Interval] = []
        self.pieces: list[tuple[int, OpenInterval]] = []
        self._checked: set = set()
        self._lock = threading.Lock()

    def open_set(self, n: int) -> DenseOpen:
        if callable(self._opens):
            return self._opens(n)
        if n < len(self._opens):
            return self._opens[n]
        return unit_open()

    def interval(self, n: int) -> Interval:
        with self._lock:
            while len(self.intervals) <= n:
                self._step()
            return self.intervals[n]

    def _step(self):
        n = len(self.intervals)
        prev = self.intervals[-1] if self.intervals else UNIT
        O = self.open_set(n)
        if id(O) not in self._checked:
            O.replay(self.probe_depth)
            self._checked.add(id(O))
        k = n + 1
        while dyadic(k) * 2 > prev.width:
            k += 1
        m, (a, b), piece = O.witness(prev.midpoint, k)
        quarter = (b - a) / 4
        self.intervals.append(Interval(a + quarter, b - quarter))
        self.pieces.append((m, piece))


def baire_point(opens, probe_depth: int = 3) -> tuple[CReal, BaireRecord]:
    """A point in every opens(n); ``opens`` is a sequence (padded with (0,1)) or a callable."""
    rec = BaireRecord(opens, probe_depth)
    rec.interval(0)  # surface malformed witnesses eagerly
    y = CReal(lambda n: rec.interval(n).midpoint, label="baire point")
    return y, rec


def _sort_points(pts):
    if all(p.r == 0 for p in pts):
        return sorted(pts, key=lambda p: p.q)
    return sorted(pts, key=cmp_to_key(lambda a, b: a._cmp(b)))


def _floor_point(t: TaggedPoint) -> int:
    if t.r == 0:
        return t.q.numerator // t.q.denominator
    n = 8
    while True:
        lo, hi = t.enclosure(n)
        a, b = lo.numerator // lo.denominator, hi.numerator // hi.denominator
        if a == b:
            return a
        n += 16


def _round_up_point(p: TaggedPoint, m: int) -> Fraction:
    return p.q if p.r == 0 else p.enclosure(m + 2)[1]


def _round_down_point(p: TaggedPoint, m: int) -> Fraction:
    return p.q if p.r == 0 else p.enclosure(m + 2)[0]


_EPS = Fraction(1, 1 << 60)


def _rational_key(p: TaggedPoint):
    # integer comparisons first; the exact value only breaks ties
    q = p.q
    return ((q.numerator << 64) // q.denominator, q)


def _part_index(p: TaggedPoint, l: Fraction, width: Fraction) -> tuple[int, bool]:
    """floor((p - l) / width), and whether p sits exactly on a part boundary."""
    if p.r == 0:
        u = (p.q - l) / width
        return u.numerator // u.denominator, u.denominator == 1
    return _floor_point((p - l) / width), False


def complement_open(points: Iterable, name: str = "") -> DenseOpen:
    """(0, 1) minus finitely many points, with the interval-splitting density witness."""
    pts = {as_point(0), as_point(1), *map(as_point, points)}
    rat = [p for p in pts if p.r == 0 and 0 <= p.q <= 1]
    irr = [p for p in pts if p.r != 0 and 0 <= p <= 1]
    bounds = _sort_points(rat + irr) if irr else sorted(rat, key=_rational_key)
    # keys[i] <= bounds[i] < keys[i] + _EPS
    keys = [b.q if b.r == 0 else b.approx(64) for b in bounds]

    @lru_cache(maxsize=4)
    def pieces_at(m):
        out = []
        for a, b in zip(bounds, bounds[1:]):
            lo, hi = _round_up_point(a, m), _round_down_point(b, m)
            if lo < hi:
                out.append((lo, hi))
        return tuple(out)

    def pieces(m):
        # rational endpoints need no rounding, so every stage has the same pieces
        return pieces_at(m if irr else 0)

    def points_in(l, h):
        i_lo = bisect_left(keys, l)  # from here on p >= l
        i_hi = max(i_lo, bisect_right(keys, h - _EPS))  # before here p < h
        head = [p for p in bounds[bisect_left(keys, l - _EPS): i_lo] if l <= p]
        tail = [p for p in bounds[i_hi: bisect_right(keys, h)] if p <= h]
        return head + bounds[i_lo:i_hi] + tail

    def density(q, k):
        r = dyadic(k)
        l, h = max(q - r, Fraction(0)), min(q + r, Fraction(1))
        if not (l < h):
            raise DomainError(f"ball around {q} misses [0, 1]")
        inside = points_in(l, h)
        # 2N+1 equal parts and N points blocking at most two parts each;
        # scan the sorted points for the first part nobody blocks
        width = (h - l) / (2 * len(inside) + 1)
        j = 0
        for p in inside:
            t, edge = _part_index(p, l, width)
            if j < (t - 1 if edge else t):
                break
            j = max(j, t + 1)
        a, b = l + j * width, l + (j + 1) * width
        # distance from [a, b] to the nearest boundary point
        near = bounds[max(0, bisect_left(keys, a) - 2): bisect_right(keys, b) + 2]
        d = min(
            (rational_lower_bound(a - p) if p < a else rational_lower_bound(p - b))
            for p in near
        )
        m = max(0, d.denominator.bit_length() - d.numerator.bit_length() - 3)
        while not dyadic(m + 2) < d:
            m += 1
        return m, (a, b)

    return DenseOpen(pieces, density, name=name or "complement", ordered=True)


class BaireCertificate(SeparationCertificate):
    """Gaps from the nested intervals: x in levels <= n is at positive distance from I_n."""

    def __init__(self, A: HeightSet, record: BaireRecord, point: CReal, cap: int = 4096, first_index=None):
        self.A = A
        self.record_ = record
        self.point = point
        self.cap = cap
        # first n whose open set excludes level j
        self.first_index = first_index or (lambda j: j)
        self._seen: list = []

    def recorded(self) -> int:
        return len(self._seen)

    def _record(self, i):
        return self._seen[i]

    def _lookup(self, x):
        h = self.A.height(x, self.cap)
        if h is None:
            return None
        n = self.first_index(h)
        I = self.record_.interval(n)
        if x.r == 0:
            q = x.q
            bound = (I.lo - q) if q < I.lo else (q - I.hi)
        else:
            d = (I.lo - x) if x < I.lo else (x - I.hi)
            bound = rational_lower_bound(d) if d.sign() > 0 else 0
        if bound <= 0:
            raise ArithmeticError(f"{x} lies in I_{n}")
        rec = (n, x, h, bound)
        self._seen.append(rec)
        return rec


def _slow_level(n: int) -> int:
    return (n + 1).bit_length() - 1


def strong_cantor_via_baire(A: HeightSet, probe_depth: int = 3) -> tuple[CReal, BaireCertificate]:
    """strong_cantor through the Baire realiser applied to the complements of A's levels.

    With O_j = (0,1) minus levels <= j, step n uses O_l for l = floor(log2(n+1)).
    The O_j decrease and l is unbounded, so the intersection is that of all
    O_j, but the n-th approximant needs only about log2(n) levels of A.
    """
    cache: dict[int, DenseOpen] = {}
    pts: list = []
    lock = threading.Lock()

    def opens(n):
        l = _slow_level(n)
        with lock:
            while len(cache) <= l:
                j = len(cache)
                pts.extend(A.level(j))
                cache[j] = complement_open(list(pts), name=f"O_{j}")
            return cache[l]

    y, rec = baire_point(opens, probe_depth)
    return y, BaireCertificate(A, rec, y, first_index=lambda j: (1 << j) - 1)


# -- reverse reductions -----------------------------------------------------------------


class OracleKind(enum.Enum):
    ContinuityPoint = "continuity-point"
    WeakContinuityPoint = "weak-point"
    DensityPoint = "continuity-near"
    VolterraRational = "volterra-rational"
    VolterraPair = "volterra-pair"
    DenseVariant = "volterra-dense"
    InfiniteBand = "band"
    IntegralZero = "integral-zero"
    FtcPoint = "ftc-point"
    NonStrictMax = "nonmax"


@dataclass(frozen=True)
class Disjunct:
    """Answer of a disjunctive problem: ``left`` (a listed point) or ``right`` (a certified point)."""

    branch: str
    value: object
    certificate: Optional[SeparationCertificate] = None
    note: str = ""

    @property
    def is_left(self) -> bool:
        return self.branch == "left"


class ContractViolation(RuntimeError):
    """An oracle answer failed the strong Cantor certificate check."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def _post_process(kind: OracleKind, oracle, h: RegulatedPresentation, A: HeightSet):
    """Turn the oracle's answer for h = spike_indicator(A) into (point, certificate)."""
    K = OracleKind
    if kind in (K.ContinuityPoint, K.NonStrictMax):
        y, cert = oracle(h)[:2]
        return y, cert
    if kind is K.IntegralZero:
        y, zc = oracle(h)
        return y, getattr(zc, "separation", zc)
    if kind is K.WeakContinuityPoint:
        y, cert, _flags = oracle(h)
        return y, cert
    if kind is K.DensityPoint:
        return oracle(h, TaggedPoint(Fraction(1, 2)), 1)
    if kind is K.FtcPoint:
        y, ftc = oracle(h)
        return y, getattr(ftc, "separation", ftc)
    if kind is K.VolterraPair:
        return oracle(h, constant(0))
    if kind in (K.VolterraRational, K.DenseVariant):
        from .presentations import rationals

        ans = oracle(h) if kind is K.VolterraRational else oracle(h, rationals())
        if ans.is_left:
            raise ContractViolation(
                f"{kind.name} oracle answered with the left branch {ans.value}; "
                "the reduction needs the continuity branch"
            )
        return ans.value, ans.certificate
    if kind is K.InfiniteBand:
        band = oracle(h)
        if band.a_certificate is not None:
            return band.a, band.a_certificate
        pc = PointCertificate(as_point(band.a), A)
        return pc.point, pc
    raise ValueError(f"unknown oracle kind {kind!r}")  # pragma: no cover


def strong_cantor_from_oracle(kind: OracleKind, oracle, depth: int = 8):
    """Strong Cantor realiser built from an oracle for one of the equivalent problems.

    The returned procedure maps A to (y, certificate); each answer is
    checked against A's levels 0..depth and a ContractViolation carrying
    the failed report is raised if it does not separate.
    """
    from .verification import check_separation

    def realiser(A: HeightSet):
        h = spike_indicator(A)
        y, cert = _post_process(kind, oracle, h, A)
        report = check_separation(cert, A, depth)
        if not report.passed:
            raise ContractViolation(
                f"{kind.name} oracle broke its contract: answer is not certified outside A", report
            )
        return y, cert

    realiser.__name__ = f"strong_cantor_from_{kind.name}"
    return realiser
