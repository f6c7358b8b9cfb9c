"""Effective presentations of weakly countable sets and regulated functions.

A regulated function on [0, 1] is presented as

    f(x) = base(x) + steps(x) + spike(x)

where ``base`` is continuous and piecewise linear with rational breakpoints,
``steps`` is a finite sum of elementary step functions (each one is constant
left of its location, constant right of it, and takes a third value at it)
and ``spike`` is supported on a height-presented countable set whose level-n
entries have magnitude at most 2**-n.  One-sided limits ignore the spikes,
so they are exact elements of Q(sqrt 2).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import _kernels
from .exact import (
    CReal,
    DomainError,
    Interval,
    TaggedPoint,
    as_point,
    coprime_fraction,
    dyadic,
    rational_lower_bound,
)

__all__ = [
    "PresentationError",
    "PreconditionError",
    "HeightSet",
    "Step",
    "SpikeStream",
    "RegulatedPresentation",
    "JumpLevel",
    "Classification",
    "WeakContinuity",
    "Piece",
    "evaluate",
    "base_value",
    "bs_value",
    "jump_set",
    "spike_indicator",
    "thomae",
    "rationals",
    "pl",
    "pl_identity",
    "constant",
    "tent",
    "classify_point",
    "weak_continuity_at",
    "range_bounds",
    "discontinuity_candidates",
    "pieces",
    "lipschitz_bound",
    "DEFAULT_SCAN",
]

# levels scanned when a spike value has to be found without an oracle
DEFAULT_SCAN = 16

ZERO = Fraction(0)
ONE = Fraction(1)


class PresentationError(ValueError):
    """A presentation violates one of its data invariants."""


class PreconditionError(ValueError):
    """An operation was called outside its precondition."""


def _norm(v):
    """Collapse rational elements of Q(sqrt 2) to Fractions."""
    if isinstance(v, TaggedPoint) and v.r == 0:
        return v.q
    return v


def _check_unit(x: TaggedPoint, what="point"):
    if x < 0 or x > 1:
        raise DomainError(f"{what} {x} is outside [0, 1]")


class _LevelCache:
    """Thread-safe memo for a total level map n -> tuple."""

    def __init__(self, fn):
        self._fn = fn
        self._memo: dict[int, tuple] = {}
        self._lock = threading.Lock()

    def __call__(self, n: int) -> tuple:
        if n < 0:
            raise DomainError("levels are indexed by natural numbers")
        with self._lock:
            hit = self._memo.get(n)
        if hit is None:
            hit = tuple(self._fn(n))
            with self._lock:
                hit = self._memo.setdefault(n, hit)
        return hit


# -- height sets ------------------------------------------------------------------


class HeightSet:
    """A weakly countable subset of [0, 1] given by its finite levels.

    ``level(n)`` is the finite tuple of points of height n.  Levels at or
    beyond ``height_bound`` (when given) are empty.  ``membership``, when
    present, decides membership in the whole set and must agree with the
    levels.  ``locate(x)`` optionally returns the level of x (or None when
    x is not in the set) and ``level_in(n, lo, hi)`` optionally lists the
    level-n points inside [lo, hi]; both are shortcuts for sets whose levels
    are too large to scan.
    """

    def __init__(
        self,
        level: Callable[[int], Iterable],
        height_bound: Optional[int] = None,
        membership: Optional[Callable[[TaggedPoint], bool]] = None,
        name: str = "",
        locate: Optional[Callable[[TaggedPoint], Optional[int]]] = None,
        level_in: Optional[Callable[[int, Fraction, Fraction], Iterable]] = None,
    ):
        self._raw = level
        self.level = _LevelCache(self._level)
        self.height_bound = height_bound
        if membership is None and locate is not None:
            membership = lambda x: locate(x) is not None  # noqa: E731
        self.membership = membership
        self.locate = locate
        self._level_in = level_in
        self.name = name
        self._index_lock = threading.Lock()
        self._index: dict = {}
        self._indexed_to = -1

    def _level(self, n):
        if self.height_bound is not None and n >= self.height_bound:
            return ()
        return tuple(x if type(x) is TaggedPoint else as_point(x) for x in self._raw(n))

    @classmethod
    def from_levels(cls, levels, name: str = "", membership=None) -> "HeightSet":
        """Finite presentation from a mapping or sequence of level lists."""
        if not isinstance(levels, dict):
            levels = dict(enumerate(levels))
        table = {int(n): tuple(as_point(x) for x in pts) for n, pts in levels.items()}
        bound = max(table, default=-1) + 1
        hs = cls(lambda n: table.get(n, ()), height_bound=bound, membership=membership, name=name)
        hs.validate(bound)
        return hs

    @classmethod
    def empty(cls) -> "HeightSet":
        return cls(lambda n: (), height_bound=0, name="empty")

    def is_finite_through(self, depth: int) -> bool:
        """True when every nonempty level has index <= depth."""
        return self.height_bound is not None and self.height_bound <= depth + 1

    def levels(self, upto: int) -> Iterator[tuple[int, tuple]]:
        for n in range(upto + 1):
            yield n, self.level(n)

    def elements(self, depth: int) -> list[TaggedPoint]:
        return [x for _, pts in self.levels(depth) for x in pts]

    def _extend_index(self, depth: int):
        with self._index_lock:
            while self._indexed_to < depth:
                n = self._indexed_to + 1
                for x in self.level(n):
                    self._index.setdefault(x, n)
                self._indexed_to = n

    def level_in(self, n: int, lo, hi) -> list[TaggedPoint]:
        if self.height_bound is not None and n >= self.height_bound:
            return []
        if self._level_in is not None:
            return [as_point(x) for x in self._level_in(n, lo, hi)]
        return [x for x in self.level(n) if lo <= x and x <= hi]

    def height(self, x, depth: int = DEFAULT_SCAN) -> Optional[int]:
        """Level of x if it occurs in levels 0..depth, else None."""
        x = as_point(x)
        if self.locate is not None:
            n = self.locate(x)
            return n if n is not None and n <= depth else None
        if self.height_bound is not None:
            depth = min(depth, self.height_bound - 1)
        self._extend_index(depth)
        n = self._index.get(x)
        return n if n is not None and n <= depth else None

    def contains(self, x, depth: int = DEFAULT_SCAN) -> Optional[bool]:
        """Decide x in A: exact via the oracle or a finite presentation, else None if not found."""
        x = as_point(x)
        if self.membership is not None:
            return bool(self.membership(x))
        if self.height(x, depth) is not None:
            return True
        if self.is_finite_through(depth):
            return False
        return None

    def validate(self, depth: int):
        """Check duplicate-freeness, first occurrence and [0, 1] containment up to depth."""
        seen: dict = {}
        for n, pts in self.levels(depth):
            if len(set(pts)) != len(pts):
                raise PresentationError(f"level {n} of {self.name or 'height set'} has duplicates")
            for x in pts:
                if x < 0 or x > 1:
                    raise PresentationError(f"point {x} at level {n} lies outside [0, 1]")
                if x in seen:
                    raise PresentationError(
                        f"point {x} occurs at levels {seen[x]} and {n} (first-occurrence violated)"
                    )
                seen[x] = n

    def union(self, *others: "HeightSet", name: str = "") -> "HeightSet":
        """Levelwise union with later duplicates dropped (first occurrence kept)."""
        parts = (self,) + others
        seen: set = set()
        done = [-1]
        lock = threading.Lock()
        cache: dict[int, tuple] = {}

        def level(n):
            with lock:
                while done[0] < n:
                    k = done[0] + 1
                    out = []
                    for h in parts:
                        for x in h.level(k):
                            if x not in seen:
                                seen.add(x)
                                out.append(x)
                    cache[k] = tuple(out)
                    done[0] = k
                return cache[n]

        bounds = [h.height_bound for h in parts]
        bound = None if any(b is None for b in bounds) else max(bounds, default=0)
        membership = None
        if all(h.membership is not None for h in parts):
            membership = lambda x: any(h.membership(x) for h in parts)  # noqa: E731
        return HeightSet(level, height_bound=bound, membership=membership, name=name)

    def __repr__(self):
        return f"HeightSet({self.name or '...'})"


def _thomae_level(n: int) -> list[TaggedPoint]:
    pairs = _kernels.coprime_band(1 << n, 1 << (n + 1), 0, 1, 1, 1)
    return [TaggedPoint(coprime_fraction(p, q)) for p, q in pairs]


def _is_unit_rational(x: TaggedPoint) -> bool:
    return x.r == 0 and 0 <= x.q <= 1


def _rational_locate(x: TaggedPoint) -> Optional[int]:
    return _rational_level(x) if _is_unit_rational(x) else None


def rationals() -> HeightSet:
    """Q ∩ [0, 1] by denominator bands: level n holds p/q with 2^n <= q < 2^(n+1)."""
    return HeightSet(
        _thomae_level,
        locate=_rational_locate,
        level_in=lambda n, lo, hi: [TaggedPoint(coprime_fraction(p, q)) for p, q in _band(n, lo, hi)],
        name="rationals",
    )


# -- spike streams and presentations ------------------------------------------------


@dataclass(frozen=True)
class Step:
    """Elementary step: ``left`` before ``at``, ``value`` at it, ``right`` after it."""

    at: TaggedPoint
    left: Fraction
    value: Fraction
    right: Fraction

    def offset(self, x: TaggedPoint, side: str = "at") -> Fraction:
        c = x._cmp(self.at)
        if c < 0:
            return self.left
        if c > 0:
            return self.right
        return {"at": self.value, "left": self.left, "right": self.right}[side]

    @property
    def jump(self) -> Fraction:
        return max(abs(self.left - self.value), abs(self.right - self.value))


class SpikeStream:
    """Height-presented spike values; level n entries are (location, value) with |value| <= 2^-n.

    ``lookup`` is an optional decision procedure: ``lookup(x)`` returns
    ``(level, value)`` when x is a spike location and ``None`` otherwise.
    ``level_in(n, lo, hi)`` optionally lists the level-n entries inside
    [lo, hi] without materialising the whole level.
    """

    def __init__(
        self,
        level: Callable[[int], Iterable],
        height_bound: Optional[int] = None,
        lookup: Optional[Callable[[TaggedPoint], Optional[tuple[int, Fraction]]]] = None,
        level_in: Optional[Callable[[int, Fraction, Fraction], Iterable]] = None,
        name: str = "",
    ):
        self._raw = level
        self.level = _LevelCache(self._level)
        self.height_bound = height_bound
        self.lookup = lookup
        self._level_in = level_in
        self.name = name
        self._tables: dict[int, dict] = {}
        self._lock = threading.Lock()

    def _level(self, n):
        if self.height_bound is not None and n >= self.height_bound:
            return ()
        out = []
        bound = dyadic(n)
        for x, v in self._raw(n):
            if type(x) is not TaggedPoint:
                x = as_point(x)
            if type(v) is not Fraction:
                v = Fraction(v)
            if v > bound or -v > bound:
                raise PresentationError(
                    f"spike value {v} at level {n} exceeds the bound {bound}"
                )
            out.append((x, v))
        return out

    @classmethod
    def from_levels(cls, levels, name: str = "") -> "SpikeStream":
        if not isinstance(levels, dict):
            levels = dict(enumerate(levels))
        table = {int(n): tuple((as_point(x), Fraction(v)) for x, v in pts) for n, pts in levels.items()}
        bound = max(table, default=-1) + 1
        s = cls(lambda n: table.get(n, ()), height_bound=bound, name=name)
        s.validate(bound)
        return s

    @classmethod
    def empty(cls) -> "SpikeStream":
        return cls(lambda n: (), height_bound=0, name="none")

    def table(self, n: int) -> dict:
        with self._lock:
            t = self._tables.get(n)
        if t is None:
            t = dict(self.level(n))
            with self._lock:
                t = self._tables.setdefault(n, t)
        return t

    def level_in(self, n: int, lo: Fraction, hi: Fraction) -> list[tuple[TaggedPoint, Fraction]]:
        if self.height_bound is not None and n >= self.height_bound:
            return []
        if self._level_in is not None:
            return [(as_point(x), Fraction(v)) for x, v in self._level_in(n, lo, hi)]
        return [(x, v) for x, v in self.level(n) if lo <= x and x <= hi]

    def locations(self) -> HeightSet:
        membership = None
        if self.lookup is not None:
            membership = lambda x: self.lookup(x) is not None  # noqa: E731
        return HeightSet(
            lambda n: [x for x, _ in self.level(n)],
            height_bound=self.height_bound,
            membership=membership,
            name=f"locations({self.name})",
        )

    def resolve(self, x: TaggedPoint, budget: int = DEFAULT_SCAN):
        """(resolved, level, value) for the spike at x.

        resolved is False when x was not found in levels 0..budget and no
        oracle or finite bound settles the question.
        """
        if self.lookup is not None:
            hit = self.lookup(x)
            if hit is None:
                return True, None, ZERO
            return True, hit[0], Fraction(hit[1])
        top = budget if self.height_bound is None else min(budget, self.height_bound - 1)
        for n in range(top + 1):
            v = self.table(n).get(x)
            if v is not None:
                return True, n, v
        if self.height_bound is not None and self.height_bound <= budget + 1:
            return True, None, ZERO
        return False, None, ZERO

    def validate(self, depth: int):
        seen: dict = {}
        for n in range(depth + 1):
            pts = self.level(n)
            for x, _ in pts:
                if x < 0 or x > 1:
                    raise PresentationError(f"spike location {x} lies outside [0, 1]")
                if x in seen:
                    raise PresentationError(
                        f"spike location {x} occurs at levels {seen[x]} and {n}"
                    )
                seen[x] = n


@dataclass(frozen=True)
class RegulatedPresentation:
    """base (PL, continuous) + finite steps + spike stream, on [0, 1].

    ``separation`` optionally gives, per base breakpoint, a rational radius
    around it that is free of spike locations; strict-maximum enumeration
    needs it at every strict peak of the base.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    steps: tuple[Step, ...] = ()
    spikes: SpikeStream = field(default_factory=SpikeStream.empty)
    separation: Optional[tuple[Optional[Fraction], ...]] = None
    name: str = ""

    def __post_init__(self):
        bps = tuple((Fraction(x), Fraction(v)) for x, v in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2 or bps[0][0] != 0 or bps[-1][0] != 1:
            raise PresentationError("base breakpoints must start at x=0 and end at x=1")
        if any(not (a[0] < b[0]) for a, b in zip(bps, bps[1:])):
            raise PresentationError("base breakpoints must be strictly increasing")
        steps = tuple(self.steps)
        for s in steps:
            if not (0 < s.at < 1):
                raise PresentationError(f"step location {s.at} must lie in (0, 1)")
        if any(not (a.at < b.at) for a, b in zip(steps, steps[1:])):
            raise PresentationError("step locations must be strictly increasing")
        object.__setattr__(self, "steps", steps)
        if self.separation is not None:
            if len(self.separation) != len(bps):
                raise PresentationError("one separation radius per breakpoint is required")
            for r in self.separation:
                if r is not None and Fraction(r) <= 0:
                    raise PresentationError("separation radii must be positive")
        self._check_disjoint()

    def _check_disjoint(self, depth: int = 8):
        if not self.steps:
            return
        locs = {s.at for s in self.steps}
        for x in locs:
            ok, n, _ = self.spikes.resolve(x, depth)
            if ok and n is not None:
                raise PresentationError(f"{x} is both a step and a spike location")

    @property
    def slopes(self) -> list[Fraction]:
        bp = self.breakpoints
        return [(v1 - v0) / (x1 - x0) for (x0, v0), (x1, v1) in zip(bp, bp[1:])]

    def __repr__(self):
        return f"RegulatedPresentation({self.name or '...'})"


# -- constructors -----------------------------------------------------------------------


def pl(points, name: str = "", steps=(), spikes: Optional[SpikeStream] = None, separation=None):
    return RegulatedPresentation(
        tuple(points),
        steps=tuple(steps),
        spikes=spikes if spikes is not None else SpikeStream.empty(),
        separation=separation,
        name=name,
    )


def pl_identity() -> RegulatedPresentation:
    return pl([(0, 0), (1, 1)], name="pl_identity")


def constant(c=0) -> RegulatedPresentation:
    c = Fraction(c)
    return pl([(0, c), (1, c)], name=f"constant({c})")


def tent(peak=Fraction(1, 2), height=ONE, separation=None) -> RegulatedPresentation:
    peak = Fraction(peak)
    sep = None if separation is None else (None, Fraction(separation), None)
    return pl([(0, 0), (peak, height), (1, 0)], name="tent", separation=sep)


def spike_indicator(H: HeightSet) -> RegulatedPresentation:
    """The function equal to 2^-(n+1) on level n of H and 0 elsewhere."""
    lookup = None
    if H.locate is not None:
        def lookup(x):
            n = H.locate(x)
            return None if n is None else (n, dyadic(n + 1))
    elif H.membership is not None:
        def lookup(x):
            if not H.membership(x):
                return None
            n = _search_height(H, x)
            return n, dyadic(n + 1)

    spikes = SpikeStream(
        lambda n: [(x, dyadic(n + 1)) for x in H.level(n)],
        height_bound=H.height_bound,
        lookup=lookup,
        level_in=lambda n, lo, hi: [(x, dyadic(n + 1)) for x in H.level_in(n, lo, hi)],
        name=H.name,
    )
    return RegulatedPresentation(
        ((ZERO, ZERO), (ONE, ZERO)), spikes=spikes, name=f"spike_indicator({H.name})"
    )


def _search_height(H: HeightSet, x) -> int:
    for n in count():
        if H.height_bound is not None and n >= H.height_bound:
            raise PresentationError(f"membership oracle of {H.name} disagrees with its levels at {x}")
        if x in H.level(n):
            return n


def _rational_level(x: TaggedPoint) -> int:
    return x.q.denominator.bit_length() - 1


def _band(n: int, lo, hi):
    """Lowest-terms p/q in [lo, hi] with 2^n <= q < 2^(n+1); bounds may be irrational."""
    exact_lo, exact_hi = lo, hi
    lo = lo.enclosure(n + 4)[0] if isinstance(lo, TaggedPoint) else Fraction(lo)
    hi = hi.enclosure(n + 4)[1] if isinstance(hi, TaggedPoint) else Fraction(hi)
    lo, hi = max(lo, ZERO), min(hi, ONE)
    if lo > hi:
        return []
    out = _kernels.coprime_band(
        1 << n, 1 << (n + 1), lo.numerator, lo.denominator, hi.numerator, hi.denominator
    )
    if isinstance(exact_lo, TaggedPoint) or isinstance(exact_hi, TaggedPoint):
        out = [(p, q) for p, q in out if exact_lo <= Fraction(p, q) and Fraction(p, q) <= exact_hi]
    return out


def thomae() -> RegulatedPresentation:
    """Thomae's function: 1/q at p/q in lowest terms, 0 at irrationals."""

    def level(n):
        return [(x, coprime_fraction(1, x.q.denominator)) for x in _thomae_level(n)]

    def lookup(x):
        if not _is_unit_rational(x):
            return None
        return _rational_level(x), Fraction(1, x.q.denominator)

    def level_in(n, lo, hi):
        return [(TaggedPoint(coprime_fraction(p, q)), coprime_fraction(1, q)) for p, q in _band(n, lo, hi)]

    spikes = SpikeStream(level, lookup=lookup, level_in=level_in, name="thomae")
    return RegulatedPresentation(((ZERO, ZERO), (ONE, ZERO)), spikes=spikes, name="thomae")


# -- exact evaluation -------------------------------------------------------------------


def _segment(f: RegulatedPresentation, x: TaggedPoint, side: str) -> int:
    """Index i of the base segment [x_i, x_{i+1}] used for x (one-sided at breakpoints)."""
    bp = f.breakpoints
    lo, hi = 0, len(bp) - 2
    # last segment whose left end is < x (side left) or <= x (otherwise)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        c = x._cmp(bp[mid][0])
        if c > 0 or (c == 0 and side != "left"):
            lo = mid
        else:
            hi = mid - 1
    return lo


def base_value(f: RegulatedPresentation, x) -> TaggedPoint:
    x = as_point(x)
    i = _segment(f, x, "at")
    (x0, v0), (x1, v1) = f.breakpoints[i], f.breakpoints[i + 1]
    return (x - x0) * ((v1 - v0) / (x1 - x0)) + v0


def base_slope(f: RegulatedPresentation, x, side: str) -> Fraction:
    i = _segment(f, as_point(x), side)
    return f.slopes[i]


def step_offset(f: RegulatedPresentation, x, side: str = "at") -> Fraction:
    x = as_point(x)
    return sum((s.offset(x, side) for s in f.steps), ZERO)


def bs_value(f: RegulatedPresentation, x, side: str = "at") -> TaggedPoint:
    """base + steps at x (``side`` picks the one-sided step value at a step location)."""
    x = as_point(x)
    return base_value(f, x) + step_offset(f, x, side)


def evaluate(f: RegulatedPresentation, x, side: str = "at", budget: int = DEFAULT_SCAN):
    """f(x), f(x-) or f(x+).

    One-sided limits and resolvable point values are exact (Fraction, or a
    TaggedPoint when irrational).  An unresolvable point value is returned
    as a CReal.
    """
    x = as_point(x)
    _check_unit(x)
    if side == "left":
        if x <= 0:
            raise DomainError("left limit needs x > 0")
        return _norm(bs_value(f, x, "left"))
    if side == "right":
        if x >= 1:
            raise DomainError("right limit needs x < 1")
        return _norm(bs_value(f, x, "right"))
    if side != "at":
        raise ValueError(f"unknown side {side!r}")
    core = bs_value(f, x, "at")
    ok, _, s = f.spikes.resolve(x, budget)
    if ok:
        return _norm(core + s)

    def approximant(n):
        ok, _, s = f.spikes.resolve(x, n + 2)
        return core.approx(n + 2) + s

    return CReal(approximant, label=f"{f.name}({x})")


@dataclass(frozen=True)
class JumpLevel:
    n: int
    points: tuple[tuple[TaggedPoint, Fraction], ...]

    @property
    def locations(self) -> list[TaggedPoint]:
        return [x for x, _ in self.points]


def jump_set(f: RegulatedPresentation, n: int) -> JumpLevel:
    """Points of (0, 1) where a one-sided jump exceeds 2^-n, with their jump sizes."""
    bound = dyadic(n)
    out = []
    for s in f.steps:
        if s.jump > bound:
            out.append((s.at, s.jump))
    for k in range(n):
        for x, v in f.spikes.level(k):
            if 0 < x < 1 and abs(v) > bound:
                out.append((x, abs(v)))
    out.sort(key=lambda e: _SortKey(e[0]))
    return JumpLevel(n, tuple(out))


class _SortKey:
    __slots__ = ("x",)

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return self.x < other.x


def discontinuity_candidates(f: RegulatedPresentation) -> HeightSet:
    """Step locations (at level 0) and every spike location: a superset of the discontinuities."""
    locs = f.spikes.locations()
    step_pts = tuple(s.at for s in f.steps)
    step_set = set(step_pts)

    def level(n):
        pts = locs.level(n)
        return step_pts + pts if n == 0 else pts

    membership = None
    if locs.membership is not None:
        membership = lambda x: x in step_set or locs.membership(x)  # noqa: E731
    bound = locs.height_bound
    if bound is not None and step_pts:
        bound = max(bound, 1)
    return HeightSet(level, height_bound=bound, membership=membership, name=f"candidates({f.name})")


# -- classification -----------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    kind: str  # "discontinuous" | "continuous" | "continuous_up_to"
    jump: Optional[Fraction] = None
    budget: Optional[int] = None

    def __str__(self):
        if self.kind == "discontinuous":
            return f"Discontinuous(jump {self.jump})"
        if self.kind == "continuous":
            return "Continuous"
        return f"ContinuousUpTo({self.budget})"


def _step_at(f, x) -> Optional[Step]:
    for s in f.steps:
        if s.at == x:
            return s
    return None


def classify_point(f: RegulatedPresentation, x, budget: int = 0) -> Classification:
    x = as_point(x)
    _check_unit(x)
    s = _step_at(f, x)
    if s is not None:
        if s.jump != 0:
            return Classification("discontinuous", s.jump)
        return Classification("continuous")
    ok, n, v = f.spikes.resolve(x, budget)
    if ok:
        if v != 0:
            return Classification("discontinuous", abs(v))
        return Classification("continuous")
    return Classification("continuous_up_to", budget=budget)


@dataclass(frozen=True)
class WeakContinuity:
    usc: bool
    lsc: bool
    quasi: bool
    darboux: bool
    # (side, z, delta): f misses z on the punctured one-sided delta-neighbourhood
    darboux_witness: Optional[tuple[str, object, Fraction]] = None


def _nearest_obstruction(f, x, side, levels_below, cap=ONE):
    """Rational d > 0 with no breakpoint, step, or spike of level < levels_below in the
    punctured one-sided neighbourhood of radius d."""
    d = cap
    cands = [as_point(b[0]) for b in f.breakpoints] + [s.at for s in f.steps]
    lo = x - d if side == "left" else x
    hi = x if side == "left" else x + d
    lo_r = max(lo.enclosure(8)[0] - 1, ZERO) if isinstance(lo, TaggedPoint) else lo
    hi_r = min(hi.enclosure(8)[1] + 1, ONE) if isinstance(hi, TaggedPoint) else hi
    for n in range(levels_below):
        cands.extend(p for p, _ in f.spikes.level_in(n, lo_r, hi_r))
    for c in cands:
        gap = (x - c) if side == "left" else (c - x)
        if gap.sign() > 0:
            d = min(d, rational_lower_bound(gap))
    return d


def weak_continuity_at(f: RegulatedPresentation, x, depth: int = 64) -> WeakContinuity:
    """usc / lsc / quasi-continuity / Darboux at a listed discontinuity of f."""
    x = as_point(x)
    _check_unit(x)
    step = _step_at(f, x)
    if step is None:
        ok, n, s = f.spikes.resolve(x, depth)
        if not ok or n is None:
            raise PreconditionError(f"{x} is not a listed step or spike location of {f.name}")
    sides = [sd for sd, okside in (("left", x > 0), ("right", x < 1)) if okside]
    value = evaluate(f, x, "at", depth)
    limits = {sd: evaluate(f, x, sd) for sd in sides}
    value, limits = as_point(value), {k: as_point(v) for k, v in limits.items()}
    hi_lim = max(limits.values())
    lo_lim = min(limits.values())
    usc = value >= hi_lim
    lsc = value <= lo_lim
    quasi = any(value == v for v in limits.values())

    witness = None
    for sd in sides:
        c = limits[sd]
        if c == value:
            continue
        z = (c + value) / 2
        g = abs(z - c)
        L = 0
        while not dyadic(L) * 2 < g:
            L += 1
        sigma = abs(base_slope(f, x, sd))
        delta = _nearest_obstruction(f, x, sd, L)
        while not sigma * delta * 2 < g:
            delta /= 2
        witness = (sd, _norm(z), delta)
        break
    return WeakContinuity(usc, lsc, quasi, witness is None, witness)


# -- range bounds -------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """Open interval (lo, hi) on which base + steps is affine: value = intercept + slope*x."""

    lo: TaggedPoint
    hi: TaggedPoint
    slope: Fraction
    left_value: TaggedPoint  # limit at lo from the right
    right_value: TaggedPoint  # limit at hi from the left

    @property
    def length(self) -> TaggedPoint:
        return self.hi - self.lo


def pieces(f: RegulatedPresentation) -> list[Piece]:
    cuts = sorted({as_point(b[0]) for b in f.breakpoints} | {s.at for s in f.steps}, key=_SortKey)
    out = []
    for a, b in zip(cuts, cuts[1:]):
        out.append(
            Piece(a, b, base_slope(f, b, "left"), bs_value(f, a, "right"), bs_value(f, b, "left"))
        )
    return out


def lipschitz_bound(f: RegulatedPresentation) -> Fraction:
    return max(abs(s) for s in f.slopes)


def _bs_extrema(f: RegulatedPresentation, I: Interval):
    lo_p, hi_p = as_point(I.lo), as_point(I.hi)
    cuts = [as_point(b[0]) for b in f.breakpoints] + [s.at for s in f.steps]
    inner = sorted((c for c in cuts if lo_p < c < hi_p), key=_SortKey)
    pts = [lo_p] + inner + [hi_p]
    vals = [bs_value(f, p, "at") for p in pts]
    for a, b in zip(pts, pts[1:]):
        vals.append(bs_value(f, a, "right"))
        vals.append(bs_value(f, b, "left"))
    return min(vals), max(vals)


def _round_down(v, m) -> Fraction:
    v = as_point(v)
    return v.enclosure(m)[0]


def _round_up(v, m) -> Fraction:
    v = as_point(v)
    return v.enclosure(m)[1]


def range_bounds(f: RegulatedPresentation, I: Interval, m: int) -> tuple[Fraction, Fraction]:
    """Rationals lo <= f <= hi on I, each within 2^-(m-1) of the true inf / sup."""
    if I.lo < 0 or I.hi > 1:
        raise DomainError(f"{I} is not contained in [0, 1]")
    bs_lo, bs_hi = _bs_extrema(f, I)
    eps = dyadic(m)
    lo = _round_down(bs_lo, m + 1) - eps
    hi = _round_up(bs_hi, m + 1) + eps
    for n in range(m):
        for x, v in f.spikes.level_in(n, I.lo, I.hi):
            if not (I.lo <= x and x <= I.hi):
                continue
            val = bs_value(f, x, "at") + v
            lo = min(lo, _round_down(val, m + 1))
            hi = max(hi, _round_up(val, m + 1))
    return lo, hi
