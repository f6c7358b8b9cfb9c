"""Exact arithmetic: rationals, the point class Q(sqrt 2), and Cauchy reals.

Rationals are :class:`fractions.Fraction` values, which are always kept in
lowest terms with a positive denominator.  Points of the unit interval that
the presentations refer to are elements of Q(sqrt 2), written ``q + r*sqrt2``;
order, equality and rationality of such points are decided by integer
arithmetic alone.  Everything else (outputs of the realisers, say) is a
:class:`CReal`, a fast-converging Cauchy sequence of rationals.
"""

from __future__ import annotations

import enum
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Optional, Union

__all__ = [
    "Fraction",
    "Ordering",
    "TaggedPoint",
    "CReal",
    "Interval",
    "DomainError",
    "as_point",
    "compare",
    "is_rational",
    "approx",
    "creal_of",
    "parse_rational",
    "parse_point",
    "format_rational",
    "dyadic",
    "rational_lower_bound",
    "coprime_fraction",
    "smooth_fraction",
    "abs_diff_lower_bound",
    "abs_diff_at_least",
    "bits_for",
]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def coprime_fraction(numerator: int, denominator: int) -> Fraction:
    """Build a Fraction from integers already known to be coprime, denominator > 0.

    Skips the gcd that ``Fraction(n, d)`` would run; callers must guarantee
    lowest terms themselves.
    """
    return Fraction(numerator, denominator, _normalize=False)


def dyadic(n: int) -> Fraction:
    """2**-n as a Fraction (n may be negative)."""
    if n >= 0:
        return coprime_fraction(1, 1 << n)
    return Fraction(1 << -n)


def _sign_quadratic(a: Fraction, b: Fraction) -> int:
    """Sign of a + b*sqrt(2), decided exactly."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: compare a^2 against 2 b^2
    d = a * a - 2 * b * b
    s = (d > 0) - (d < 0)
    return s if a > 0 else -s


Scalar = Union[int, Fraction]


@dataclass(frozen=True, slots=False)
class TaggedPoint:
    """The number ``q + r*sqrt(2)`` with rational q, r."""

    q: Fraction
    r: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.q, Fraction):
            object.__setattr__(self, "q", Fraction(self.q))
        if not isinstance(self.r, Fraction):
            object.__setattr__(self, "r", Fraction(self.r))

    # -- arithmetic in Q(sqrt 2) ------------------------------------------------

    def __add__(self, other):
        other = as_point(other)
        return TaggedPoint(self.q + other.q, self.r + other.r)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_point(other)
        return TaggedPoint(self.q - other.q, self.r - other.r)

    def __rsub__(self, other):
        return as_point(other) - self

    def __neg__(self):
        return TaggedPoint(-self.q, -self.r)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TaggedPoint(self.q * other, self.r * other)
        other = as_point(other)
        return TaggedPoint(
            self.q * other.q + 2 * self.r * other.r,
            self.q * other.r + self.r * other.q,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return TaggedPoint(self.q / other, self.r / other)
        other = as_point(other)
        norm = other.q * other.q - 2 * other.r * other.r
        if norm == 0:
            raise ZeroDivisionError("division by zero")
        conj = TaggedPoint(other.q, -other.r)
        num = self * conj
        return TaggedPoint(num.q / norm, num.r / norm)

    def __rtruediv__(self, other):
        return as_point(other) / self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order --------------------------------------------------------------------

    def sign(self) -> int:
        return _sign_quadratic(self.q, self.r)

    def _cmp(self, other) -> int:
        other = as_point(other)
        return _sign_quadratic(self.q - other.q, self.r - other.r)

    def __eq__(self, other):
        if isinstance(other, TaggedPoint):
            return self.q == other.q and self.r == other.r
        if isinstance(other, (int, Fraction)):
            return self.r == 0 and self.q == other
        return NotImplemented

    def __hash__(self):
        if self.r == 0:
            return hash(self.q)
        return hash((self.q, self.r))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- approximation ------------------------------------------------------------

    def is_rational(self) -> bool:
        return self.r == 0

    def enclosure(self, n: int) -> tuple[Fraction, Fraction]:
        """Rationals lo <= self <= hi with hi - lo <= 2**-n."""
        if self.r == 0:
            return self.q, self.q
        r = self.r
        k = n + max(0, abs(r.numerator).bit_length() - r.denominator.bit_length() + 1)
        s = isqrt(2 << (2 * k))  # s <= sqrt2 * 2^k < s + 1
        lo2, hi2 = Fraction(s, 1 << k), Fraction(s + 1, 1 << k)
        if r > 0:
            return self.q + r * lo2, self.q + r * hi2
        return self.q + r * hi2, self.q + r * lo2

    def approx(self, n: int) -> Fraction:
        lo, _ = self.enclosure(n)
        return lo

    def to_fraction(self) -> Fraction:
        if self.r != 0:
            raise ValueError(f"{self} is irrational")
        return self.q

    def __str__(self):
        if self.r == 0:
            return format_rational(self.q)
        if self.q == 0:
            return f"{format_rational(self.r)}*sqrt2"
        sign = "+" if self.r > 0 else "-"
        return f"{format_rational(self.q)} {sign} {format_rational(abs(self.r))}*sqrt2"

    def __repr__(self):
        return f"TaggedPoint({self})"


def as_point(x) -> TaggedPoint:
    if isinstance(x, TaggedPoint):
        return x
    if isinstance(x, (int, Fraction)):
        return TaggedPoint(Fraction(x))
    if isinstance(x, str):
        return parse_point(x)
    raise TypeError(f"cannot interpret {x!r} as a point of Q(sqrt2)")


def compare(x, y) -> Ordering:
    """Exact three-way comparison of two points of Q(sqrt 2)."""
    return Ordering(as_point(x)._cmp(y))


def is_rational(x) -> bool:
    return as_point(x).r == 0


def rational_lower_bound(x: TaggedPoint, n: int = 64) -> Fraction:
    """A rational in (0, x] for positive x, halving the slack until it fits."""
    x = as_point(x)
    if x.sign() <= 0:
        raise ValueError("expected a positive value")
    if x.r == 0:
        return x.q
    while True:
        lo, _ = x.enclosure(n)
        if lo > 0:
            return lo
        n += 32


class CReal:
    """A real number given by a fast-converging Cauchy sequence.

    ``approx(n)`` is a rational within 2**-n of the denoted real, and
    successive approximants satisfy ``|approx(n) - approx(n + i)| < 2**-n``.
    Approximants are memoised; the approximant function must be
    deterministic, so memoisation is unobservable.
    """

    __slots__ = ("_fn", "_memo", "_lock", "label")

    def __init__(self, approximant: Callable[[int], Fraction], label: str = ""):
        self._fn = approximant
        self._memo: dict[int, Fraction] = {}
        self._lock = threading.Lock()
        self.label = label

    def approx(self, n: int) -> Fraction:
        if n < 0:
            raise DomainError("precision index must be a natural number")
        with self._lock:
            hit = self._memo.get(n)
        if hit is not None:
            return hit
        value = self._fn(n)
        with self._lock:
            if len(self._memo) > 64:
                self._memo.clear()
            self._memo.setdefault(n, value)
            return self._memo[n]

    def enclosure(self, n: int) -> tuple[Fraction, Fraction]:
        a = self.approx(n)
        e = dyadic(n)
        return a - e, a + e

    def __repr__(self):
        return f"CReal({self.label or '...'})"


def creal_of(x) -> CReal:
    """Embed a rational or a point of Q(sqrt 2) as a Cauchy real."""
    if isinstance(x, CReal):
        return x
    p = as_point(x)
    if p.r == 0:
        q = p.q
        return CReal(lambda n: q, label=str(p))
    return CReal(p.approx, label=str(p))


def approx(x, n: int) -> Fraction:
    """The n-th approximant: a rational within 2**-n of x."""
    if isinstance(x, CReal):
        return x.approx(n)
    return as_point(x).approx(n)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x and x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self):
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


# -- big-number helpers ---------------------------------------------------------
#
# Realiser outputs are rationals with denominators 3^k for k in the tens of
# thousands.  Normalising such fractions through gcd is quadratic, so the
# helpers below either know the prime support of the denominator or avoid
# building fractions at all.


def smooth_fraction(num: int, den: int, cofactor: int) -> Fraction:
    """num/den in lowest terms, where den = cofactor * 2^a * 3^b and cofactor is small."""
    g = gcd(num, cofactor) if cofactor != 1 else 1
    if g > 1:
        num //= g
        den //= g
    if num == 0:
        return Fraction(0)
    tz = min((num & -num).bit_length(), (den & -den).bit_length()) - 1
    if tz > 0:
        num >>= tz
        den >>= tz
    while num % 3 == 0 and den % 3 == 0:
        num //= 3
        den //= 3
    return coprime_fraction(num, den)


def _ratio_lower_bound(n: int, d: int, bits: int = 60) -> Fraction:
    """A rational in [(1 - 2^-bits) n/d, n/d] with small numerator and denominator."""
    if n == 0:
        return Fraction(0)
    s1 = max(0, n.bit_length() - bits - 4)
    s2 = max(0, d.bit_length() - bits - 4)
    top = n >> s1
    bottom = (d >> s2) + (1 if s2 else 0)
    shift = s1 - s2
    if shift >= 0:
        return Fraction(top << shift, bottom)
    return Fraction(top, bottom << -shift)


def _parts(a: Fraction, x: "TaggedPoint"):
    """Integers (alpha, beta, D) with a - x = (alpha + beta*sqrt2) / D and D > 0."""
    an, ad = a.numerator, a.denominator
    qn, qd = x.q.numerator, x.q.denominator
    rn, rd = x.r.numerator, x.r.denominator
    if rn == 0:
        return an * qd - qn * ad, 0, ad * qd
    return (an * qd - qn * ad) * rd, -rn * ad * qd, ad * qd * rd


def abs_diff_lower_bound(a: Fraction, x) -> Fraction:
    """A small rational L with (1 - 2^-4) |a - x| <= L <= |a - x|.

    ``a`` may have a huge denominator; no gcd on large numbers is run.
    """
    x = as_point(x)
    alpha, beta, d = _parts(a, x)
    if beta == 0:
        return _ratio_lower_bound(abs(alpha), d)
    aa, bb = abs(alpha), abs(beta)
    if (alpha >= 0) == (beta >= 0):
        # |alpha| + |beta| sqrt2 >= |alpha| + 1.4 |beta|
        return _ratio_lower_bound(5 * aa + 7 * bb, 5 * d)
    # |alpha - |beta| sqrt2| = |alpha^2 - 2 beta^2| / (|alpha| + |beta| sqrt2), sqrt2 < 3/2
    return _ratio_lower_bound(2 * abs(aa * aa - 2 * bb * bb), (2 * aa + 3 * bb) * d)


def abs_diff_at_least(a: Fraction, x, b: Fraction, n: Optional[int] = None) -> bool:
    """Exact test of |a - x| >= b + 2^-n (just b when n is None), by integer sign analysis.

    Only shifts and products with small factors touch the big numbers of a.
    """
    x = as_point(x)
    alpha, beta, d = _parts(a, x)
    bn, bd = b.numerator, b.denominator
    if beta == 0:
        # |alpha| bd - bn d >= 2^-n bd d, decided by bit lengths when possible
        t = abs(alpha) * bd - bn * d
        if n is None or t <= 0:
            return t >= 0 if n is None else False
        rhs = bd * d
        tb, rb = t.bit_length() + n, rhs.bit_length()
        if tb > rb:
            return True
        if tb < rb:
            return False
        return (t << n) >= rhs
    # scale by d * bd * 2^n > 0: (a - x) - b - 2^-n  ->  (alpha + beta sqrt2) bd 2^n - (bn 2^n + bd) d
    k = 0 if n is None else n
    extra = 0 if n is None else bd * d
    lin = (alpha * bd) << k
    rhs = ((bn * d) << k) + extra
    root = (beta * bd) << k
    up = _sign_quadratic(lin - rhs, root)
    down = _sign_quadratic(-lin - rhs, -root)
    return up >= 0 or down >= 0


def bits_for(bound: Fraction, factor: int = 1) -> int:
    """Least n >= 0 with 2^-n <= bound / factor (bound > 0)."""
    t = -((-factor * bound.denominator) // bound.numerator)
    return max(0, (t - 1).bit_length())


# -- text syntax ----------------------------------------------------------------

_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")
_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?sqrt2)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` (or ``p``) into a Fraction."""
    m = _RAT_RE.match("".join(text.split()))
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def parse_point(text: str) -> TaggedPoint:
    """Parse a sum of rational and rational*sqrt2 terms, e.g. ``1/2 - 1/3*sqrt2``."""
    compact = "".join(text.split())
    if not compact or re.search(r"[\d/]\s+[\d/]", text):
        raise ValueError(f"not a point: {text!r}")
    q = r = Fraction(0)
    pos = 0
    while pos < len(compact):
        m = _TERM_RE.match(compact, pos)
        sign, num, root = m.groups()
        if m.end() == pos or not (num or root) or (pos > 0 and not sign):
            raise ValueError(f"not a point: {text!r}")
        if root and root.startswith("*") and not num:
            raise ValueError(f"not a point: {text!r}")
        c = parse_rational(num) if num else Fraction(1)
        if sign == "-":
            c = -c
        if root:
            r += c
        else:
            q += c
        pos = m.end()
    return TaggedPoint(q, r)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
