"""Independent checkers for realiser outputs.

Nothing here looks inside a realiser.  The checkers only use the public
approximants of the returned points, the recorded certificate data and
exact evaluation of the presentation, so a bug in the construction
cannot also hide itself in the check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import _kernels
from .exact import (
    CReal,
    Interval,
    TaggedPoint,
    abs_diff_at_least,
    approx,
    as_point,
    dyadic,
    format_rational,
)
from .presentations import (
    DEFAULT_SCAN,
    HeightSet,
    RegulatedPresentation,
    bs_value,
    evaluate,
    rationals,
)

__all__ = [
    "Check",
    "VerificationReport",
    "check_separation",
    "grid_continuity_oracle",
    "volterra_impossibility",
    "band_checker",
    "riemann_sum_oracle",
    "ftc_checker",
    "integral_zero_checker",
    "strict_max_checker",
    "interval_membership",
    "discontinuity_checker",
    "nonmax_checker",
    "fmt",
]


def fmt(v) -> str:
    """Text form of exact values: rationals as p/q, points of Q(sqrt2) as q + r*sqrt2."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, TaggedPoint):
        return str(v)
    if isinstance(v, Interval):
        return str(v)
    if isinstance(v, CReal):
        return f"~{format_rational(v.approx(32))}"
    return str(v)


@dataclass
class Check:
    description: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_text(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        line = f"{tag} {self.description}"
        if self.witness:
            line += " [" + ", ".join(f"{k}={fmt(v)}" for k, v in self.witness.items()) + "]"
        return line

    def to_structured(self) -> dict:
        return {
            "description": self.description,
            "passed": self.passed,
            "witness": {k: fmt(v) for k, v in self.witness.items()},
        }


@dataclass
class VerificationReport:
    subject: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, description: str, passed: bool, **witness) -> Check:
        c = Check(description, bool(passed), witness)
        self.checks.append(c)
        return c

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_text(self) -> str:
        lines = [f"report {self.subject}: {'PASS' if self.passed else 'FAIL'}"]
        lines += ["  " + c.to_text() for c in self.checks]
        return "\n".join(lines)

    def to_structured(self) -> dict:
        return {
            "subject": self.subject,
            "overall": "pass" if self.passed else "fail",
            "checks": [c.to_structured() for c in self.checks],
        }


# -- separation ----------------------------------------------------------------------------


def check_separation(cert, A: HeightSet, depth: int, subject: str = "separation") -> VerificationReport:
    """Replay |approx(y, n_x) - x| >= gap_x + 2^-n_x for every x in levels 0..depth of A."""
    report = VerificationReport(subject)
    y = cert.point
    for n in range(depth + 1):
        pts = A.level(n)
        bad = None
        for x in pts:
            e = cert.entry_for(x)
            if e is None:
                bad = ("no certificate entry", {"x": x})
                break
            if not (e.gap > 0):
                bad = ("non-positive gap", {"x": x, "gap": e.gap})
                break
            a = y.approx(e.precision)
            if not abs_diff_at_least(a, x, e.gap, e.precision):
                bad = (
                    "gap not attained",
                    {"x": x, "gap": e.gap, "precision": e.precision, "approx": a},
                )
                break
        if bad is None:
            report.add(f"level {n}: {len(pts)} points separated", True)
        else:
            report.add(f"level {n}: {bad[0]}", False, **bad[1])
    return report


# -- continuity by sampling ------------------------------------------------------------------


def _bs_oscillation(f: RegulatedPresentation, lo: Fraction, hi: Fraction):
    """Exact (min, max) of base + steps over [lo, hi], recomputed from the presentation data."""
    pts = [Fraction(lo), Fraction(hi)]
    for x, _ in f.breakpoints:
        if lo < x < hi:
            pts.append(x)
    vals = []
    for s in f.steps:
        if lo <= s.at <= hi:
            vals.append(bs_value(f, s.at, "at"))
            if s.at > lo:
                vals.append(bs_value(f, s.at, "left"))
            if s.at < hi:
                vals.append(bs_value(f, s.at, "right"))
    vals += [bs_value(f, p, "at") for p in pts]
    return min(vals), max(vals)


def _spike_bound(f, x: TaggedPoint, budget: int):
    """(exact spike value or None, bound on |spike| when unresolved)."""
    ok, _, s = f.spikes.resolve(x, budget)
    return (s, None) if ok else (None, dyadic(budget + 1))


def grid_continuity_oracle(
    f: RegulatedPresentation, y, m: int, budget: int = DEFAULT_SCAN, shrink: Optional[int] = None
) -> VerificationReport:
    """Sample every rational of denominator <= 2^m near approx(y, .) and compare with f near y.

    The window starts at radius 2^-2m and is halved (tracking y more closely)
    up to ``shrink`` times, 2m by default; the check passes as soon as one
    window has base-plus-step oscillation <= 2^-m and every sample within
    2^-m + oscillation of the base-plus-step value at the centre.
    """
    report = VerificationReport(f"grid continuity of {f.name or 'f'} at m={m}")
    if not isinstance(y, CReal):
        y = as_point(y)
    shrink = 2 * m if shrink is None else shrink
    eps = dyadic(m)
    last = None
    for j in range(shrink + 1):
        delta = dyadic(2 * m + j)
        c = approx(y, 2 * m + j + 2)
        lo, hi = max(c - delta, Fraction(0)), min(c + delta, Fraction(1))
        if lo > hi:
            last = ("window misses [0, 1]", {"centre": c})
            continue
        bmin, bmax = _bs_oscillation(f, lo, hi)
        osc = bmax - bmin
        centre_val = bs_value(f, c, "at")
        if osc > eps:
            last = ("oscillation of base+steps exceeds 2^-m", {"delta": delta, "oscillation": osc})
            continue
        samples = _kernels.coprime_band(
            1, (1 << m) + 1, lo.numerator, lo.denominator, hi.numerator, hi.denominator
        )
        failure = None
        for p, q in samples:
            x = TaggedPoint(Fraction(p, q))
            s, unresolved = _spike_bound(f, x, budget)
            dev = abs(bs_value(f, x, "at") + (s or 0) - centre_val)
            if unresolved is not None:
                dev = dev + unresolved
            if dev > eps + osc:
                failure = ({"sample": x, "deviation": dev, "bound": eps + osc, "delta": delta})
                break
        if failure is None:
            report.add(
                f"{len(samples)} rationals with denominator <= 2^{m} within delta of the centre",
                True,
                delta=delta,
                centre=c,
                oscillation=osc,
            )
            return report
        last = ("sample deviates", failure)
    report.add(f"no window down to radius 2^-{2 * m + shrink} passes: {last[0]}", False, **last[1])
    return report


# -- Volterra ------------------------------------------------------------------------------


def volterra_impossibility(f_claim: RegulatedPresentation, depth: int = 6, m: int = 6) -> VerificationReport:
    """Exhibit an irrational point where f_claim is continuous.

    This refutes any claim that f_claim is discontinuous at every irrational.
    The witness avoids every discontinuity candidate and every rational
    (both certified); the report replays both certificates and runs the
    grid oracle at the witness.
    """
    from .analysis import volterra_rational  # forward op producing the witness
    from .presentations import discontinuity_candidates

    report = VerificationReport(f"volterra impossibility for {f_claim.name or 'f'}")
    ans = volterra_rational(f_claim)
    y, cert = ans.value, ans.certificate
    report.add("witness", True, approx=y.approx(32))
    irr = check_separation(cert, rationals(), depth)
    report.add(
        f"witness separated from every rational of height <= {depth}",
        irr.passed,
        **(irr.failures()[0].witness if not irr.passed else {}),
    )
    cand = check_separation(cert, discontinuity_candidates(f_claim), depth)
    report.add(
        f"witness separated from discontinuity candidates of height <= {depth}",
        cand.passed,
        **(cand.failures()[0].witness if not cand.passed else {}),
    )
    grid = grid_continuity_oracle(f_claim, y, m)
    report.add(f"grid continuity at m={m}", grid.passed, **grid.checks[-1].witness)
    return report


# -- bands -----------------------------------------------------------------------------------


def _value_bounds(f, x, budget):
    """Exact f(x) as (v, v) or an enclosure when the spike at x is unresolved."""
    core = bs_value(f, x, "at")
    s, unresolved = _spike_bound(f, as_point(x), budget)
    if unresolved is None:
        v = core + s
        return v, v
    return core - unresolved, core + unresolved


def band_checker(cert, f: RegulatedPresentation, samples: int = 1000, depth: int = DEFAULT_SCAN, seed: int = 0) -> VerificationReport:
    """Re-verify a BandCertificate exactly and sample f on J minus the exceptions."""
    report = VerificationReport(f"band certificate for {f.name or 'f'}")
    J = cert.J
    report.add("J has positive width", J.lo < J.hi, J=J)
    report.add("J lies in [0, 1]", J.lo >= 0 and J.hi <= 1, J=J)
    jmin, jmax = _bs_oscillation(f, J.lo, J.hi)
    eps = dyadic(cert.m)

    # f(a) from above and f(b) from below
    fa_hi, fb_lo, notes = _endpoint_values(cert, f, depth, eps)
    for note in notes:
        report.add(note[0], note[1], **note[2])
    if fa_hi is None or fb_lo is None:
        return report
    report.add("f(a) <= min of base+steps over J", fa_hi <= jmin, fa_upper=fa_hi, min_J=jmin)
    report.add("max of base+steps over J <= f(b)", jmax <= fb_lo, max_J=jmax, fb_lower=fb_lo)

    rng = random.Random(seed)
    width = J.hi - J.lo
    checked = skipped = excepted = 0
    bad = None
    top = 1 << max(1, min(depth, 20))
    for _ in range(samples):
        den = rng.randint(1, top - 1)
        q = J.lo + width * Fraction(rng.randint(0, den), den)
        # each rational sample gets an irrational companion strictly inside J
        shift = width * Fraction(1, 4 * den + 4)
        for x in (TaggedPoint(q), TaggedPoint(q + shift if q < J.hi else q - shift, -shift / 2)):
            ok, n, s = f.spikes.resolve(x, depth)
            if ok and n is not None and s != 0:
                excepted += 1
                if cert.exceptions.contains(x, depth) is False:
                    bad = {"sample": x, "reason": "spike not listed as exception"}
                    break
                continue
            if not ok:
                lo, hi = _value_bounds(f, x, depth)
                if fa_hi <= lo and hi <= fb_lo:
                    checked += 1
                else:
                    skipped += 1
                continue
            v = bs_value(f, x, "at") + s
            checked += 1
            if not (fa_hi <= v and v <= fb_lo):
                bad = {"sample": x, "value": v, "fa_upper": fa_hi, "fb_lower": fb_lo}
                break
        if bad is not None:
            break
    if bad is None:
        report.add(
            f"f(a) <= f(x) <= f(b) at {checked} samples of J ({excepted} exceptions, {skipped} unresolved)",
            checked > 0,
        )
    else:
        report.add("sample outside the band", False, **bad)
    return report


def _endpoint_values(cert, f, depth, eps):
    notes = []
    fa_hi = fb_lo = None
    for name, pt, pcert, region in (
        ("a", cert.a, cert.a_certificate, cert.a_region),
        ("b", cert.b, cert.b_certificate, cert.b_region),
    ):
        if pcert is not None:
            # the point is a certified non-spike inside a region where base+steps is constant
            lo, hi = _bs_oscillation(f, region.lo, region.hi)
            const = lo == hi
            notes.append((f"base+steps constant on the region of {name}", const, {"region": region}))
            lvl = check_separation(pcert, f.spikes.locations(), min(depth, 8))
            notes.append((f"{name} separated from spike locations", lvl.passed, {}))
            inside = pcert.point.approx(64)
            notes.append((
                f"{name} lies in its region",
                region.lo <= inside - dyadic(64) and inside + dyadic(64) <= region.hi,
                {"approx": inside},
            ))
            v = lo if const else None
            lower = upper = v
        else:
            p = as_point(pt)
            ok, n, s = f.spikes.resolve(p, depth)
            core = bs_value(f, p, "at")
            if ok:
                lower = upper = core + s
            else:
                lower, upper = core - eps, core + eps
                shallow = all(p not in f.spikes.table(k) for k in range(min(cert.m, depth + 1)))
                notes.append((
                    f"{name} is no spike location of level < m",
                    shallow,
                    {name: p},
                ))
        if name == "a":
            fa_hi = upper
        else:
            fb_lo = lower
    return fa_hi, fb_lo, notes


# -- integrals and derivatives ---------------------------------------------------------------


def _spike_extremes(f, lo: Fraction, hi: Fraction, m: int):
    """(min, max) of spike values in [lo, hi]: exact for levels < m, 2^-m slack for the tail."""
    smin = smax = Fraction(0)
    for n in range(m):
        for x, v in f.spikes.level_in(n, lo, hi):
            if lo <= x and x <= hi:
                smin, smax = min(smin, v), max(smax, v)
    if f.spikes.height_bound is None or f.spikes.height_bound > m:
        smin, smax = min(smin, -dyadic(m)), max(smax, dyadic(m))
    return smin, smax


def _bs_integral(f: RegulatedPresentation, lo: Fraction, hi: Fraction) -> Fraction:
    """Integral of base + steps over [lo, hi] from the breakpoint data (rational ends only)."""
    cuts = sorted({lo, hi} | {x for x, _ in f.breakpoints if lo < x < hi}
                  | {s.at.q for s in f.steps if s.at.r == 0 and lo < s.at.q < hi})
    total = Fraction(0)
    for a, b in zip(cuts, cuts[1:]):
        # base + steps is affine on (a, b): the midpoint rule is exact
        mid = (a + b) / 2
        total += (b - a) * bs_value(f, mid, "at").q
    return total


def riemann_sum_oracle(f: RegulatedPresentation, value, mesh_bits: int = 12, tol_bits: int = 10,
                       a=0, b=1, budget: int = DEFAULT_SCAN) -> VerificationReport:
    """Midpoint Riemann sum of f on a 2^-mesh_bits grid; compare with ``value`` within 2^-tol_bits."""
    report = VerificationReport(f"riemann sum of {f.name or 'f'}")
    a, b = Fraction(a), Fraction(b)
    k = 1 << mesh_bits
    h = (b - a) / k
    total = Fraction(0)
    slack = Fraction(0)
    for i in range(k):
        x = TaggedPoint(a + h * (2 * i + 1) / 2)
        lo, hi = _value_bounds(f, x, budget)
        total += lo
        slack += hi - lo
    total *= h
    slack *= h
    err = abs(as_point(value) - total)
    tol = dyadic(tol_bits)
    report.add(
        f"|integral - midpoint sum at mesh 2^-{mesh_bits}| <= 2^-{tol_bits}",
        err + slack <= tol,
        integral=value,
        riemann_sum=total,
        difference=err,
    )
    return report


def ftc_checker(y, cert, f: RegulatedPresentation, depth: int = 8) -> VerificationReport:
    """Recompute the symmetric difference quotient and the range of f around y."""
    report = VerificationReport(f"difference quotient of {f.name or 'f'}")
    c, h = cert.centre, cert.h
    q = _bs_integral(f, c - h, c + h) / (2 * h)
    report.add("quotient matches the recomputed integral", q == cert.quotient, quotient=q)
    n = cert.m + 8
    a = approx(y, n)
    report.add(
        "y lies in the checked interval",
        cert.interval.lo + dyadic(n) <= a and a + dyadic(n) <= cert.interval.hi,
        approx=a,
        interval=cert.interval,
    )
    bmin, bmax = _bs_oscillation(f, cert.interval.lo, cert.interval.hi)
    smin, smax = _spike_extremes(f, cert.interval.lo, cert.interval.hi, cert.m)
    report.add(
        "f on the interval lies in [lo, hi]",
        cert.lo <= bmin + smin and bmax + smax <= cert.hi,
        lo=cert.lo,
        hi=cert.hi,
    )
    report.add("lo <= quotient <= hi", cert.lo <= q and q <= cert.hi, quotient=q, oscillation=cert.hi - cert.lo)
    sep = check_separation(cert.separation, f.spikes.locations(), depth)
    report.add(
        f"y separated from spike locations of height <= {depth}",
        sep.passed,
        **(sep.failures()[0].witness if not sep.passed else {}),
    )
    return report


def integral_zero_checker(y, cert, f: RegulatedPresentation, depth: int = 8) -> VerificationReport:
    """base+steps vanishes on the recorded interval around y and y avoids every spike."""
    report = VerificationReport(f"zero of {f.name or 'f'}")
    I = cert.interval
    bmin, bmax = _bs_oscillation(f, I.lo, I.hi)
    report.add("base+steps is 0 on the interval", bmin == 0 and bmax == 0, interval=I)
    n = 64
    a = approx(y, n)
    report.add("y lies in the interval", I.lo + dyadic(n) <= a and a + dyadic(n) <= I.hi, approx=a)
    sep = check_separation(cert.separation, f.spikes.locations(), depth)
    report.add(
        f"y separated from spike locations of height <= {depth}",
        sep.passed,
        **(sep.failures()[0].witness if not sep.passed else {}),
    )
    return report


def strict_max_checker(w, f: RegulatedPresentation, depth: int = 8) -> VerificationReport:
    """Check f(y) < f(x) for y != x within 2^-N of the witnessed location x.

    A base peak needs strictly monotone base on both sides of the ball and no
    spikes in it (scanned to ``depth``).  A positive spike needs base+steps on
    the ball plus every nearby spike to stay below f(x); spikes below the
    scanned levels are bounded by their level magnitude.
    """
    x, r = w.location, dyadic(w.N)
    report = VerificationReport(f"strict maximum at {fmt(x)}")
    lo, hi = max(x - r, TaggedPoint(Fraction(0))), min(x + r, TaggedPoint(Fraction(1)))
    lo_q = lo.q if lo.r == 0 else lo.enclosure(64)[0]
    hi_q = hi.q if hi.r == 0 else hi.enclosure(64)[1]
    ok, _, s = f.spikes.resolve(x, depth)
    fx = bs_value(f, x, "at") + (s if ok else 0)
    if w.kind == "peak":
        xq = x.q
        inner = [b for b, _ in f.breakpoints if lo_q < b < hi_q and b != xq]
        report.add("no base breakpoint in the punctured ball", not inner, radius=r)
        left = [sl for (a, _), (b, _), sl in zip(f.breakpoints, f.breakpoints[1:], f.slopes) if a < xq <= b]
        right = [sl for (a, _), (b, _), sl in zip(f.breakpoints, f.breakpoints[1:], f.slopes) if a <= xq < b]
        report.add(
            "base rises into x and falls after it",
            (not left or left[0] > 0) and (not right or right[0] < 0),
        )
        report.add("no steps in the ball", all(not (lo < st.at and st.at < hi) for st in f.steps))
        near = []
        for n in range(depth + 1):
            near += [p for p, v in f.spikes.level_in(n, lo_q, hi_q) if p != x and lo < p and p < hi]
        report.add(
            f"no spike of height <= {depth} in the punctured ball",
            not near,
            **({"spike": near[0]} if near else {}),
        )
        return report
    # spike: levels below n0 are scanned exactly, deeper ones are at most 2^-n0 <= s/4
    n0 = 0
    while not dyadic(n0) <= s / 4:
        n0 += 1
    n0 = max(n0, depth + 1)
    bound = f.spikes.height_bound
    worst = Fraction(0)
    for n in range(n0 if bound is None else min(n0, bound)):
        for p, v in f.spikes.level_in(n, lo_q, hi_q):
            if p != x and lo < p and p < hi:
                worst = max(worst, v)
    tail = Fraction(0) if bound is not None and bound <= n0 else dyadic(n0)
    top = _bs_oscillation(f, lo_q, hi_q)[1] + max(worst, tail)
    report.add("sup of f on the punctured ball < f(x)", top < fx, fx=fx, bound=top, radius=r)
    return report


# -- small pointwise checks ------------------------------------------------------------------


def interval_membership(y, I: Interval, n: int = 64, subject: str = "membership") -> VerificationReport:
    """approx(y, n) lies in I at distance > 2^-n from its ends, so y is in I."""
    report = VerificationReport(subject)
    a = approx(y, n)
    report.add(
        f"approx(y, {n}) is inside the interval by more than 2^-{n}",
        I.lo + dyadic(n) < a and a + dyadic(n) < I.hi,
        approx=a,
        interval=I,
    )
    return report


def discontinuity_checker(f: RegulatedPresentation, x, budget: int = DEFAULT_SCAN) -> VerificationReport:
    """f(x) differs from a one-sided limit at x, recomputed from the presentation data."""
    x = as_point(x)
    report = VerificationReport(f"discontinuity of {f.name or 'f'} at {fmt(x)}")
    ok, _, s = f.spikes.resolve(x, budget)
    if not ok:
        report.add(f"spike value at x resolved within {budget} levels", False, x=x)
        return report
    value = bs_value(f, x, "at") + s
    sides = [sd for sd, inside in (("left", x > 0), ("right", x < 1)) if inside]
    diffs = {sd: bs_value(f, x, sd) for sd in sides}
    bad = [sd for sd, v in diffs.items() if v != value]
    report.add(
        "a one-sided limit differs from f(x)",
        bool(bad),
        value=value,
        **{f"limit_{sd}": v for sd, v in diffs.items()},
    )
    return report


def _peaks(f: RegulatedPresentation) -> list[TaggedPoint]:
    bps = f.breakpoints
    out = []
    for i, (x, v) in enumerate(bps):
        left = i == 0 or bps[i - 1][1] < v
        right = i == len(bps) - 1 or bps[i + 1][1] < v
        if left and right:
            out.append(TaggedPoint(x))
    return out


def nonmax_checker(y, cert, f: RegulatedPresentation, depth: int = 8) -> VerificationReport:
    """y avoids every base peak and every spike location, so it is no strict maximum."""
    report = VerificationReport(f"non-maximum point of {f.name or 'f'}")
    peaks = _peaks(f)
    if peaks:
        pk = check_separation(cert, HeightSet.from_levels({0: peaks}, name="peaks"), 0)
        report.add(
            f"y separated from the {len(peaks)} strict peaks of the base",
            pk.passed,
            **(pk.failures()[0].witness if not pk.passed else {}),
        )
    sp = check_separation(cert, f.spikes.locations(), depth)
    report.add(
        f"y separated from spike locations of height <= {depth}",
        sp.passed,
        **(sp.failures()[0].witness if not sp.passed else {}),
    )
    return report
