"""Command-line front end.

Every command prints exact values (rationals as p/q) in a line-oriented
text form, or as sorted JSON with ``--format structured``.  With
``--verify`` the answer is replayed by the checkers in
``regcantor.verification`` and a failed check gives exit status 1.
Precondition, domain and parse errors give exit status 2.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Optional

from . import analysis as an
from . import corpus
from . import verification as vf
from ._kernels import BACKEND
from .exact import CReal, DomainError, TaggedPoint, approx, parse_point
from .presentations import (
    HeightSet,
    PreconditionError,
    PresentationError,
    classify_point,
    discontinuity_candidates,
    evaluate,
    jump_set,
    weak_continuity_at,
)
from .realisers import ContractViolation, OracleKind, strong_cantor, strong_cantor_from_oracle, strong_cantor_via_baire
from .textformat import FormatError, parse

fmt = vf.fmt


class Output:
    """Ordered key/value result plus verification reports."""

    def __init__(self, command: str):
        self.command = command
        self.fields: list[tuple[str, object]] = []
        self.reports: list[vf.VerificationReport] = []

    def add(self, key: str, value) -> None:
        self.fields.append((key, value))

    def point(self, key: str, y, precision: int) -> None:
        if isinstance(y, CReal):
            self.add(f"{key}_approx", approx(y, precision))
            self.add(f"{key}_precision", f"2^-{precision}")
        else:
            self.add(key, y)

    def verify(self, report: vf.VerificationReport) -> None:
        self.reports.append(report)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def render(self, style: str) -> str:
        if style == "structured":
            doc = {
                "command": self.command,
                "result": {k: _structured(v) for k, v in self.fields},
            }
            if self.reports:
                doc["verification"] = [r.to_structured() for r in self.reports]
                doc["status"] = "pass" if self.passed else "fail"
            return json.dumps(doc, sort_keys=True, indent=2)
        lines = [f"{k}: {fmt(v)}" for k, v in self.fields]
        lines += [r.to_text() for r in self.reports]
        if self.reports:
            lines.append(f"verification: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _structured(v):
    if isinstance(v, (list, tuple)):
        return [_structured(x) for x in v]
    if isinstance(v, bool):
        return v
    return fmt(v)


# -- input resolution -----------------------------------------------------------------------


class _Inputs:
    def __init__(self, args):
        self.args = args
        self._defs = None

    @property
    def defs(self):
        if self._defs is None:
            if not self.args.file:
                self._defs = {}
            else:
                with open(self.args.file, encoding="utf-8") as fh:
                    self._defs = parse(fh.read())
        return self._defs

    def function(self, name: Optional[str]):
        if name is None:
            raise PreconditionError("this command needs --fn NAME")
        if name in self.defs:
            return self.defs.get_function(name)
        return corpus.builtin_function(name)

    def heightset(self, name: Optional[str]) -> HeightSet:
        if name is None:
            raise PreconditionError("this command needs --set NAME")
        if name in self.defs:
            return self.defs.get_heightset(name)
        return corpus.builtin_heightset(name, self.args.seed)


def _point_arg(text: Optional[str], flag: str = "--at") -> TaggedPoint:
    if text is None:
        raise PreconditionError(f"this command needs {flag} POINT")
    try:
        return parse_point(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad point {text!r}: {exc}") from None


def _separation(out: Output, cert, A: HeightSet, depth: int, subject: str):
    out.verify(vf.check_separation(cert, A, depth, subject=subject))


# -- commands ---------------------------------------------------------------------------------


def cmd_eval(args, io: _Inputs, out: Output):
    f = io.function(args.fn)
    x = _point_arg(args.at)
    out.add("function", f.name)
    out.add("x", x)
    out.add("side", args.side)
    v = evaluate(f, x, args.side, args.budget if args.budget is not None else 16)
    out.point("value", v, args.precision)


def cmd_limits(args, io, out):
    f = io.function(args.fn)
    x = _point_arg(args.at)
    budget = args.budget if args.budget is not None else 16
    out.add("function", f.name)
    out.add("x", x)
    if x > 0:
        out.add("left_limit", evaluate(f, x, "left"))
    out.point("value", evaluate(f, x, "at", budget), args.precision)
    if x < 1:
        out.add("right_limit", evaluate(f, x, "right"))
    cls = classify_point(f, x, budget)
    out.add("classification", str(cls))
    if args.verify:
        if cls.kind == "discontinuous":
            out.verify(vf.discontinuity_checker(f, x, budget))
        else:
            # a budgeted "continuous" verdict is only a claim: the grid oracle tests it
            out.verify(vf.grid_continuity_oracle(f, x, args.m))


def cmd_jumpset(args, io, out):
    f = io.function(args.fn)
    J = jump_set(f, args.n)
    out.add("function", f.name)
    out.add("n", args.n)
    out.add("count", len(J.points))
    for x, j in J.points:
        out.add("jump", f"{fmt(x)} size {fmt(j)}")


def _continuity_reports(out, f, y, cert, args):
    _separation(out, cert, discontinuity_candidates(f), args.depth, f"separation from candidates({f.name})")
    out.verify(vf.grid_continuity_oracle(f, y, args.m))


def cmd_continuity_point(args, io, out):
    f = io.function(args.fn)
    y, cert = an.continuity_point(f)
    out.add("function", f.name)
    out.point("y", y, args.precision)
    out.add("certificate", cert.summary())
    if args.verify:
        _continuity_reports(out, f, y, cert, args)


def cmd_continuity_near(args, io, out):
    f = io.function(args.fn)
    x = _point_arg(args.at)
    y, cert = an.continuity_point_near(f, x, args.k)
    out.add("function", f.name)
    out.add("x", x)
    out.add("radius", f"2^-{args.k}")
    out.point("y", y, args.precision)
    out.add("certificate", cert.summary())
    if args.verify:
        out.verify(vf.interval_membership(y, cert.stage_interval(0), subject="y inside the ball"))
        _continuity_reports(out, f, y, cert, args)


def cmd_weak_point(args, io, out):
    f = io.function(args.fn)
    out.add("function", f.name)
    if args.at is not None:
        x = _point_arg(args.at)
        w = weak_continuity_at(f, x)
        out.add("x", x)
        for key in ("usc", "lsc", "quasi", "darboux"):
            out.add(key, "pass" if getattr(w, key) else "fail")
        if w.darboux_witness is not None:
            side, z, delta = w.darboux_witness
            out.add("darboux_witness", f"side {side}, value {fmt(z)} missed within {fmt(delta)}")
        return
    y, cert, flags = an.weak_continuity_point(f)
    out.point("y", y, args.precision)
    for key in ("usc", "lsc", "quasi", "darboux"):
        out.add(key, "pass" if getattr(flags, key) else "fail")
    out.add("certificate", cert.summary())
    if args.verify:
        _continuity_reports(out, f, y, cert, args)


def _disjunct(out, f, ans, args, extra: Optional[HeightSet] = None):
    out.add("branch", ans.branch)
    out.add("note", ans.note)
    if ans.is_left:
        out.add("point", ans.value)
        if args.verify:
            out.verify(vf.discontinuity_checker(f, ans.value))
        return
    out.point("y", ans.value, args.precision)
    out.add("certificate", ans.certificate.summary())
    if args.verify:
        if extra is not None:
            _separation(out, ans.certificate, extra, args.depth, f"separation from {extra.name}")
        _continuity_reports(out, f, ans.value, ans.certificate, args)


def cmd_volterra_rational(args, io, out):
    f = io.function(args.fn)
    out.add("function", f.name)
    ans = an.volterra_rational(f, args.budget)
    _disjunct(out, f, ans, args, corpus.builtin_heightset("rationals"))


def cmd_volterra_pair(args, io, out):
    f = io.function(args.fn)
    g = io.function(args.gn or "rationals_spike")
    y, cert = an.volterra_pair(f, g)
    out.add("functions", f"{f.name}, {g.name}")
    out.point("y", y, args.precision)
    out.add("certificate", cert.summary())
    if args.verify:
        for h in (f, g):
            _continuity_reports(out, h, y, cert, args)


def cmd_volterra_dense(args, io, out):
    f = io.function(args.fn)
    D = io.heightset(args.set or "rationals")
    out.add("function", f.name)
    out.add("dense_set", D.name)
    ans = an.volterra_dense(f, D, args.budget)
    _disjunct(out, f, ans, args, D)


def cmd_band(args, io, out):
    f = io.function(args.fn)
    c = an.infinite_band(f)
    out.add("function", f.name)
    for key, pt in (("a", c.a), ("b", c.b)):
        out.point(key, pt, args.precision)
    out.add("J", c.J)
    out.add("m", c.m)
    out.add("f(a)_upper", c.fa_upper)
    out.add("f(b)_lower", c.fb_lower)
    out.add("exceptions", c.exceptions.name)
    if args.verify:
        out.verify(vf.band_checker(c, f, args.samples, seed=args.seed))


def cmd_integral(args, io, out):
    f = io.function(args.fn)
    a, b = _point_arg(args.a, "--a"), _point_arg(args.b, "--b")
    v = an.riemann_integral(f, a, b)
    out.add("function", f.name)
    out.add("interval", f"[{fmt(a)}, {fmt(b)}]")
    out.add("integral", v)
    if args.verify:
        if a.r == 0 and b.r == 0:
            out.verify(vf.riemann_sum_oracle(f, v, a=a.q, b=b.q))


def cmd_integral_zero(args, io, out):
    f = io.function(args.fn)
    y, cert = an.integral_zero_point(f)
    out.add("function", f.name)
    out.point("y", y, args.precision)
    out.add("interval", cert.interval)
    out.add("certificate", cert.separation.summary())
    if args.verify:
        out.verify(vf.integral_zero_checker(y, cert, f, args.depth))


def cmd_ftc_point(args, io, out):
    f = io.function(args.fn)
    y, cert = an.ftc_point(f)
    out.add("function", f.name)
    out.point("y", y, args.precision)
    out.add("centre", cert.centre)
    out.add("h", cert.h)
    out.add("quotient", cert.quotient)
    out.add("range", f"[{fmt(cert.lo)}, {fmt(cert.hi)}]")
    out.add("oscillation", cert.oscillation)
    out.add("certificate", cert.separation.summary())
    if args.verify:
        out.verify(vf.ftc_checker(y, cert, f, args.depth))


def cmd_nonmax(args, io, out):
    f = io.function(args.fn)
    y, cert = an.non_strict_max_point(f)
    out.add("function", f.name)
    out.point("y", y, args.precision)
    out.add("certificate", cert.summary())
    if args.verify:
        out.verify(vf.nonmax_checker(y, cert, f, args.depth))


def cmd_strict_maxima(args, io, out):
    f = io.function(args.fn)
    out.add("function", f.name)
    ws = list(itertools.islice(an.enumerate_strict_maxima(f), args.count))
    out.add("count", len(ws))
    for w in ws:
        out.add("maximum", f"{fmt(w.location)} ({w.kind}, N={w.N})")
        if args.verify:
            out.verify(vf.strict_max_checker(w, f, args.depth))


def cmd_cantor(args, io, out):
    A = io.heightset(args.set)
    y, cert = strong_cantor(A)
    out.add("set", A.name)
    out.point("y", y, args.precision)
    out.add("certificate", cert.summary())
    # the certified point is the answer here, so the replay always runs
    _separation(out, cert, A, args.depth, f"separation from {A.name}")


def cmd_baire(args, io, out):
    A = io.heightset(args.set)
    y, cert = strong_cantor_via_baire(A)
    out.add("set", A.name)
    out.point("y", y, args.precision)
    out.add("first_interval", cert.record_.interval(0))
    _separation(out, cert, A, args.depth, f"separation from {A.name}")


def cmd_reduce(args, io, out):
    try:
        kind = OracleKind(args.from_kind)
    except ValueError:
        raise PreconditionError(
            f"unknown kind {args.from_kind!r} (kinds: {', '.join(k.value for k in OracleKind)})"
        ) from None
    A = io.heightset(args.set)
    realiser = strong_cantor_from_oracle(kind, an.FORWARD_OPS[kind], depth=args.depth)
    y, cert = realiser(A)
    out.add("kind", kind.value)
    out.add("set", A.name)
    out.point("y", y, args.precision)
    out.add("certificate", cert.summary())
    if args.verify:
        _separation(out, cert, A, args.depth, f"separation from {A.name}")


def cmd_verify(args, io, out):
    if args.op is None:
        if not args.file:
            raise PreconditionError("verify needs --op COMMAND or --file FILE")
        defs = io.defs
        out.add("file", args.file)
        for name, d in defs.items():
            out.add("definition", f"{type(d).__name__[:-3].lower()} {name}")
        out.add("normalized", "\n" + defs.to_text().rstrip())
        return
    if args.op not in COMMANDS or args.op in ("verify", "demo"):
        raise PreconditionError(f"cannot verify {args.op!r}")
    args.verify = True
    out.command = args.op
    COMMANDS[args.op][0](args, io, out)


_DEMOS = {"thomae": "thomae", "spike": "rationals_spike"}


def cmd_demo(args, io, out):
    args.verify = True
    if args.name == "volterra":
        args.fn, args.gn = "thomae", "rationals_spike"
        cmd_volterra_pair(args, io, out)
        f = io.function("thomae")
        rep = vf.volterra_impossibility(f)
        out.verify(rep)
        return
    args.fn = _DEMOS[args.name]
    op = args.op or "continuity-point"
    if op not in COMMANDS or op in ("verify", "demo", "cantor", "baire", "reduce"):
        raise PreconditionError(f"demo cannot run {op!r}")
    out.add("demo", args.name)
    COMMANDS[op][0](args, io, out)


COMMANDS = {
    "eval": (cmd_eval, "value or one-sided limit of f at a point"),
    "limits": (cmd_limits, "f(x-), f(x), f(x+) and the continuity class"),
    "jumpset": (cmd_jumpset, "points where a one-sided jump exceeds 2^-n"),
    "continuity-point": (cmd_continuity_point, "a certified continuity point"),
    "continuity-near": (cmd_continuity_near, "a continuity point within 2^-k of x"),
    "weak-point": (cmd_weak_point, "weak continuity point, or the classifier table at --at"),
    "volterra-rational": (cmd_volterra_rational, "rational discontinuity or irrational continuity point"),
    "volterra-pair": (cmd_volterra_pair, "common continuity point of two functions"),
    "volterra-dense": (cmd_volterra_dense, "discontinuity in D or continuity point outside D"),
    "band": (cmd_band, "band certificate f(a) <= f <= f(b) on J"),
    "integral": (cmd_integral, "exact Riemann integral"),
    "integral-zero": (cmd_integral_zero, "zero of a function with integral 0"),
    "ftc-point": (cmd_ftc_point, "point with a checked difference quotient"),
    "nonmax": (cmd_nonmax, "a point that is no strict local maximum"),
    "strict-maxima": (cmd_strict_maxima, "enumerate strict local maxima"),
    "cantor": (cmd_cantor, "point outside a height-presented set"),
    "baire": (cmd_baire, "strong Cantor point through the Baire realiser"),
    "reduce": (cmd_reduce, "strong Cantor realiser from another problem's oracle"),
    "verify": (cmd_verify, "run a command with verification, or check a presentation file"),
    "demo": (cmd_demo, "demo corpus: thomae, spike or volterra"),
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--file", help="presentation file with function / heightset definitions")
    g.add_argument("--format", choices=("text", "structured"), default="text")
    g.add_argument("--precision", type=int, default=32, help="print approximations to 2^-n")
    g.add_argument("--depth", type=int, default=8, help="certificate replay depth")
    g.add_argument("--budget", type=int, default=None, help="left-branch scan depth")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--verify", action="store_true", help="replay the answer with the checkers")
    g.add_argument("--m", type=int, default=10, help="grid oracle parameter")
    g.add_argument("--samples", type=int, default=1000, help="band checker samples")
    g.add_argument("--fn", help="function name (builtin or from --file)")
    g.add_argument("--gn", help="second function for volterra-pair")
    g.add_argument("--set", help="height set name (builtin or from --file)")
    g.add_argument("--at", help="point, e.g. 1/2 or 1/2 + 1/3*sqrt2")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="regcantor",
        description="Exact strong Cantor realiser and regulated-function operations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=helptext, description=helptext)
        if name == "eval":
            sp.add_argument("--side", choices=("at", "left", "right"), default="at")
        elif name == "jumpset":
            sp.add_argument("--n", type=int, default=3)
        elif name == "continuity-near":
            sp.add_argument("--k", type=int, default=4, help="radius 2^-k")
        elif name == "integral":
            sp.add_argument("--a", default="0")
            sp.add_argument("--b", default="1")
        elif name == "strict-maxima":
            sp.add_argument("--count", type=int, default=10)
        elif name == "reduce":
            sp.add_argument("--from", dest="from_kind", required=True,
                            help="one of: " + ", ".join(k.value for k in OracleKind))
        elif name == "verify":
            sp.add_argument("--op", help="command to run with verification")
            sp.add_argument("--from", dest="from_kind", default="continuity-point")
            sp.add_argument("--side", default="at")
            sp.add_argument("--n", type=int, default=3)
            sp.add_argument("--k", type=int, default=4)
            sp.add_argument("--a", default="0")
            sp.add_argument("--b", default="1")
            sp.add_argument("--count", type=int, default=10)
        elif name == "demo":
            sp.add_argument("name", choices=("thomae", "spike", "volterra"))
            sp.add_argument("--op", help="command to demonstrate (default continuity-point)")
            sp.add_argument("--k", type=int, default=4)
            sp.add_argument("--count", type=int, default=10)
            sp.add_argument("--n", type=int, default=3)
            sp.add_argument("--side", default="at")
            sp.add_argument("--a", default="0")
            sp.add_argument("--b", default="1")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.command)
    io = _Inputs(args)
    try:
        COMMANDS[args.command][0](args, io, out)
    except (PreconditionError, PresentationError, DomainError, FormatError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(exc.report.to_text(), file=sys.stderr)
        return 1
    print(out.render(args.format))
    return 0 if out.passed else 1


if __name__ == "__main__":
    sys.exit(main())
