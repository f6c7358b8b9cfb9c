"""Presentation files: named functions and height sets in a small text format.

    # comments run to end of line
    function f {
        base: pl [(0,0),(1/2,1),(1,0)]
        steps: [{at: 1/3, left: 0, value: 1/4, right: 1/2}]
        spikes: levels { 1: [(1/4, 1/2)], 3: [(1/2 + 1/8*sqrt2, -1/8)] }
        separation: [none, 1/16, none]
    }
    heightset A { levels { 0: [1/2], 2: [1/3, sqrt2 - 1] } }
    heightset Q { builtin rationals }

``spikes`` may also be ``builtin NAME``.  Every invariant of the target
types is checked while parsing and violations carry the line number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact import DomainError, TaggedPoint, dyadic, format_rational, parse_point, parse_rational
from .presentations import (
    HeightSet,
    PresentationError,
    RegulatedPresentation,
    SpikeStream,
    Step,
    rationals,
    spike_indicator,
    thomae,
)

__all__ = [
    "FormatError",
    "FunctionDef",
    "HeightSetDef",
    "Definitions",
    "parse",
    "format_definitions",
    "format_point",
    "BUILTINS",
]

BUILTINS = ("thomae", "rationals", "rationals_spike")


class FormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<sqrt>\*?sqrt2)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[+-])
  | (?P<punct>[{}\[\](),:])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int


def _tokenize(text: str) -> list[_Tok]:
    out, line, pos = [], 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormatError(line, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind != "ws":
            out.append(_Tok(kind, m.group(), line))
        pos = m.end()
    out.append(_Tok("eof", "", line))
    return out


def format_point(x: TaggedPoint) -> str:
    if x.r == 0:
        return format_rational(x.q)
    sign = "-" if x.r < 0 else "+"
    return f"{format_rational(x.q)} {sign} {format_rational(abs(x.r))}*sqrt2"


@dataclass
class FunctionDef:
    name: str
    base: list[tuple[Fraction, Fraction]]
    steps: list[Step] = field(default_factory=list)
    spikes: Union[str, dict, None] = None  # builtin name or {level: [(point, value)]}
    separation: Optional[list[Optional[Fraction]]] = None
    line: int = 0

    def build(self) -> RegulatedPresentation:
        if isinstance(self.spikes, str):
            stream = _builtin_spikes(self.spikes)
        elif self.spikes:
            stream = SpikeStream.from_levels(self.spikes, name=self.name)
        else:
            stream = SpikeStream.empty()
        return RegulatedPresentation(
            tuple(self.base),
            steps=tuple(self.steps),
            spikes=stream,
            separation=None if self.separation is None else tuple(self.separation),
            name=self.name,
        )

    def to_text(self) -> str:
        lines = [f"function {self.name} {{"]
        base = ",".join(f"({format_rational(x)},{format_rational(v)})" for x, v in self.base)
        lines.append(f"  base: pl [{base}]")
        if self.steps:
            items = ", ".join(
                f"{{at: {format_point(s.at)}, left: {format_rational(s.left)}, "
                f"value: {format_rational(s.value)}, right: {format_rational(s.right)}}}"
                for s in self.steps
            )
            lines.append(f"  steps: [{items}]")
        if isinstance(self.spikes, str):
            lines.append(f"  spikes: builtin {self.spikes}")
        elif self.spikes:
            body = ", ".join(
                f"{n}: [" + ", ".join(f"({format_point(x)}, {format_rational(v)})" for x, v in pts) + "]"
                for n, pts in sorted(self.spikes.items())
            )
            lines.append(f"  spikes: levels {{ {body} }}")
        if self.separation is not None:
            seps = ", ".join("none" if r is None else format_rational(r) for r in self.separation)
            lines.append(f"  separation: [{seps}]")
        lines.append("}")
        return "\n".join(lines)


@dataclass
class HeightSetDef:
    name: str
    source: Union[str, dict]  # builtin name or {level: [points]}
    line: int = 0

    def build(self) -> HeightSet:
        if isinstance(self.source, str):
            return _builtin_heightset(self.source)
        return HeightSet.from_levels(self.source, name=self.name)

    def to_text(self) -> str:
        if isinstance(self.source, str):
            return f"heightset {self.name} {{ builtin {self.source} }}"
        body = ", ".join(
            f"{n}: [" + ", ".join(format_point(x) for x in pts) + "]" for n, pts in sorted(self.source.items())
        )
        return f"heightset {self.name} {{ levels {{ {body} }} }}"


class Definitions(dict):
    """Ordered name -> definition map; ``get_function`` / ``get_heightset`` build the objects."""

    def get_function(self, name: str) -> RegulatedPresentation:
        d = self.get(name)
        if not isinstance(d, FunctionDef):
            raise KeyError(f"no function named {name!r}")
        return d.build()

    def get_heightset(self, name: str) -> HeightSet:
        d = self.get(name)
        if not isinstance(d, HeightSetDef):
            raise KeyError(f"no height set named {name!r}")
        return d.build()

    def to_text(self) -> str:
        return format_definitions(self)


def format_definitions(defs) -> str:
    return "\n".join(d.to_text() for d in defs.values()) + "\n"


def _builtin_spikes(name: str) -> SpikeStream:
    if name == "thomae":
        return thomae().spikes
    return spike_indicator(rationals()).spikes


def _builtin_heightset(name: str) -> HeightSet:
    # every builtin is presented over the rationals of [0, 1] by denominator
    return rationals()


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise FormatError(t.line, f"expected {text!r}, found {t.text or 'end of input'!r}")
        return t

    def ident(self) -> _Tok:
        t = self.next()
        if t.kind != "ident":
            raise FormatError(t.line, f"expected a name, found {t.text or 'end of input'!r}")
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text:
            self.i += 1
            return True
        return False

    def _term_text(self) -> tuple[str, int]:
        line = self.tok.line
        parts = []
        prev = "op"
        while self.tok.kind in ("num", "sqrt", "op"):
            t = self.next()
            if t.kind == "num" and prev != "op" or t.kind == "sqrt" and prev == "sqrt":
                raise FormatError(t.line, f"missing operator before {t.text!r}")
            parts.append(t.text)
            prev = t.kind
        if not parts:
            raise FormatError(line, f"expected a number, found {self.tok.text or 'end of input'!r}")
        return "".join(parts), line

    def rational(self) -> Fraction:
        s, line = self._term_text()
        try:
            return parse_rational(s)
        except (ValueError, ZeroDivisionError, DomainError) as exc:
            raise FormatError(line, f"bad rational {s!r}: {exc}") from None

    def point(self) -> TaggedPoint:
        s, line = self._term_text()
        try:
            return parse_point(s)
        except (ValueError, ZeroDivisionError, DomainError) as exc:
            raise FormatError(line, f"bad point {s!r}: {exc}") from None

    def listof(self, item):
        self.expect("[")
        out = []
        if self.accept("]"):
            return out
        while True:
            out.append(item())
            if self.accept("]"):
                return out
            self.expect(",")

    def levels(self, item) -> dict:
        """``levels { n: [item, ...], ... }`` with line numbers per entry."""
        self.expect("{")
        table: dict = {}
        lines: dict = {}
        while not self.accept("}"):
            t = self.next()
            if t.kind != "num" or "/" in t.text:
                raise FormatError(t.line, f"expected a level number, found {t.text!r}")
            n = int(t.text)
            if n in table:
                raise FormatError(t.line, f"level {n} given twice")
            self.expect(":")
            entry_lines = []

            def wrapped():
                line = self.tok.line
                v = item()
                entry_lines.append(line)
                return v

            entries = self.listof(wrapped)
            table[n], lines[n] = entries, entry_lines
            self.accept(",")
        return table, lines

    # -- definitions ------------------------------------------------------------------

    def parse(self) -> Definitions:
        defs = Definitions()
        while self.tok.kind != "eof":
            t = self.ident()
            name = self.ident()
            if name.text in defs:
                raise FormatError(name.line, f"{name.text!r} is defined twice")
            if t.text == "function":
                defs[name.text] = self.function(name.text, t.line)
            elif t.text == "heightset":
                defs[name.text] = self.heightset(name.text, t.line)
            else:
                raise FormatError(t.line, f"expected 'function' or 'heightset', found {t.text!r}")
        return defs

    def _builtin(self) -> str:
        t = self.ident()
        if t.text not in BUILTINS:
            raise FormatError(t.line, f"unknown builtin {t.text!r} (known: {', '.join(BUILTINS)})")
        return t.text

    def function(self, name: str, line: int) -> FunctionDef:
        self.expect("{")
        d = FunctionDef(name, [], line=line)
        seen = set()
        while not self.accept("}"):
            key = self.ident()
            if key.text in seen:
                raise FormatError(key.line, f"field {key.text!r} given twice")
            seen.add(key.text)
            self.expect(":")
            if key.text == "base":
                kind = self.ident()
                if kind.text != "pl":
                    raise FormatError(kind.line, f"only 'pl' bases are supported, found {kind.text!r}")
                d.base = self.listof(self._pair_rr)
                _check_base(d.base, key.line)
            elif key.text == "steps":
                d.steps = self.listof(self._step)
            elif key.text == "spikes":
                if self.accept("builtin"):
                    d.spikes = self._builtin()
                else:
                    kw = self.ident()
                    if kw.text != "levels":
                        raise FormatError(kw.line, f"expected 'builtin' or 'levels', found {kw.text!r}")
                    table, lines = self.levels(self._pair_pr)
                    _check_spikes(table, lines)
                    d.spikes = table
            elif key.text == "separation":
                d.separation = self.listof(self._radius)
            else:
                raise FormatError(key.line, f"unknown field {key.text!r}")
        if "base" not in seen:
            raise FormatError(line, f"function {name} has no base")
        try:
            d.build()
        except (PresentationError, DomainError) as exc:
            raise FormatError(line, f"function {name}: {exc}") from None
        return d

    def heightset(self, name: str, line: int) -> HeightSetDef:
        self.expect("{")
        kw = self.ident()
        if kw.text == "builtin":
            d = HeightSetDef(name, self._builtin(), line)
        elif kw.text == "levels":
            table, lines = self.levels(self.point)
            _check_heightset(table, lines)
            d = HeightSetDef(name, table, line)
        else:
            raise FormatError(kw.line, f"expected 'builtin' or 'levels', found {kw.text!r}")
        self.expect("}")
        return d

    def _pair_rr(self):
        self.expect("(")
        x = self.rational()
        self.expect(",")
        v = self.rational()
        self.expect(")")
        return x, v

    def _pair_pr(self):
        self.expect("(")
        x = self.point()
        self.expect(",")
        v = self.rational()
        self.expect(")")
        return x, v

    def _radius(self):
        if self.accept("none"):
            return None
        return self.rational()

    def _step(self) -> Step:
        start = self.expect("{")
        vals: dict = {}
        while not self.accept("}"):
            key = self.ident()
            if key.text not in ("at", "left", "value", "right") or key.text in vals:
                raise FormatError(key.line, f"unexpected step field {key.text!r}")
            self.expect(":")
            vals[key.text] = self.point() if key.text == "at" else self.rational()
            self.accept(",")
        missing = {"at", "left", "value", "right"} - set(vals)
        if missing:
            raise FormatError(start.line, f"step is missing {', '.join(sorted(missing))}")
        return Step(vals["at"], vals["left"], vals["value"], vals["right"])


def _check_base(base, line):
    if len(base) < 2 or base[0][0] != 0 or base[-1][0] != 1:
        raise FormatError(line, "base breakpoints must start at x=0 and end at x=1")
    for (a, _), (b, _) in zip(base, base[1:]):
        if not a < b:
            raise FormatError(line, f"base breakpoints out of order at x={format_rational(b)}")


def _check_unit(x, line):
    if x < 0 or x > 1:
        raise FormatError(line, f"point {format_point(x)} lies outside [0, 1]")


def _check_spikes(table, lines):
    seen: dict = {}
    for n in sorted(table):
        for (x, v), line in zip(table[n], lines[n]):
            _check_unit(x, line)
            if abs(v) > dyadic(n):
                raise FormatError(
                    line,
                    f"spike value {format_rational(v)} at level {n} exceeds the bound {format_rational(dyadic(n))}",
                )
            if x in seen:
                raise FormatError(line, f"spike location {format_point(x)} already occurs at level {seen[x]}")
            seen[x] = n


def _check_heightset(table, lines):
    seen: dict = {}
    for n in sorted(table):
        for x, line in zip(table[n], lines[n]):
            _check_unit(x, line)
            if x in seen:
                raise FormatError(
                    line, f"point {format_point(x)} already occurs at level {seen[x]} (first occurrence)"
                )
            seen[x] = n


def parse(text: str) -> Definitions:
    """Parse and validate a presentation file."""
    return _Parser(text).parse()
