"""Named builtin functions and height sets, plus seeded random generators."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Union

from .exact import TaggedPoint, dyadic
from .presentations import (
    HeightSet,
    RegulatedPresentation,
    SpikeStream,
    Step,
    constant,
    pl,
    pl_identity,
    rationals,
    spike_indicator,
    tent,
    thomae,
)

__all__ = [
    "FUNCTIONS",
    "HEIGHTSETS",
    "builtin_function",
    "builtin_heightset",
    "random_heightset",
    "random_presentation",
    "random_spike_presentation",
]


def _rationals_spike() -> RegulatedPresentation:
    return spike_indicator(rationals())


FUNCTIONS = {
    "thomae": thomae,
    "pl_identity": pl_identity,
    "rationals_spike": _rationals_spike,
    "zero": lambda: constant(0),
    "one": lambda: constant(1),
    "tent": lambda: tent(separation=Fraction(1, 4)),
}

HEIGHTSETS = ("rationals", "thomae", "random")


def builtin_function(name: str) -> RegulatedPresentation:
    try:
        return FUNCTIONS[name]()
    except KeyError:
        raise KeyError(f"unknown function {name!r} (builtins: {', '.join(FUNCTIONS)})") from None


def builtin_heightset(name: str, seed: int = 0) -> HeightSet:
    if name in ("rationals", "thomae", "rationals_spike"):
        return rationals()
    if name == "random":
        return random_heightset(seed)
    raise KeyError(f"unknown height set {name!r} (builtins: {', '.join(HEIGHTSETS)})")


def _random_point(rng: random.Random, max_den: int) -> TaggedPoint:
    """A point of [0, 1]: mostly rationals, sometimes q + r*sqrt2."""
    q = rng.randint(1, max_den)
    x = Fraction(rng.randint(0, q), q)
    if rng.random() < 0.25:
        r = Fraction(rng.choice((-1, 1)), rng.randint(2, max_den))
        p = TaggedPoint(x, r)
        if 0 <= p and p <= 1:
            return p
    return TaggedPoint(x)


def random_heightset(seed: Union[int, random.Random], levels: int = 16, per_level: int = 8, max_den: int = 64) -> HeightSet:
    """Seeded finite HeightSet: ``levels`` levels of at most ``per_level`` points each."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    seen: set = set()
    table = {}
    for n in range(levels):
        pts = []
        for _ in range(rng.randint(0, per_level)):
            x = _random_point(rng, max_den)
            if x not in seen:
                seen.add(x)
                pts.append(x)
        table[n] = pts
    name = f"random({seed})" if isinstance(seed, int) else "random"
    return HeightSet.from_levels(table, name=name, membership=seen.__contains__)


def random_presentation(seed: Union[int, random.Random], pieces: int = 4, steps: int = 2, max_den: int = 16) -> RegulatedPresentation:
    """Seeded piecewise-linear base plus finite steps, values in [0, 1]."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    xs = sorted({Fraction(rng.randint(1, max_den - 1), max_den) for _ in range(pieces - 1)})
    bps = [(Fraction(0), Fraction(rng.randint(0, max_den), max_den))]
    bps += [(x, Fraction(rng.randint(0, max_den), max_den)) for x in xs]
    bps.append((Fraction(1), Fraction(rng.randint(0, max_den), max_den)))
    at = sorted({Fraction(2 * rng.randint(0, 2 * max_den - 1) + 1, 4 * max_den) for _ in range(steps)})
    st = []
    for a in at:
        vals = [Fraction(rng.randint(-4, 4), 4 * max_den) for _ in range(3)]
        st.append(Step(TaggedPoint(a), *vals))
    name = f"random_pl({seed})" if isinstance(seed, int) else "random_pl"
    return pl(bps, name=name, steps=st)


def random_spike_presentation(seed: Union[int, random.Random], levels: int = 8, per_level: int = 4) -> RegulatedPresentation:
    """Seeded zero base with a finite spike stream of values in (0, 2^-n]."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    seen: set = set()
    table = {}
    for n in range(levels):
        row = []
        for _ in range(rng.randint(0, per_level)):
            x = _random_point(rng, 32)
            if x in seen:
                continue
            seen.add(x)
            row.append((x, dyadic(n) * Fraction(rng.randint(1, 4), 4)))
        table[n] = row
    name = f"random_spikes({seed})" if isinstance(seed, int) else "random_spikes"
    return pl([(0, 0), (1, 0)], name=name, spikes=SpikeStream.from_levels(table, name=name))
