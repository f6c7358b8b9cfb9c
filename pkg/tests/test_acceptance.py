"""Acceptance criteria 1-9, one test each.

Every criterion records a ``criterion N: PASS|FAIL ...`` line; the lines are
printed at the end of the pytest run (see conftest.py) and by running this
file directly with ``python3 tests/test_acceptance.py``.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from math import gcd

import pytest

from regcantor.analysis import (
    FORWARD_OPS,
    ftc_point,
    infinite_band,
    riemann_integral,
    volterra_pair,
)
from regcantor.corpus import FUNCTIONS, random_heightset, random_presentation
from regcantor.exact import TaggedPoint, abs_diff_at_least
from regcantor.presentations import (
    SpikeStream,
    Step,
    evaluate,
    pl,
    pl_identity,
    rationals,
    spike_indicator,
    thomae,
    weak_continuity_at,
)
from regcantor.realisers import OracleKind, strong_cantor, strong_cantor_from_oracle
from regcantor.verification import (
    band_checker,
    check_separation,
    ftc_checker,
    grid_continuity_oracle,
    riemann_sum_oracle,
    volterra_impossibility,
)

F = Fraction
HALF = F(1, 2)
RESULTS: dict = {}


def _record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    return ok


def criterion_1():
    t0 = time.perf_counter()
    failed = []
    for seed in range(50):
        A = random_heightset(seed, levels=16, per_level=8)
        _, cert = strong_cantor(A)
        if not check_separation(cert, A, 16).passed:
            failed.append(seed)
    dt = time.perf_counter() - t0
    return _record(1, not failed and dt < 10, f"50 height sets at depth 16, {len(failed)} failures, {dt:.2f}s (limit 10s)")


def criterion_2():
    t0 = time.perf_counter()
    A = rationals()
    y, cert = strong_cantor(A)
    replay = check_separation(cert, A, 8)
    # independent enumeration of every p/q with q <= 2^8 in lowest terms
    count = missing = 0
    for q in range(1, 257):
        for p in range(q + 1):
            if gcd(p, q) != 1:
                continue
            count += 1
            x = TaggedPoint(F(p, q))
            e = cert.entry_for(x)
            if e is None or not (e.gap > 0 and abs_diff_at_least(y.approx(e.precision), x, e.gap, e.precision)):
                missing += 1
    dt = time.perf_counter() - t0
    ok = replay.passed and missing == 0 and dt < 30
    return _record(2, ok, f"{count} rationals with denominator <= 256, {missing} unseparated, {dt:.2f}s (limit 30s)")


def criterion_3():
    t0 = time.perf_counter()
    passes = failures = 0
    for kind in OracleKind:
        realiser = strong_cantor_from_oracle(kind, FORWARD_OPS[kind], depth=8)
        for seed in range(20):
            A = random_heightset(1000 + seed, levels=10, per_level=6)
            try:
                _, cert = realiser(A)
                ok = check_separation(cert, A, 8).passed
            except Exception:  # a contract violation counts as a failure
                ok = False
            passes += ok
            failures += not ok
    dt = time.perf_counter() - t0
    return _record(3, passes == 200 and failures == 0, f"{passes} passes, {failures} failures over 10 kinds x 20 sets, {dt:.2f}s")


def criterion_4():
    ok = riemann_integral(pl_identity(), 0, 1) == HALF
    spikes = sum(riemann_integral(spike_indicator(random_heightset(seed)), 0, 1) == 0 for seed in range(20))
    sums = sum(
        riemann_sum_oracle(f, riemann_integral(f), mesh_bits=12, tol_bits=10).passed
        for f in (random_presentation(seed) for seed in range(20))
    )
    ok = ok and spikes == 20 and sums == 20
    return _record(4, ok, f"identity integral 1/2, {spikes}/20 spike integrals 0, {sums}/20 Riemann sums within 2^-10")


def criterion_5():
    # builtin demo functions plus seeded spike indicators; spike corpora have F = 0
    corpus = [(name, make(), name in ("thomae", "rationals_spike")) for name, make in FUNCTIONS.items()]
    corpus += [(f"spikes({s})", spike_indicator(random_heightset(s)), True) for s in range(3)]
    results = []
    for name, f, spiky in corpus:
        y, cert = ftc_point(f, h_bits=12)
        ok = ftc_checker(y, cert, f).passed and cert.h == F(1, 4096)
        if spiky:
            ok = ok and cert.quotient == 0
        results.append((name, ok))
    bad = [n for n, ok in results if not ok]
    return _record(5, not bad, f"{len(results)} functions checked at h = 2^-12, failing: {bad or 'none'}")


def criterion_6():
    funcs = [pl_identity(), thomae(), spike_indicator(rationals())] + [random_presentation(s) for s in range(5)]
    bad = [f.name for f in funcs if not band_checker(infinite_band(f), f, 1000).passed]
    return _record(6, not bad, f"{len(funcs)} band certificates with 1000 samples, failing: {bad or 'none'}")


def criterion_7():
    f, g = thomae(), spike_indicator(rationals())
    y, cert = volterra_pair(f, g)
    both = grid_continuity_oracle(f, y, 10).passed and grid_continuity_oracle(g, y, 10).passed
    sep = check_separation(cert, rationals(), 8).passed
    imp = volterra_impossibility(thomae())
    ok = both and sep and imp.passed
    return _record(7, ok, f"grid oracle m=10 on both: {both}, common point irrational to height 8: {sep}, impossibility report: {imp.passed}")


def _weak_case(seed):
    rng = random.Random(seed)
    v = lambda: F(rng.randint(-2, 2), 4)  # noqa: E731
    base = [(0, F(rng.randint(0, 4), 4)), (1, F(rng.randint(0, 4), 4))]
    x = TaggedPoint(HALF)
    if seed % 2:
        return pl(base, steps=[Step(x, v(), v(), v())]), x
    n = rng.randint(0, 3)
    s = F(1, 2**n) * rng.choice([1, -1, F(1, 2)])
    return pl(base, spikes=SpikeStream.from_levels({n: [(x, s)]})), x


def criterion_8():
    w = weak_continuity_at(thomae(), HALF)
    table = (w.usc, w.lsc, w.quasi, w.darboux) == (True, False, False, False)
    agree = 0
    for seed in range(20):
        f, x = _weak_case(seed)
        val, lim = evaluate(f, x), (evaluate(f, x, "left"), evaluate(f, x, "right"))
        rules = (val >= max(lim), val <= min(lim), val in lim, val == lim[0] == lim[1])
        w = weak_continuity_at(f, x)
        agree += rules == (w.usc, w.lsc, w.quasi, w.darboux)
    return _record(8, table and agree == 20, f"thomae at 1/2 table {'matches' if table else 'differs'}, {agree}/20 seeded cases agree")


CLI_COMMANDS = [
    "demo thomae --op continuity-point --precision 10",
    "cantor --set rationals --precision 8 --depth 8",
    "integral --fn pl_identity",
    "demo spike --op ftc-point",
    "demo volterra --m 10",
    "band --fn thomae --verify",
    "weak-point --fn thomae --at 1/2",
]


def criterion_9():
    differ = []
    for line in CLI_COMMANDS:
        cmd = [sys.executable, "-m", "regcantor.cli"] + line.split()
        a = subprocess.run(cmd, capture_output=True)
        b = subprocess.run(cmd, capture_output=True)
        if a.stdout != b.stdout or a.returncode != b.returncode or a.returncode != 0:
            differ.append(line)
    return _record(9, not differ, f"{len(CLI_COMMANDS)} commands run twice, differing or failing: {differ or 'none'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_acceptance(criterion):
    assert criterion(), RESULTS[int(criterion.__name__.rsplit("_", 1)[1])]


if __name__ == "__main__":
    ok = True
    for c in CRITERIA:
        ok &= c()
        print(RESULTS[int(c.__name__.rsplit("_", 1)[1])], flush=True)
    sys.exit(0 if ok else 1)
