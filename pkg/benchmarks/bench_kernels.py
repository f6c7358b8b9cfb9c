"""Compare the compiled and pure-Python kernels on the workloads the realisers generate.

    python3 benchmarks/bench_kernels.py [--stages N] [--band-level L] [--repeat R]

Each kernel runs on identical inputs and the outputs are compared before
any timing is reported.  The end-to-end row runs the rationals certificate
check in a subprocess under each backend.
"""

import argparse
import os
import subprocess
import sys
import time
from itertools import islice

from regcantor._kernels import _pykernels
from regcantor.presentations import rationals
from regcantor.realisers import heightset_to_enumeration

try:
    from regcantor._kernels import _ctrisect
except ImportError:
    _ctrisect = None

BATCH = 64


def stage_workload(stages: int):
    """Batches of rational centres in enumeration order, as the diagonaliser feeds them."""
    pts = list(islice(heightset_to_enumeration(rationals()), stages))
    centres = [(p.q.numerator, p.q.denominator) for p in pts]
    return [centres[i : i + BATCH] for i in range(0, len(centres), BATCH)]


def run_all_stages(kernel, batches):
    m, pow3, k = 0, 1, 0
    digits = bytearray()
    for batch in batches:
        m, pow3, d = kernel.run_stages(m, pow3, batch, k)
        digits += d
        k += len(batch)
    return m, bytes(digits)


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def end_to_end(pure: bool, depth: int) -> float:
    env = dict(os.environ)
    env.pop("REGCANTOR_PURE_PYTHON", None)
    if pure:
        env["REGCANTOR_PURE_PYTHON"] = "1"
    code = (
        "import time;from regcantor.presentations import rationals;"
        "from regcantor.realisers import strong_cantor;from regcantor.verification import check_separation;"
        f"t=time.perf_counter();A=rationals();y,c=strong_cantor(A);assert check_separation(c,A,{depth}).passed;"
        "print(time.perf_counter()-t)"
    )
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(res.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--stages", type=int, default=20000)
    ap.add_argument("--band-level", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--depth", type=int, default=8, help="end-to-end certificate depth")
    args = ap.parse_args()

    kernels = [("python", _pykernels)] + ([("cython", _ctrisect)] if _ctrisect else [])
    if len(kernels) == 1:
        print("compiled kernels not built: only the pure-Python timings are shown")

    batches = stage_workload(args.stages)
    n = args.band_level
    rows = []
    for label, fn in (
        (f"run_stages, {args.stages} stages", lambda k: run_all_stages(k, batches)),
        (f"coprime_band, level {n}", lambda k: k.coprime_band(1 << n, 1 << (n + 1), 0, 1, 1, 1)),
        (f"coprime_band, level {n} in [1/3, 1/3 + 1/64]", lambda k: k.coprime_band(1 << n, 1 << (n + 1), 1, 3, 67, 192)),
    ):
        times, outs = [], []
        for _, k in kernels:
            t, out = best_of(lambda: fn(k), args.repeat)
            times.append(t)
            outs.append(out)
        assert all(o == outs[0] for o in outs), f"backends disagree on {label}"
        rows.append((label, times))

    e2e = [end_to_end(True, args.depth)] + ([end_to_end(False, args.depth)] if _ctrisect else [])
    rows.append((f"rationals certificate to depth {args.depth} (end to end)", e2e))

    width = max(len(r[0]) for r in rows)
    head = f"{'workload':<{width}}  {'python':>10}"
    if _ctrisect:
        head += f"  {'cython':>10}  {'speedup':>8}"
    print(head)
    for label, times in rows:
        line = f"{label:<{width}}  {times[0]:>9.4f}s"
        if len(times) > 1:
            line += f"  {times[1]:>9.4f}s  {times[0] / times[1]:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
