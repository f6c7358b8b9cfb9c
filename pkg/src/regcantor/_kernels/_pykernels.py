"""Pure-Python kernels; the reference behaviour for the compiled module."""

from math import gcd


def preference(k):
    """Preferred third at stage k: 0 or 2 by the parity of the bits of k (Thue-Morse).

    An aperiodic preference keeps the limit from settling on an interval
    endpoint, which would be a rational of small denominator.
    """
    return 2 * (bin(k).count("1") & 1)


def choose_third(m, pow3, num, den, pref=0):
    """Digit of a closed third of [m/3^k, (m+1)/3^k] missed by a ball.

    The ball has radius 3^-k/9 and centre num/den (den > 0), in unit
    coordinates; ``pow3`` is 3^k.  Offsets are scaled by den * 3^(k+2) so the
    test is integer-only.  Thirds are tried in the order pref, 1, 2 - pref.
    Diameter 2/9 of the width < one third, so some third is always missed.
    """
    d = 9 * (num * pow3 - den * m)
    t = 3 * den
    lo, hi = d - den, d + den
    for j in (pref, 1, 2 - pref):
        if hi < j * t or lo > (j + 1) * t:
            return j
    raise ArithmeticError("trisection: ball meets every third")


FIX = 128


def run_stages(m, pow3, centres, k0=0):
    """Apply ``choose_third`` for each (num, den) in ``centres``; None is a blank stage.

    The first centre is stage k0.  Returns the final (m, pow3) and the
    digits as bytes.  A centre whose ball (radius <= 3^-k0/9) misses the
    batch's starting interval misses every later interval too, so it gets
    the preferred digit without any arithmetic on the big stage numbers.
    That is tested against a FIX-bit enclosure of the left end.
    """
    digits = bytearray(len(centres))
    lfix = (m << FIX) // pow3  # L <= m/3^k0 < L + 2^-FIX, L = lfix / 2^FIX
    slack = 1 + -(-(10 << FIX) // (9 * pow3))  # >= (2^-FIX + 3^-k0 + 3^-k0/9) * 2^FIX
    p3, low = 1, 0  # stage k0+i: m * 3^i + low over pow3 * 3^i
    for i, c in enumerate(centres):
        j = preference(k0 + i)
        if c is not None:
            num, den = c
            diff = (num << FIX) - den * lfix
            if -den * slack <= diff <= den * slack:
                j = choose_third(m * p3 + low, pow3 * p3, num, den, j)
        digits[i] = j
        low = 3 * low + j
        p3 *= 3
    return m * p3 + low, pow3 * p3, bytes(digits)


def coprime_band(q_lo, q_hi, lo_num, lo_den, hi_num, hi_den):
    """All (p, q) with q_lo <= q < q_hi, gcd(p, q) = 1 and lo <= p/q <= hi.

    Ordered by q, then p.  lo = lo_num/lo_den, hi = hi_num/hi_den with
    positive denominators.
    """
    out = []
    for q in range(q_lo, q_hi):
        p0 = -((-lo_num * q) // lo_den)
        p1 = (hi_num * q) // hi_den
        for p in range(p0, p1 + 1):
            if gcd(p, q) == 1:
                out.append((p, q))
    return out
