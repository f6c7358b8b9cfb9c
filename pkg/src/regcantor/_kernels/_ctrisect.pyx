# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels.  Must agree exactly with ``_pykernels``."""


cpdef int preference(long long k):
    cdef int par = 0
    while k:
        par ^= <int>(k & 1)
        k >>= 1
    return 2 * par


cpdef int choose_third(object m, object pow3, object num, object den, int pref=0):
    cdef object d = 9 * (num * pow3 - den * m)
    cdef object t = 3 * den
    cdef object lo = d - den
    cdef object hi = d + den
    cdef int j
    for j in (pref, 1, 2 - pref):
        if hi < j * t or lo > (j + 1) * t:
            return j
    raise ArithmeticError("trisection: ball meets every third")


FIX = 128  # a Python int: the shifts below must be big-int shifts


def run_stages(object m, object pow3, list centres, long long k0=0):
    cdef Py_ssize_t i, n = len(centres)
    cdef bytearray digits = bytearray(n)
    cdef unsigned char[:] view = digits
    cdef int j
    cdef object c, num, den, diff, bound
    cdef object lfix = (m << FIX) // pow3
    cdef object slack = 1 + -(-(<object>10 << FIX) // (9 * pow3))
    cdef object p3 = 1
    cdef object low = 0
    for i in range(n):
        c = centres[i]
        j = preference(k0 + i)
        if c is not None:
            num = (<tuple>c)[0]
            den = (<tuple>c)[1]
            diff = (num << FIX) - den * lfix
            bound = den * slack
            if -bound <= diff <= bound:
                j = choose_third(m * p3 + low, pow3 * p3, num, den, j)
        view[i] = j
        low = 3 * low + j
        p3 = 3 * p3
    return m * p3 + low, pow3 * p3, bytes(digits)


cdef inline long _gcd(long a, long b) nogil:
    cdef long t
    if a < 0:
        a = -a
    while b:
        t = a % b
        a = b
        b = t
    return a


def coprime_band(long q_lo, long q_hi, object lo_num, object lo_den, object hi_num, object hi_den):
    cdef long q, p, p0, p1
    cdef list out = []
    for q in range(q_lo, q_hi):
        p0 = -((-lo_num * q) // lo_den)
        p1 = (hi_num * q) // hi_den
        for p in range(p0, p1 + 1):
            if _gcd(p, q) == 1:
                out.append((p, q))
    return out
