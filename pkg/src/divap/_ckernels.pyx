# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: divisor sieve, Kloosterman sums, Weil scan.

Complex accumulation runs in strictly ascending residue order with
Kahan compensation, so values are bit-reproducible and independent of
thread counts (parallelism only ever happens across distinct sums).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925287

cdef long long MAX_MODULUS = 1ll << 31


cdef inline void _check_modulus(long long q) except *:
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if q >= MAX_MODULUS:
        raise ValueError(f"modulus {q} exceeds the 2^31 kernel cap")


def tau2_range(long long lo, long long hi):
    """tau2(n) for lo <= n < hi via a hyperbola-split divisor sieve."""
    if lo < 1 or hi < lo:
        raise ValueError(f"need 1 <= lo <= hi, got [{lo}, {hi})")
    out = np.zeros(hi - lo, dtype=np.int64)
    cdef long long[::1] tau = out
    cdef long long d = 1, sq, first, i
    while d * d < hi:
        sq = d * d
        first = sq if sq >= lo else lo
        first = ((first + d - 1) // d) * d
        i = first
        while i < hi:
            tau[i - lo] += 2
            i += d
        if sq >= lo:
            tau[sq - lo] -= 1
        d += 1
    return out


cdef long long _inv_mod(long long a, long long q) noexcept:
    # extended Euclid; caller guarantees gcd(a, q) == 1
    cdef long long t = 0, newt = 1, r = q, newr = a % q, quot, tmp
    while newr != 0:
        quot = r / newr
        tmp = t - quot * newt
        t = newt
        newt = tmp
        tmp = r - quot * newr
        r = newr
        newr = tmp
    if t < 0:
        t += q
    return t


cdef long long _gcd(long long a, long long b) noexcept:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


def kloosterman_sum(long long m, long long n, long long q):
    """S(m,n;q): ascending-h accumulation with Kahan compensation."""
    _check_modulus(q)
    if q == 1:
        return 1.0 + 0.0j
    m %= q
    n %= q
    cdef double *ctab = <double *> malloc(2 * q * sizeof(double))
    if ctab == NULL:
        raise MemoryError()
    cdef long long t, h, hinv, ph
    cdef double ang
    for t in range(q):
        ang = TWO_PI * t / q
        ctab[2 * t] = cos(ang)
        ctab[2 * t + 1] = sin(ang)
    cdef double sre = 0, sim = 0, cre = 0, cim = 0, y, tt
    try:
        for h in range(1, q):
            if _gcd(h, q) != 1:
                continue
            hinv = _inv_mod(h, q)
            ph = (m * h + n * hinv) % q
            y = ctab[2 * ph] - cre
            tt = sre + y
            cre = (tt - sre) - y
            sre = tt
            y = ctab[2 * ph + 1] - cim
            tt = sim + y
            cim = (tt - sim) - y
            sim = tt
    finally:
        free(ctab)
    return complex(sre, sim)


def kloosterman_table(long long q):
    """K[b] = S(1,b;q) for b = 0..q-1, each in ascending-h order."""
    _check_modulus(q)
    if q == 1:
        return np.ones(1, dtype=np.complex128)
    cdef long long nu = 0, h
    for h in range(1, q):
        if _gcd(h, q) == 1:
            nu += 1
    units_arr = np.empty(nu, dtype=np.int64)
    inv_arr = np.empty(nu, dtype=np.int64)
    cdef long long[::1] units = units_arr
    cdef long long[::1] inv = inv_arr
    cdef long long i = 0
    for h in range(1, q):
        if _gcd(h, q) == 1:
            units[i] = h
            inv[i] = _inv_mod(h, q)
            i += 1
    out = np.empty(q, dtype=np.complex128)
    cdef double complex[::1] K = out
    cdef double *ctab = <double *> malloc(2 * q * sizeof(double))
    if ctab == NULL:
        raise MemoryError()
    cdef long long t, b, ph
    cdef double ang, sre, sim
    for t in range(q):
        ang = TWO_PI * t / q
        ctab[2 * t] = cos(ang)
        ctab[2 * t + 1] = sin(ang)
    try:
        for b in range(q):
            sre = 0
            sim = 0
            for i in range(nu):
                ph = (units[i] + b * inv[i]) % q
                sre += ctab[2 * ph]
                sim += ctab[2 * ph + 1]
            K[b] = sre + 1j * sim
    finally:
        free(ctab)
    return out


def weil_scan_worst(long long p):
    """Max over all pairs (m,n) mod p of |S(m,n;p)| / Weil bound."""
    _check_modulus(p)
    cdef long long nu = 0, h
    for h in range(1, p):
        if _gcd(h, p) == 1:
            nu += 1
    inv_arr = np.empty(p, dtype=np.int64)
    cdef long long[::1] inv = inv_arr
    for h in range(1, p):
        inv[h] = _inv_mod(h, p)
    cdef double *ctab = <double *> malloc(2 * p * sizeof(double))
    if ctab == NULL:
        raise MemoryError()
    cdef long long t, m, n, ph
    cdef double ang, sre, sim, absS, bound, ratio, worst = -1
    cdef double bound_unit = 2.0 * sqrt(<double> p)
    cdef long long wm = 0, wn = 0
    for t in range(p):
        ang = TWO_PI * t / p
        ctab[2 * t] = cos(ang)
        ctab[2 * t + 1] = sin(ang)
    try:
        for m in range(p):
            for n in range(p):
                sre = 0
                sim = 0
                for h in range(1, p):
                    ph = (m * h + n * inv[h]) % p
                    sre += ctab[2 * ph]
                    sim += ctab[2 * ph + 1]
                absS = sqrt(sre * sre + sim * sim)
                bound = 2.0 * p if (m == 0 and n == 0) else bound_unit
                ratio = absS / bound
                if ratio > worst:
                    worst = ratio
                    wm = m
                    wn = n
    finally:
        free(ctab)
    return worst, wm, wn
