"""Numpy fallback for the hot kernels.

Same surface as the compiled extension (``_ckernels``): a segmented
divisor-count sieve, complete Kloosterman sums, the S(1,b;q) table and
the all-pairs Weil scan.  Reductions use numpy's deterministic pairwise
summation, so results do not depend on thread counts; the compiled
backend accumulates in strictly ascending residue order instead.  The
two backends agree to ~1e-13 and the test suite checks them against
each other when both are importable.
"""

from __future__ import annotations

import math

import numpy as np

MAX_MODULUS = 2**31


def _check_modulus(q: int) -> None:
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if q >= MAX_MODULUS:
        raise ValueError(f"modulus {q} exceeds the 2^31 kernel cap")


def tau2_range(lo: int, hi: int) -> np.ndarray:
    """tau2(n) for lo <= n < hi via a hyperbola-split divisor sieve.

    Cost O((hi-lo) log hi + sqrt(hi)); memory O(hi-lo).
    """
    if lo < 1 or hi < lo:
        raise ValueError(f"need 1 <= lo <= hi, got [{lo}, {hi})")
    tau = np.zeros(hi - lo, dtype=np.int64)
    d = 1
    while d * d < hi:
        sq = d * d
        first = sq if sq >= lo else lo
        first = ((first + d - 1) // d) * d
        if first < hi:
            tau[first - lo :: d] += 2
        if sq >= lo:
            tau[sq - lo] -= 1
        d += 1
    return tau


def _unit_tables(q: int) -> tuple[np.ndarray, np.ndarray]:
    """(units, inverses) mod q, units ascending."""
    h = np.arange(1, q, dtype=np.int64)
    mask = np.gcd(h, q) == 1
    units = h[mask]
    inv = np.array([pow(int(u), -1, q) for u in units], dtype=np.int64)
    return units, inv


def _roots(q: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(q) / q)


def kloosterman_sum(m: int, n: int, q: int) -> complex:
    """S(m,n;q) = sum over units h mod q of e_q(m h + n h-bar)."""
    _check_modulus(q)
    if q == 1:
        return 1.0 + 0.0j
    m %= q
    n %= q
    units, inv = _unit_tables(q)
    table = _roots(q)
    phases = (m * units + n * inv) % q
    return complex(np.sum(table[phases]))


def kloosterman_table(q: int) -> np.ndarray:
    """K[b] = S(1,b;q) for b = 0..q-1."""
    _check_modulus(q)
    if q == 1:
        return np.ones(1, dtype=np.complex128)
    units, inv = _unit_tables(q)
    table = _roots(q)
    b = np.arange(q, dtype=np.int64)
    # phases[j, h] = (h + b_j * hbar) mod q, summed over h in ascending order
    out = np.empty(q, dtype=np.complex128)
    chunk = max(1, (1 << 22) // max(len(units), 1))
    for i in range(0, q, chunk):
        ph = (units[None, :] + np.outer(b[i : i + chunk], inv)) % q
        out[i : i + chunk] = np.sum(table[ph], axis=1)
    return out


def weil_scan_worst(p: int) -> tuple[float, int, int]:
    """Scan every pair (m,n) mod p: max of |S(m,n;p)| / Weil bound.

    The bound is gcd3(m,n,p)^{1/2} sqrt(p) tau2(p) with tau2(p)=2 for
    prime p.  Returns (worst ratio, m, n at the worst pair).
    """
    _check_modulus(p)
    units, inv = _unit_tables(p)
    table = _roots(p)
    bound_unit = 2.0 * math.sqrt(p)
    narr = np.arange(p, dtype=np.int64)
    base_n = np.outer(narr, inv)  # (p, phi)
    worst = -1.0
    wm = wn = 0
    for m in range(p):
        ph = (m * units[None, :] + base_n) % p
        absS = np.abs(np.sum(table[ph], axis=1))
        bounds = np.full(p, bound_unit)
        if m == 0:
            bounds[0] = 2.0 * p  # gcd3(0,0,p) = p
        ratios = absS / bounds
        k = int(np.argmax(ratios))
        if ratios[k] > worst:
            worst = float(ratios[k])
            wm, wn = m, k
    return worst, wm, wn
