"""Complete exponential sums over residues.

Additive characters e_q, Kloosterman and hyper-Kloosterman sums,
Ramanujan sums, and the Weil bound checker

    |S(m,n;q)| <= (m,n,q)^{1/2} q^{1/2} tau2(q).

Conventions for degenerate arguments (documented because the series
modules rely on them): the unit group mod 1 is {0}, so S(m,n;1) = 1,
c_1(a) = 1, and Kloos_2(b;q) means S(1,b;q) for every residue b, which
for q | b degenerates to the Ramanujan sum c_q(1) = mu(q).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .arith import euler_phi, gcd3, is_prime, mobius, tau2


@dataclass(frozen=True)
class RootsOfUnityTable:
    """values[t] = e^{2 pi i t / q}; immutable and shareable."""

    modulus: int
    values: np.ndarray

    @classmethod
    def build(cls, q: int) -> "RootsOfUnityTable":
        if q < 1:
            raise ValueError(f"modulus must be >= 1, got {q}")
        vals = np.exp(2j * np.pi * np.arange(q) / q)
        vals.setflags(write=False)
        return cls(q, vals)


@lru_cache(maxsize=256)
def roots_of_unity(q: int) -> RootsOfUnityTable:
    return RootsOfUnityTable.build(q)


def e_q(t: int, q: int) -> complex:
    """e^{2 pi i t / q}, reducing t mod q first."""
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    t %= q
    if q <= 4096:
        return complex(roots_of_unity(q).values[t])
    return cmath.exp(2j * cmath.pi * t / q)


def kloosterman(m: int, n: int, q: int) -> complex:
    """S(m,n;q), the complete Kloosterman sum over units mod q."""
    return kernels.kloosterman_sum(int(m), int(n), int(q))


def kloosterman_table(q: int) -> np.ndarray:
    """S(1,b;q) for b = 0..q-1 (cached; read-only array)."""
    return _kloosterman_table_cached(int(q))


@lru_cache(maxsize=128)
def _kloosterman_table_cached(q: int) -> np.ndarray:
    out = kernels.kloosterman_table(q)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def _hyper_kloosterman_table(k: int, p: int) -> np.ndarray:
    """Kloos_k(b,p) for all residues b, by the one-variable recursion

    Kloos_k(b) = sum over units z of e_p(z) Kloos_{k-1}(b z^{-1}),

    i.e. summing over x_1..x_{k-1} and solving for x_k; O(p^2) per step.
    """
    roots = roots_of_unity(p).values
    if k == 1:
        out = roots.copy()
    else:
        prev = _hyper_kloosterman_table(k - 1, p)
        units = np.arange(1, p, dtype=np.int64)
        inv = np.array([pow(int(u), -1, p) for u in units], dtype=np.int64)
        b = np.arange(p, dtype=np.int64)
        idx = np.outer(b, inv) % p
        out = prev[idx] @ roots[units]
    out.setflags(write=False)
    return out


def hyper_kloosterman(k: int, A: int, p: int) -> complex:
    """Kloos_k(A,p): sum of e_p(x_1+..+x_k) over unit k-tuples with product A."""
    if not 1 <= k <= 4:
        raise ValueError(f"k must be in 1..4, got {k}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k >= 3 and p > 3000:
        raise ValueError(f"k >= 3 limited to p <= 3000 (cost p^{{k-1}}), got p={p}")
    A %= p
    if A == 0:
        raise ValueError("A must be a unit mod p")
    if k == 1:
        return e_q(A, p)
    return complex(_hyper_kloosterman_table(k, p)[A])


def ramanujan_sum(q: int, a: int) -> complex:
    """c_q(a), evaluated both as the unit sum and the divisor sum.

    The two evaluations (sum of e_q(ha) over units h, and
    sum_{q=dr, d | a} d mu(r)) are asserted to agree before returning.
    """
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if q == 1:
        return 1.0 + 0.0j
    units = np.arange(1, q, dtype=np.int64)
    units = units[np.gcd(units, q) == 1]
    unit_val = complex(np.sum(roots_of_unity(q).values[(units * (a % q)) % q]))
    div_val = ramanujan_sum_divisor(q, a)
    if abs(unit_val - div_val) > 1e-9 * max(1.0, euler_phi(q)):
        raise AssertionError(
            f"c_{q}({a}): unit sum {unit_val} != divisor sum {div_val}"
        )
    return unit_val


def ramanujan_sum_divisor(q: int, a: int) -> int:
    """c_q(a) = sum over q = d r with d | gcd(q,a) of d mu(r)."""
    g = math.gcd(q, a)
    total = 0
    d = 1
    while d * d <= q:
        if q % d == 0:
            if g % d == 0:
                total += d * mobius(q // d)
            e = q // d
            if e != d and g % e == 0:
                total += e * mobius(q // e)
        d += 1
    return total


def ramanujan_closed_form(q: int, a: int) -> float:
    """Independent oracle: mu(q/g) phi(q) / phi(q/g) with g = gcd(q,a)."""
    g = math.gcd(q, a) if a != 0 else q
    return mobius(q // g) * euler_phi(q) / euler_phi(q // g)


def weil_bound(m: int, n: int, q: int) -> float:
    return math.sqrt(gcd3(m, n, q)) * math.sqrt(q) * tau2(q)


def weil_bound_check(m: int, n: int, q: int) -> tuple[float, bool]:
    """(bound, |S(m,n;q)| <= bound + 1e-6)."""
    bound = weil_bound(m, n, q)
    holds = abs(kloosterman(m, n, q)) <= bound + 1e-6
    return bound, holds


def weil_scan_worst(p: int) -> tuple[float, int, int]:
    """All-pairs scan mod p: (max |S|/bound, argmax m, argmax n)."""
    return kernels.weil_scan_worst(int(p))
