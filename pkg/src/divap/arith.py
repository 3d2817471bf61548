"""Exact integer and modular arithmetic shared by every other module."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# Witness set deterministic for all n < 3.3e24, in particular below 2^64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class NonInvertibleError(ValueError):
    """Raised when a residue with gcd(value, modulus) > 1 is inverted."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """Arithmetic context for mod-p computations; validates primality."""

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __int__(self) -> int:
        return self.p


@dataclass(frozen=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} outside [0, {self.modulus})")

    def inverse(self) -> "ResidueClass":
        return ResidueClass(inverse_mod(self.value, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value


def inverse_mod(a: int, m: int) -> int:
    """x with a*x = 1 (mod m); NonInvertibleError if gcd(a, m) > 1."""
    if m == 1:
        return 0
    g = math.gcd(a, m)
    if g != 1:
        raise NonInvertibleError(f"gcd({a}, {m}) = {g} > 1")
    return pow(a, -1, m)


def mod_inverse(a: ResidueClass) -> ResidueClass:
    return a.inverse()


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization, primes ascending."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class FactoredInteger:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        prev = 0
        for p, e in self.factors:
            if p <= prev:
                raise ValueError("factors must have strictly increasing primes")
            prev = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factorization does not multiply back to {self.n}")

    @classmethod
    def from_int(cls, n: int) -> "FactoredInteger":
        return cls(n, tuple(factorize(n)))

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    @property
    def mobius(self) -> int:
        if any(e > 1 for _, e in self.factors):
            return 0
        return -1 if len(self.factors) % 2 else 1

    @property
    def euler_phi(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= (p - 1) * p ** (e - 1)
        return out


def tau2(n: int) -> int:
    """Divisor count, by trial division."""
    if n < 1:
        raise ValueError(f"tau2 needs n >= 1, got {n}")
    count = 1
    for _, e in factorize(n):
        count *= e + 1
    return count


def mobius(n: int) -> int:
    return FactoredInteger.from_int(n).mobius


def euler_phi(n: int) -> int:
    return FactoredInteger.from_int(n).euler_phi


def divisors(n: int) -> list[int]:
    return FactoredInteger.from_int(n).divisors()


@lru_cache(maxsize=4096)
def primitive_root(p: int) -> int:
    """Smallest generator of (Z/pZ)*; returns 1 for p = 2."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 1
    prime_factors = [q for q, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in prime_factors):
            return g
    raise AssertionError("no primitive root found (unreachable for prime p)")


def gcd3(m: int, n: int, q: int) -> int:
    """gcd of three arguments with the gcd(0, x) = |x| convention."""
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    return math.gcd(math.gcd(abs(m), abs(n)), q)


def primes_up_to(n: int) -> list[int]:
    """Ascending primes <= n (simple sieve)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def primes_near(x: float, count: int) -> list[int]:
    """The `count` primes nearest to x (ties break downward), ascending."""
    if count < 1:
        return []
    below: list[int] = []
    c = int(math.floor(x))
    while len(below) < count and c >= 2:
        if is_prime(c):
            below.append(c)
        c -= 1
    above: list[int] = []
    c = max(2, int(math.floor(x)) + 1)
    while len(above) < count:
        if is_prime(c):
            above.append(c)
        c += 1
    cands = below + above
    cands.sort(key=lambda p: (abs(p - x), p))
    return sorted(cands[:count])
