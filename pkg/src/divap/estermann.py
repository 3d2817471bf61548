"""The Estermann series E2(s;q,A), its Kloosterman twist D2(s;q,A),
their functional equations, residues and the character decomposition.

Evaluation routes
-----------------
hurwitz-continuation (canonical, valid for all s != 1):

    E2(s;q,A) = q^{-2s} sum_{c,d=1}^{q} e_q(c d A) zeta(s,c/q) zeta(s,d/q)
    D2(s;q,A) = q^{-2s} sum_{c,d=1}^{q} S(1, c d A; q) zeta(s,c/q) zeta(s,d/q)

obtained by splitting tau2(n) = sum_{de=n} into residue classes; the D2
form follows from D2 = sum over units h of e_q(h) E2(s;q, A h^{-1}).

direct-series (Re s > 1 only): the defining Dirichlet series, resummed
by grouping the outer divisor into residue classes,

    E2(s;q,A) = q^{-s} sum_{b=1}^{q} zeta(s, b/q) F(s, bA mod q; q),

with F(s,c;q) = sum_e e_q(ce) e^{-s} the periodic zeta evaluated from
its convergent series with an iterated Abel-summation tail (a sharp
truncation of the raw series cannot reach 1e-9 accuracy near s = 1: the
absolute tail decays only like N^{-(sigma-1)} log N).  Raw partial sums
with explicit absolute tail bounds are kept as a third sanity surface.

Kloos_2(b;q) always means S(1,b;q), including gcd(b,q) > 1, which is
what the unit-sum representation of D2 requires.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import kernels
from .arith import divisors, mobius
from .expsums import e_q, kloosterman_table, roots_of_unity
from .specfun import (
    EULER_GAMMA,
    PoleError,
    gamma,
    hurwitz_zeta,
    hurwitz_zeta_vec,
    riemann_zeta,
)


def g_factor(s: complex) -> complex:
    """G(s) = -i (2 pi)^{s-1} Gamma(1-s)."""
    return -1j * (2 * cmath.pi) ** (complex(s) - 1) * gamma(1 - complex(s))


@dataclass(frozen=True)
class EstermannEvaluation:
    s: complex
    q: int
    A: int
    value: complex
    method: str  # "direct-series" | "hurwitz-continuation"
    error_bound: float


def _check_args(s: complex, q: int, A: int) -> tuple[complex, int, int]:
    s = complex(s)
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if abs(s - 1) < 1e-12:
        raise PoleError(1, "E2/D2")
    if math.gcd(A, q) != 1:
        raise ValueError(f"gcd(A={A}, q={q}) must be 1")
    return s, q, A % q if q > 1 else 0


# ---------------------------------------------------------------------------
# periodic zeta F(s, c; q) = sum_{e>=1} e_q(c e) e^{-s}, Re s > 1


def periodic_zeta(s: complex, c: int, q: int, head: int = 4096) -> tuple[complex, float]:
    """(value, error bound).  Abel-accelerated tail; needs Re s > 1."""
    s = complex(s)
    if s.real <= 1:
        raise ValueError("periodic_zeta requires Re s > 1")
    c %= q
    if c == 0:
        val, err = hurwitz_zeta(s, 1.0), 1e-15
        return val, err
    roots = roots_of_unity(q).values
    e = np.arange(1, head + 1)
    head_sum = complex(np.sum(roots[(c * e) % q] * e ** (-s)))
    z = complex(roots[c])
    # tail sum_{e>M} z^e a_e with a_e = e^{-s}: iterate
    #   T(a) = z^{M+1} a_{M+1} / (1-z) - z/(1-z) T(Delta a)
    # on forward differences of a at M+1.
    M = head
    depth = 10
    window = (M + 1 + np.arange(depth + 1)).astype(float) ** (-s)
    zf = z / (1 - z)
    tail = 0j
    coeff = z ** (M + 1) / (1 - z)
    diffs = window.copy()
    for j in range(depth):
        tail += coeff * (-zf) ** j * diffs[0]
        diffs = diffs[:-1] - diffs[1:]
    # remainder bound: |z/(1-z)|^k * sum_{e>M} |Delta^k a_e|
    poch = 1.0
    for i in range(depth):
        poch *= abs(s) + i
    rem = abs(zf) ** depth * poch * M ** (1 - s.real - depth) / (s.real + depth - 1)
    return head_sum + tail, float(rem + 1e-15)


def tau2_tail_bound(N: int, sigma: float) -> float:
    """Rigorous bound for sum_{n>N} tau2(n) n^{-sigma}, sigma > 1."""
    if sigma <= 1:
        raise ValueError("tail bound requires sigma > 1")
    z = float(abs(riemann_zeta(sigma + 0j)))
    return float(
        N ** (1 - sigma) * ((math.log(N) + 1) / (sigma - 1) + 1 + z / (sigma - 1))
        + z * N ** (-sigma)
    )


# ---------------------------------------------------------------------------
# E2


def _e2_direct(s: complex, q: int, A: int) -> tuple[complex, float]:
    if s.real <= 1:
        raise ValueError("direct-series evaluation requires Re s > 1")
    if q == 1:
        return riemann_zeta(s) ** 2, 1e-14
    zs = hurwitz_zeta_vec(s, np.arange(1, q + 1) / q)
    tot = 0j
    err = 0.0
    for b in range(1, q + 1):
        f, ferr = periodic_zeta(s, (b * A) % q, q)
        tot += zs[b - 1] * f
        err += abs(zs[b - 1]) * ferr
    scale = abs(q ** (-s))
    return q ** (-s) * tot, float(err * scale + 1e-14)


def _e2_hurwitz(s: complex, q: int, A: int) -> complex:
    if q == 1:
        return riemann_zeta(s) ** 2
    zs = hurwitz_zeta_vec(s, np.arange(1, q + 1) / q)
    roots = roots_of_unity(q).values
    cd = np.outer(np.arange(1, q + 1), np.arange(1, q + 1)) * A % q
    return complex(q ** (-2 * s) * (zs @ roots[cd] @ zs))


def estermann_E2(s: complex, q: int, A: int, method: str = "auto") -> complex:
    """E2(s;q,A) = sum tau2(n) e_q(nA) / n^s, continued to s != 1."""
    return estermann_E2_eval(s, q, A, method).value


def estermann_E2_eval(s: complex, q: int, A: int, method: str = "auto") -> EstermannEvaluation:
    s, q, A = _check_args(s, q, A)
    if method == "auto":
        method = "direct-series" if s.real > 1.25 else "hurwitz-continuation"
    if method == "direct-series":
        val, err = _e2_direct(s, q, A)
    elif method == "hurwitz-continuation":
        val, err = _e2_hurwitz(s, q, A), 1e-12
    else:
        raise ValueError(f"unknown method {method!r}")
    return EstermannEvaluation(s, q, A, val, method, err)


def e2_partial_sum(s: complex, q: int, A: int, N: int) -> tuple[complex, float]:
    """Raw truncation sum_{n<=N} tau2(n) e_q(nA) n^{-s} and its absolute
    tail bound (loose: no cancellation is assumed)."""
    s, q, A = _check_args(s, q, A)
    if s.real <= 1:
        raise ValueError("partial sums only make sense for Re s > 1")
    tau = kernels.tau2_range(1, N + 1)
    n = np.arange(1, N + 1)
    roots = roots_of_unity(q).values
    val = complex(np.sum(tau * roots[(n * A) % q] * n ** (-s)))
    return val, tau2_tail_bound(N, s.real)


# ---------------------------------------------------------------------------
# Laurent expansion machinery


def laurent_coefficients(
    f: Callable[[complex], complex],
    center: complex = 1.0,
    radius: float = 0.01,
    npts: int = 64,
    orders: Iterable[int] = (-2, -1),
) -> dict[int, complex]:
    """Coefficients a_m of f(center+z) = sum a_m z^m by Fourier averaging
    over npts equally spaced points on |z| = radius."""
    k = np.arange(npts)
    zs = radius * np.exp(2j * np.pi * k / npts)
    vals = np.array([f(center + z) for z in zs])
    return {m: complex(np.mean(vals * zs ** (-m))) for m in orders}


@dataclass(frozen=True)
class ResidueCheck:
    laurent_c2: float
    laurent_c1: complex
    expected_c2: float
    expected_c1: float
    residual: float


def estermann_residue_check(q: int, A: int) -> ResidueCheck:
    """Fit the Laurent expansion of E2 at s=1; compare with the exact
    polar part q^{-1}[ (s-1)^{-2} + 2(gamma - log q)(s-1)^{-1} + ...]."""
    coef = laurent_coefficients(lambda s: _e2_hurwitz(s, q, A % q if q > 1 else 0))
    c2, c1 = coef[-2], coef[-1]
    exp_c2 = 1.0 / q
    exp_c1 = 2.0 * (EULER_GAMMA - math.log(q)) / q
    residual = max(abs(c2 - exp_c2), abs(c1 - exp_c1))
    return ResidueCheck(c2.real, c1, exp_c2, exp_c1, residual)


def d2_residue_check(q: int, A: int) -> ResidueCheck:
    """Same for D2; exact residue 2 mu(q) (gamma - log q)/q."""
    coef = laurent_coefficients(lambda s: _d2_hurwitz(s, q, A % q if q > 1 else 0))
    c2, c1 = coef[-2], coef[-1]
    mu = mobius(q)
    exp_c2 = mu / q
    exp_c1 = 2.0 * mu * (EULER_GAMMA - math.log(q)) / q
    residual = max(abs(c2 - exp_c2), abs(c1 - exp_c1))
    return ResidueCheck(c2.real, c1, exp_c2, exp_c1, residual)


def estermann_fe_check(s: complex, q: int, A: int) -> float:
    """Normalized residual of

    E2(1-s;q,A) = 2 G^2(1-s) q^{2s-1} [cos(pi(1-s)) E2(s;q,-A^{-1})
                                       - E2(s;q,A^{-1})],

    all four values from the Hurwitz continuation."""
    s, q, A = _check_args(s, q, A)
    if abs(s) < 1e-12:
        raise PoleError(0, "E2(1-s)")
    if q == 1:
        abar = 0
    else:
        abar = pow(A, -1, q)
    lhs = _e2_hurwitz(1 - s, q, A)
    rhs = (
        2
        * g_factor(1 - s) ** 2
        * q ** (2 * s - 1)
        * (
            cmath.cos(cmath.pi * (1 - s)) * _e2_hurwitz(s, q, (-abar) % q if q > 1 else 0)
            - _e2_hurwitz(s, q, abar)
        )
    )
    return abs(lhs - rhs) / (1 + abs(lhs))


# ---------------------------------------------------------------------------
# D2


def _d2_hurwitz(s: complex, q: int, A: int) -> complex:
    if q == 1:
        return riemann_zeta(s) ** 2
    zs = hurwitz_zeta_vec(s, np.arange(1, q + 1) / q)
    K = kloosterman_table(q)
    cd = np.outer(np.arange(1, q + 1), np.arange(1, q + 1)) * A % q
    return complex(q ** (-2 * s) * (zs @ K[cd] @ zs))


def _d2_direct(s: complex, q: int, A: int) -> tuple[complex, float]:
    if q == 1:
        return riemann_zeta(s) ** 2, 1e-14
    tot = 0j
    err = 0.0
    for h in range(1, q):
        if math.gcd(h, q) != 1:
            continue
        hbar = pow(h, -1, q)
        val, verr = _e2_direct(s, q, (A * hbar) % q)
        tot += e_q(h, q) * val
        err += verr
    return tot, err


def d2_value(s: complex, q: int, A: int, method: str = "auto") -> complex:
    """D2(s;q,A) = sum tau2(n) Kloos_2(nA;q) / n^s, continued to s != 1."""
    s, q, A = _check_args(s, q, A)
    if method == "auto":
        method = "hurwitz-continuation"
    if method == "direct-series":
        return _d2_direct(s, q, A)[0]
    if method == "hurwitz-continuation":
        return _d2_hurwitz(s, q, A)
    raise ValueError(f"unknown method {method!r}")


def d2_partial_sum(s: complex, q: int, A: int, N: int) -> tuple[complex, float]:
    """Raw truncation with a Weil-bounded absolute tail."""
    from .arith import tau2 as tau2_point

    s, q, A = _check_args(s, q, A)
    if s.real <= 1:
        raise ValueError("partial sums only make sense for Re s > 1")
    tau = kernels.tau2_range(1, N + 1)
    n = np.arange(1, N + 1)
    K = kloosterman_table(q)
    val = complex(np.sum(tau * K[(n * A) % q] * n ** (-s)))
    weil = math.sqrt(q) * tau2_point(q) * math.sqrt(q)  # gcd factor <= q
    return val, weil * tau2_tail_bound(N, s.real)


def congruence_tau2_series(w: complex, d: int, B: int) -> complex:
    """sum over n = B (mod d) of tau2(n) n^{-w}, continued via the
    class-restricted Hurwitz double sum."""
    w = complex(w)
    if d == 1:
        return riemann_zeta(w) ** 2
    zs = hurwitz_zeta_vec(w, np.arange(1, d + 1) / d)
    g = np.arange(1, d + 1)
    mask = np.outer(g, g) % d == B % d
    return complex(d ** (-2 * w) * (zs[:, None] * zs[None, :])[mask].sum())


def d2_fe_check(s: complex, q: int, A: int, congruence_modulus: str = "d") -> float:
    """Normalized residual of the D2 functional equation

    D2(s;q,A) = 2 G^2(s) q^{1-2s} sum_{q=dr} d mu(r)
                [cos(pi s) T(A) - T(-A)],

    T(+-A) the tau2 Dirichlet series over n = +-A modulo d (convention
    "d") or modulo q (convention "q"); brute force selects "d"."""
    s, q, A = _check_args(s, q, A)
    lhs = _d2_hurwitz(s, q, A)
    tot = 0j
    for d in divisors(q):
        r = q // d
        mu = mobius(r)
        if mu == 0:
            continue
        m = d if congruence_modulus == "d" else q
        tot += (
            d
            * mu
            * (
                cmath.cos(cmath.pi * s) * congruence_tau2_series(1 - s, m, A % m)
                - congruence_tau2_series(1 - s, m, (-A) % m)
            )
        )
    rhs = 2 * g_factor(s) ** 2 * q ** (1 - 2 * s) * tot
    return abs(lhs - rhs) / (1 + abs(lhs))


# ---------------------------------------------------------------------------
# character decomposition of D2 at prime modulus


def d2_char_decomposition_rhs(s: complex, p: int, A: int, form: str = "corrected") -> complex:
    """Character/L-function closed form of D2(s;p,A) at prime p.

    form="corrected" (selected by brute force):

        zeta^2(s) [ p/(p-1) (1 - p^{-s})^2 - 1 ]
          + p/(p-1) sum* conj(chi)(A) tau(chi) i^a pi^{s-1/2} p^{-s}
            Gamma((1-s+a)/2)/Gamma((s+a)/2) L(1-s,chi) L(s,conj chi)

    form="printed": principal term zeta^2(s)/(p-1) and p^{s-1} in place
    of p^{-s}.
    """
    from .characters import get_group

    s = complex(s)
    grp = get_group(p)
    mat = grp.char_matrix()
    taus = grp.gauss_sums()
    zs = hurwitz_zeta_vec(s, np.arange(1, p) / p)
    zs1 = hurwitz_zeta_vec(1 - s, np.arange(1, p) / p)
    # L(s, chi_j) for all j at once
    L_s = p ** (-s) * (mat[:, 1:] @ zs)
    L_1s = p ** (-(1 - s)) * (mat[:, 1:] @ zs1)
    conj_idx = (-np.arange(p - 1)) % (p - 1)
    tot = 0j
    for j in range(1, p - 1):
        a = j % 2
        gam = gamma(0.5 * (1 - s + a)) / gamma(0.5 * (s + a))
        power = p ** (-s) if form == "corrected" else p ** (s - 1)
        tot += (
            np.conj(mat[j, A % p])
            * taus[j]
            * 1j**a
            * cmath.pi ** (s - 0.5)
            * power
            * gam
            * L_1s[j]
            * L_s[conj_idx[j]]
        )
    z2 = riemann_zeta(s) ** 2
    if form == "corrected":
        principal = z2 * (p / (p - 1) * (1 - p ** (-s)) ** 2 - 1)
    elif form == "printed":
        principal = z2 / (p - 1)
    else:
        raise ValueError(f"unknown form {form!r}")
    return complex(principal + p / (p - 1) * tot)


def d2_char_decomposition_check(s: complex, p: int, A: int, form: str = "corrected") -> float:
    """Normalized |D2(s;p,A) - character decomposition|.

    When (1-s+a)/2 hits a Gamma pole for one parity (a removable 0*inf
    against the trivial zero of L(1-s,chi)), the right side is evaluated
    as the symmetric average at s +- 1e-4, accurate to O(1e-8)."""
    s, p, A = _check_args(s, p, A)
    lhs = _d2_hurwitz(s, p, A)
    if _near_gamma_pole(s):
        h = 1e-4
        rhs = 0.5 * (
            d2_char_decomposition_rhs(s + h, p, A, form)
            + d2_char_decomposition_rhs(s - h, p, A, form)
        )
    else:
        rhs = d2_char_decomposition_rhs(s, p, A, form)
    return abs(lhs - rhs) / (1 + abs(lhs))


def _near_gamma_pole(s: complex) -> bool:
    for a in (0, 1):
        u = 0.5 * (1 - s + a)
        if abs(u.imag) < 1e-8 and abs(u.real - round(u.real)) < 1e-8 and round(u.real) <= 0:
            return True
    return False


# ---------------------------------------------------------------------------
# convexity probe


@dataclass(frozen=True)
class ConvexityRow:
    p: int
    sigma: float
    t: float
    A: int
    abs_D2: float
    convexity_ratio: float


def d2_convexity_probe(
    p_list: Iterable[int],
    sigma_grid: Iterable[float],
    t_grid: Iterable[float],
    samples_per_prime: int = 8,
    seed: int = 12345,
) -> list[ConvexityRow]:
    """|D2(sigma+it;p,A)| against the convexity envelope p^{-3 sigma/2 + 2}
    over sampled units A; rows sorted by (p, sigma, t, A)."""
    rows: list[ConvexityRow] = []
    for p in sorted(p_list):
        rng = np.random.default_rng([seed, p])
        units = np.arange(1, p)
        rng.shuffle(units)
        sample = np.sort(units[: min(samples_per_prime, p - 1)])
        cd = np.outer(np.arange(1, p + 1), np.arange(1, p + 1)) % p
        K = kloosterman_table(p)
        for sigma in sigma_grid:
            for t in t_grid:
                s = complex(sigma, t)
                if abs(s - 1) < 1e-9:
                    continue
                zs = hurwitz_zeta_vec(s, np.arange(1, p + 1) / p)
                envelope = p ** (-1.5 * sigma + 2.0)
                for A in sample:
                    val = complex(p ** (-2 * s) * (zs @ K[cd * int(A) % p] @ zs))
                    rows.append(
                        ConvexityRow(
                            p, float(sigma), float(t), int(A), abs(val), abs(val) / envelope
                        )
                    )
    return rows
