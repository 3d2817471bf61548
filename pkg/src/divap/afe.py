"""The contour weight V_a(y), the approximate-functional-equation check,
the conjectural bilinear form and its probes, Kloosterman-Dirichlet
partial sums and the twisted second moment.

The printed weight is

    V_a(y) = (1/2 pi i) int_(1) pi^{-w} e^{w^2} cos^2(pi w) / w
             * Gamma(((1/2)+w+a)/2)^2 / Gamma(((1/2)+a)/2)^2 * y^{-w} dw,

real, V_a(0+) = 1, with quasi-polynomial decay exp(-(log y)^2/4 + ...).
The product L(1-s,chi) L(s,conj chi) at s = 1/2 + it equals the weighted
double sum exactly only when the squared gamma factors are replaced by
Gamma(((s+w+a)/2) Gamma((1-s+w+a)/2) (same thing at t = 0); `v_weight`
takes an optional t so `afe_check` can use the exact weight.  The
conjectural bilinear form keeps the printed (t = 0) weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import euler_phi
from .characters import DirichletCharacter, get_group
from .expsums import kloosterman_table, roots_of_unity
from .kernels import tau2_range
from .specfun import dirichlet_L, gamma, gamma_vec, hurwitz_zeta_vec


@dataclass(frozen=True)
class VWeightParams:
    """Contour Re w = contour_abscissa, trapezoid step h, cut at +-T_V.

    T_V = 12 keeps the integrand below 1e-14 at the cut even for
    y = 1e-6: the cos^2(pi w) factor grows like e^{2 pi |v|}, which the
    e^{w^2} damping only beats for |v| somewhat past 2 pi.
    """

    contour_abscissa: float = 1.0
    truncation_height: float = 12.0
    quadrature_step: float = 1.0 / 128


_DEFAULT_PARAMS = VWeightParams()


# abscissa used for y < 1: between the w = 0 pole (residue 1, pulled out)
# and the first Gamma poles at Re w = -1/2 - a; keeps |y^{-w}| = y^{1/4}
# small so the quadrature does not have to cancel y^{-1} down to O(1)
_LEFT_ABSCISSA = -0.25


@lru_cache(maxsize=64)
def _v_contour(
    a_par: int, t: float, params: VWeightParams, sigma0: float
) -> tuple[np.ndarray, np.ndarray]:
    """(w nodes, integrand prefactor including trapezoid weight h/2pi)."""
    T = params.truncation_height
    h = params.quadrature_step
    v = np.arange(-T, T + h / 2, h)
    w = sigma0 + 1j * v
    s = 0.5 + 1j * t
    den = gamma(0.5 * (s + a_par)) * gamma(0.5 * (1 - s + a_par))
    num = gamma_vec((s + w + a_par) / 2) * gamma_vec((1 - s + w + a_par) / 2)
    core = (
        np.pi ** (-w)
        * np.exp(w * w)
        * np.cos(np.pi * w) ** 2
        / w
        * (num / den)
        * (h / (2 * np.pi))
    )
    w.setflags(write=False)
    core.setflags(write=False)
    return w, core


def _v_eval(ys: np.ndarray, w: np.ndarray, core: np.ndarray, shift: complex) -> np.ndarray:
    out = np.empty(len(ys), dtype=np.complex128)
    chunk = max(1, (1 << 23) // len(w))
    logy = np.log(ys)
    for i in range(0, len(ys), chunk):
        out[i : i + chunk] = shift + np.exp(-np.outer(logy[i : i + chunk], w)) @ core
    return out


def v_weight_batch(
    a_par: int,
    ys: np.ndarray,
    t: float = 0.0,
    params: VWeightParams = _DEFAULT_PARAMS,
) -> np.ndarray:
    """V_a(y) over an array of y > 0 (complex; imaginary parts ~1e-11).

    y >= 1 integrates on Re w = contour_abscissa; y < 1 pulls the
    residue 1 at w = 0 and integrates on Re w = -1/4 (same value, no
    catastrophic cancellation for small y)."""
    if a_par not in (0, 1):
        raise ValueError(f"parity must be 0 or 1, got {a_par}")
    ys = np.asarray(ys, dtype=float)
    if np.any(ys <= 0):
        raise ValueError("y must be positive")
    out = np.empty(len(ys), dtype=np.complex128)
    big = ys >= 1.0
    if np.any(big):
        w, core = _v_contour(a_par, float(t), params, params.contour_abscissa)
        out[big] = _v_eval(ys[big], w, core, 0.0)
    if np.any(~big):
        w, core = _v_contour(a_par, float(t), params, _LEFT_ABSCISSA)
        out[~big] = _v_eval(ys[~big], w, core, 1.0)
    return out


def v_weight(
    a_par: int,
    y: float,
    t: float = 0.0,
    params: VWeightParams = _DEFAULT_PARAMS,
) -> complex:
    val = complex(v_weight_batch(a_par, np.array([y]), t, params)[0])
    if abs(val.imag) > 1e-9 * (1 + abs(val.real)):
        raise AssertionError(f"V_{a_par}({y}) has non-real part {val.imag}")
    return val


# ---------------------------------------------------------------------------
# AFE check


@dataclass(frozen=True)
class AfeResult:
    residual: float
    lhs: complex
    rhs: complex
    cutoff: int
    tail_estimate: float


# coarser grid for the m,n-batched AFE sums: the integrand is entire, so
# h = 1/32 already sits at quadrature saturation (checked against 1/64
# and 1/128; T = 6 is where truncation starts to bite, T = 8 is safe for
# the y >= 1/p range these sums use)
_AFE_PARAMS = VWeightParams(contour_abscissa=1.0, truncation_height=8.0, quadrature_step=1.0 / 32)


@lru_cache(maxsize=32)
def _v_on_products(a_par: int, t: float, q: int, cutoff: int, params: VWeightParams):
    """(unique products mn <= cutoff coprime to q, V_a(mn/q)); shared
    across the characters of one modulus."""
    m, n = _coprime_pairs(q, cutoff)
    mn = m * n
    uniq = np.unique(mn)
    V = v_weight_batch(a_par, uniq / q, t, params)
    uniq.setflags(write=False)
    V.setflags(write=False)
    return uniq, V


@lru_cache(maxsize=32)
def _coprime_pairs(q: int, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """(m, n) with mn <= cutoff and gcd(mn, q) = 1, m-major order."""
    ms, ns = [], []
    for m in range(1, cutoff + 1):
        if math.gcd(m, q) != 1:
            continue
        n = np.arange(1, cutoff // m + 1, dtype=np.int64)
        if q > 1:
            n = n[np.gcd(n, q) == 1]
        if len(n):
            ms.append(np.full(len(n), m, dtype=np.int64))
            ns.append(n)
    if not ms:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    m_all, n_all = np.concatenate(ms), np.concatenate(ns)
    m_all.setflags(write=False)
    n_all.setflags(write=False)
    return m_all, n_all


def afe_check(s: complex, chi: DirichletCharacter, cutoff: int | None = None) -> AfeResult:
    """Residual of L(1-s,chi) L(s,conj chi) = 2 sum_{m,n} chi(m) conj(chi)(n)
    m^{-(1-s)} n^{-s} V_a(mn/p) at s = 1/2 + it.

    Default cutoff mn <= p (log p)^2 (recorded tail is then large, of
    order 1e-2: V decays too slowly for that truncation); pass a cutoff
    of ~4000 p to reach 1e-8 residuals.
    """
    if chi.is_principal:
        raise ValueError("afe_check needs a primitive (non-principal) character")
    s = complex(s)
    if abs(s.real - 0.5) > 1e-12:
        raise ValueError("afe_check is defined on the critical line")
    p = chi.p
    t = s.imag
    a_par = chi.parity
    if cutoff is None:
        cutoff = int(math.ceil(p * math.log(p) ** 2))
    m, n = _coprime_pairs(p, cutoff)
    mn = m * n
    uniq, V = _v_on_products(a_par, float(t), p, cutoff, _AFE_PARAMS)
    inv = np.searchsorted(uniq, mn)
    row = chi.values_row()
    coef = (
        row[m % p]
        * np.conj(row[n % p])
        * m.astype(float) ** (-(1 - s))
        * n.astype(float) ** (-s)
    )
    terms = coef * V[inv]
    rhs = 2 * complex(terms.sum())
    half = complex(terms[mn <= cutoff // 2].sum())
    tail_estimate = abs(rhs - 2 * half)
    lhs = dirichlet_L(1 - s, chi) * dirichlet_L(s, chi.conj())
    return AfeResult(abs(lhs - rhs) / (1 + abs(lhs)), lhs, rhs, cutoff, tail_estimate)


# ---------------------------------------------------------------------------
# Conjectural bilinear form


@dataclass(frozen=True)
class BilinearResult:
    q: int
    A: int
    t: float
    value_even: complex
    value_odd: complex
    tail_bound: float
    cutoff: int


def bilinear_form(
    t: float,
    q: int,
    A: int,
    cutoff: int | None = None,
) -> BilinearResult:
    """sum_{(mn,q)=1, mn<=Y} e_q(A n m^{-1}) n^{-s} m^{-(1-s)} V_a(mn/q)
    at s = 1/2 + it, for both parities, with the printed (t = 0) weight.

    tail_bound is the observed difference between the Y and Y/2
    truncations, the practical stand-in for the V-decay tail.
    """
    if math.gcd(A, q) != 1:
        raise ValueError(f"gcd(A={A}, q={q}) must be 1")
    if cutoff is None:
        cutoff = max(int(math.ceil(q * math.log(max(q, 2)) ** 2)), 8)
    s = 0.5 + 1j * t
    m, n = _coprime_pairs(q, cutoff)
    if len(m) == 0:
        return BilinearResult(q, A, t, 0j, 0j, 0.0, cutoff)
    mn = m * n
    if q > 1:
        minv = np.zeros(q, dtype=np.int64)
        for u in range(1, q):
            if math.gcd(u, q) == 1:
                minv[u] = pow(u, -1, q)
        idx = ((A % q) * (n % q)) % q * minv[m % q] % q
        phases = roots_of_unity(q).values[idx]
    else:
        phases = np.ones(len(m))
    base = phases * n.astype(float) ** (-s) * m.astype(float) ** (-(1 - s))
    uniq, inv = np.unique(mn, return_inverse=True)
    vals = {}
    tails = {}
    for a_par in (0, 1):
        V = v_weight_batch(a_par, uniq / q, 0.0)
        terms = base * V[inv]
        full = complex(terms.sum())
        half = complex(terms[mn <= cutoff // 2].sum())
        vals[a_par] = full
        tails[a_par] = abs(full - half)
    return BilinearResult(q, A, t, vals[0], vals[1], max(tails.values()), cutoff)


@dataclass(frozen=True)
class FitResult:
    slope: float
    stderr: float
    r2: float
    n_points: int


def fit_loglog(xs: np.ndarray, ys: np.ndarray) -> FitResult:
    """OLS slope of log ys against log xs with standard error and R^2."""
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.asarray(ys, dtype=float))
    n = len(x)
    if n < 2:
        return FitResult(float("nan"), float("nan"), float("nan"), n)
    xbar, ybar = x.mean(), y.mean()
    sxx = np.sum((x - xbar) ** 2)
    slope = float(np.sum((x - xbar) * (y - ybar)) / sxx)
    intercept = ybar - slope * xbar
    resid = y - slope * x - intercept
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - ybar) ** 2))
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 else float("nan")
    r2 = 1 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return FitResult(slope, stderr, r2, n)


def sampled_units(q: int, count: int, seed: int) -> np.ndarray:
    """First `count` units mod q after a seeded shuffle, ascending."""
    units = np.array([u for u in range(1, q) if math.gcd(u, q) == 1], dtype=np.int64)
    rng = np.random.default_rng([seed, q])
    rng.shuffle(units)
    return np.sort(units[:count])


def conjecture_probe(
    primes: list[int],
    samples_per_prime: int = 20,
    t: float = 0.0,
    seed: int = 12345,
    cutoff_rule=None,
) -> tuple[list[BilinearResult], dict[int, tuple[float, float]], FitResult]:
    """Max and mean of |B| over sampled A per prime, plus a log-log fit
    of the per-prime max against q.  Exploratory: reports evidence for
    the q^eps bound, cannot confirm it."""
    rows: list[BilinearResult] = []
    per_prime: dict[int, tuple[float, float]] = {}
    for q in sorted(primes):
        cutoff = cutoff_rule(q) if cutoff_rule else None
        mags = []
        for A in sampled_units(q, samples_per_prime, seed):
            r = bilinear_form(t, q, int(A), cutoff)
            rows.append(r)
            mags.append(max(abs(r.value_even), abs(r.value_odd)))
        per_prime[q] = (float(np.max(mags)), float(np.mean(mags)))
    qs = np.array(sorted(per_prime))
    maxima = np.array([per_prime[q][0] for q in qs])
    return rows, per_prime, fit_loglog(qs, maxima)


# ---------------------------------------------------------------------------
# Kloosterman-Dirichlet partial sums (the conditional Proposition surface)


def kloosterman_dirichlet_partial(
    s: complex, p: int, a: int, N1: int, N: int
) -> tuple[complex, float]:
    """sum over N1 < n <= N of tau2(n) Kloos_2(an,p) n^{-s} and the ratio
    |sum| / (p^{1/2} N1^{-1/2}).  Half-open ranges compose exactly:
    (N1,N] + (N,N2] = (N1,N2]."""
    if math.gcd(a, p) != 1:
        raise ValueError(f"gcd(a={a}, p={p}) must be 1")
    if N1 < 1:
        raise ValueError(f"need N1 >= 1, got {N1}")
    s = complex(s)
    if N1 >= N:
        return 0j, 0.0
    tau = tau2_range(N1 + 1, N + 1)
    n = np.arange(N1 + 1, N + 1)
    K = kloosterman_table(p)
    val = complex(np.sum(tau * K[(n * (a % p)) % p] * n.astype(float) ** (-s)))
    return val, abs(val) / (math.sqrt(p) * N1 ** (-0.5))


def twisted_second_moment(q: int, shift_z: complex, shift_w: complex, A: int) -> complex:
    """(1/phi(q)) sum over all chi mod q of chi(-A)
    L(1/2+z, conj chi) L(1/2-w, conj chi), prime q."""
    grp = get_group(q)
    p = grp.p
    mat = grp.char_matrix()
    s1 = 0.5 + complex(shift_z)
    s2 = 0.5 - complex(shift_w)
    zs1 = hurwitz_zeta_vec(s1, np.arange(1, p) / p)
    zs2 = hurwitz_zeta_vec(s2, np.arange(1, p) / p)
    conj_idx = (-np.arange(p - 1)) % (p - 1) if p > 2 else np.array([0])
    L1 = p ** (-s1) * (mat[:, 1:] @ zs1)
    L2 = p ** (-s2) * (mat[:, 1:] @ zs2)
    col = mat[:, (-A) % p]
    total = complex(np.sum(col * L1[conj_idx] * L2[conj_idx]))
    return total / euler_phi(p)
