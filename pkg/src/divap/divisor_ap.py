"""Smooth weights, divisor sums in arithmetic progressions, main-term
variants, the discrepancy Delta_{2,w}(X;p,a) and level-of-distribution
experiments.

Two cutoff framings coexist and are never mixed inside one assertion:
the sharp sum over n <= X (`sharp_ap_sum`, `main_term`) and the smooth
sum over n in [X, 2X] weighted by W(n/X) (`ap_sum_smooth` and the
discrepancy pipeline).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .afe import fit_loglog
from .arith import divisors, euler_phi, factorize, is_prime, mobius, primes_near
from .expsums import kloosterman_table
from .kernels import tau2_range
from .specfun import EULER_GAMMA, gamma

SIEVE_BUDGET = 50_000_000  # largest 2X a single sieve cell may touch


class SieveBudgetError(RuntimeError):
    """Raised when an experiment would exceed the sieve memory budget."""


class SmoothWeight:
    """Bump weight exp(-1/((x-1)(2-x))) on (1,2), zero outside.

    All one-sided derivatives vanish at 1 and 2, so the Mellin transform
    is entire with super-polynomial vertical decay.  `mellin` caches
    adaptive-quadrature values (1e-13 absolute target).
    """

    def __init__(self, amplitude: float = 1.0, tag: str = "bump"):
        self.amplitude = amplitude
        self.tag = tag
        self._mellin_cache: dict[complex, complex] = {}

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.zeros_like(arr)
        mask = (arr > 1.0) & (arr < 2.0)
        xm = arr[mask]
        out[mask] = np.exp(-1.0 / ((xm - 1.0) * (2.0 - xm)))
        out *= self.amplitude
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def scaled(self, c: float) -> "SmoothWeight":
        return SmoothWeight(self.amplitude * c, tag=f"{self.tag}*{c:g}")

    def mellin(self, s: complex) -> complex:
        """W-hat(s) = int_1^2 W(x) x^{s-1} dx."""
        s = complex(s)
        if s in self._mellin_cache:
            return self._mellin_cache[s]

        def integrand_re(x: float) -> float:
            return (self(x) * x ** (s - 1)).real

        def integrand_im(x: float) -> float:
            return (self(x) * x ** (s - 1)).imag

        re, _ = quad(integrand_re, 1.0, 2.0, epsabs=1e-13, epsrel=1e-12, limit=200)
        im, _ = quad(integrand_im, 1.0, 2.0, epsabs=1e-13, epsrel=1e-12, limit=200)
        val = complex(re, im)
        self._mellin_cache[s] = val
        return val


_DEFAULT_WEIGHT = SmoothWeight()


def default_weight() -> SmoothWeight:
    return _DEFAULT_WEIGHT


def mellin_W(s: complex, W: SmoothWeight | None = None) -> complex:
    return (W or _DEFAULT_WEIGHT).mellin(s)


# ---------------------------------------------------------------------------
# smooth sums over [X, 2X]


def _smooth_range(X: float) -> tuple[int, int]:
    if X < 2:
        raise ValueError(f"need X >= 2, got {X}")
    lo = int(math.floor(X)) + 1
    hi = int(math.ceil(2 * X))
    if hi > SIEVE_BUDGET:
        raise SieveBudgetError(f"2X = {hi} exceeds sieve budget {SIEVE_BUDGET}")
    return lo, hi


def residue_sums_smooth(X: float, q: int, W: SmoothWeight) -> np.ndarray:
    """out[b] = sum over n in [X,2X], n = b (mod q) of tau2(n) W(n/X)."""
    lo, hi = _smooth_range(X)
    if lo >= hi:
        return np.zeros(q)
    tau = tau2_range(lo, hi)
    n = np.arange(lo, hi)
    wts = tau * W(n / X)
    return np.bincount(n % q, weights=wts, minlength=q)


def ap_sum_smooth(X: float, q: int, a: int, W: SmoothWeight) -> float:
    """sum over n = a (mod q) of tau2(n) W(n/X)."""
    lo, hi = _smooth_range(X)
    if lo >= hi or q > hi:
        # empty congruence range still has at most one n when q > 2X
        n = np.arange(lo, hi)
        n = n[n % q == a % q]
        if len(n) == 0:
            return 0.0
        tau = tau2_range(int(n[0]), int(n[-1]) + 1)
        sel = n - int(n[0])
        return float(np.sum(tau[sel] * W(n / X)))
    tau = tau2_range(lo, hi)
    n = np.arange(lo, hi)
    mask = n % q == a % q
    return float(np.sum(tau[mask] * W(n[mask] / X)))


def coprime_sum_smooth(X: float, q: int, W: SmoothWeight) -> float:
    """sum over n in [X,2X] with gcd(n,q) = 1 of tau2(n) W(n/X)."""
    sums = residue_sums_smooth(X, q, W)
    units = np.array([b for b in range(q)] if q == 1 else [b for b in range(q) if math.gcd(b, q) == 1])
    return float(sums[units].sum())


@dataclass(frozen=True)
class DiscrepancyRecord:
    X: float
    p: int
    a: int
    delta: float
    normalized: float  # |delta| p / X
    weight_tag: str
    n_lo: int
    n_hi: int


def delta_discrepancy(X: float, p: int, a: int, W: SmoothWeight) -> DiscrepancyRecord:
    """delta = ap_sum_smooth - coprime_sum_smooth/(p-1) at prime p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if a % p == 0:
        raise ValueError("a must be a unit mod p")
    lo, hi = _smooth_range(X)
    sums = residue_sums_smooth(X, p, W)
    coprime_total = float(sums[1:].sum())
    delta = float(sums[a % p] - coprime_total / (p - 1))
    return DiscrepancyRecord(X, p, a % p, delta, abs(delta) * p / X, W.tag, lo, hi)


# ---------------------------------------------------------------------------
# sharp sums and main terms


def sharp_ap_sum(X: float, q: int, a: int) -> float:
    """sum over n <= X, n = a (mod q) of tau2(n), by sieve."""
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    hi = int(math.floor(X))
    if hi < 1:
        return 0.0
    if hi + 1 > SIEVE_BUDGET:
        raise SieveBudgetError(f"X = {X} exceeds sieve budget {SIEVE_BUDGET}")
    tau = tau2_range(1, hi + 1)
    n = np.arange(1, hi + 1)
    return float(tau[n % q == a % q].sum())


def heathbrown_A(q: int, a: int) -> int:
    """A(q,a) = sum_{d | (q,a)} sum_{delta | q/d} d delta mu(q/(d delta))."""
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    g = math.gcd(q, a)
    total = 0
    for d in divisors(g):
        for delta in divisors(q // d):
            total += d * delta * mobius(q // (d * delta))
    return total


def heathbrown_B(q: int, a: int) -> float:
    """B(q,a): same double sum carrying log(delta)."""
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    g = math.gcd(q, a)
    total = 0.0
    for d in divisors(g):
        for delta in divisors(q // d):
            total += d * delta * mobius(q // (d * delta)) * math.log(delta)
    return total


MAIN_TERM_VARIANTS = ("heath-brown", "selberg-linear", "selberg-squared")


def main_term(variant: str, X: float, q: int, a: int) -> float:
    """The chosen main-term variant at (X, q, a).

    heath-brown     X q^{-2} (A(q,a)(log(X/q^2) + 2 gamma - 1) + 2 B(q,a))
    selberg-linear  X phi(q)/q^2 (log X + 2 gamma + 2 sum_{p|q} log p/(p-1))
    selberg-squared the same with the bracket squared (as printed)
    """
    if variant == "heath-brown":
        return (
            X
            / q**2
            * (heathbrown_A(q, a) * (math.log(X / q**2) + 2 * EULER_GAMMA - 1) + 2 * heathbrown_B(q, a))
        )
    if variant in ("selberg-linear", "selberg-squared"):
        if math.gcd(a, q) != 1:
            raise ValueError("selberg variants require gcd(a,q) = 1")
        bracket = math.log(X) + 2 * EULER_GAMMA + 2 * sum(
            math.log(p) / (p - 1) for p, _ in factorize(q)
        )
        if variant == "selberg-squared":
            bracket *= bracket
        return X * euler_phi(q) / q**2 * bracket
    raise ValueError(f"unknown main-term variant {variant!r}; choose from {MAIN_TERM_VARIANTS}")


# ---------------------------------------------------------------------------
# level-of-distribution experiment


@dataclass(frozen=True)
class LevelCell:
    X: float
    p: int
    a: int
    delta: float
    normalized: float
    weight_tag: str


def level_cell(X: float, p: int, W: SmoothWeight, samples: int, seed: int) -> LevelCell:
    """Worst residue for one (X, p): max |delta| over all units when
    p <= 997, else over a seeded sample of `samples` units."""
    sums = residue_sums_smooth(X, p, W)
    coprime_total = float(sums[1:].sum())
    deltas = sums[1:] - coprime_total / (p - 1)
    if p <= 997:
        idx = int(np.argmax(np.abs(deltas)))
    else:
        rng = np.random.default_rng([seed, p, int(X)])
        chosen = rng.choice(p - 1, size=min(samples, p - 1), replace=False)
        chosen.sort()
        idx = int(chosen[np.argmax(np.abs(deltas[chosen]))])
    a = idx + 1
    d = float(deltas[idx])
    return LevelCell(X, p, a, d, abs(d) * p / X, W.tag)


@dataclass(frozen=True)
class LevelFit:
    theta: float
    slope: float
    stderr: float
    r2: float
    n_points: int
    cells: tuple[LevelCell, ...]


def level_fit(
    theta: float,
    X_grid: Sequence[float],
    W: SmoothWeight | None = None,
    samples_per_X: int = 50,
    primes_per_X: int = 5,
    seed: int = 12345,
) -> LevelFit:
    """For each X, take the primes nearest X^theta, the worst sampled
    residue for each, and fit log(max |delta| p) against log X.  The
    slope is the empirical 1 - delta of the X^{1-delta}/p error term."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must be in (0,1), got {theta}")
    W = W or _DEFAULT_WEIGHT
    cells: list[LevelCell] = []
    xs, ys = [], []
    for X in X_grid:
        target = X**theta
        per_x: list[LevelCell] = []
        for p in primes_near(target, primes_per_X):
            if p < 3 or p > 2 * X:
                continue
            per_x.append(level_cell(X, p, W, samples_per_X, seed))
        cells.extend(per_x)
        if not per_x:
            continue
        worst = max(per_x, key=lambda c: abs(c.delta) * c.p)
        xs.append(X)
        ys.append(abs(worst.delta) * worst.p)
    fit = fit_loglog(np.array(xs), np.array(ys))
    return LevelFit(theta, fit.slope, fit.stderr, fit.r2, fit.n_points, tuple(cells))


# ---------------------------------------------------------------------------
# truncation split (the conditional-level experiment surface)


@dataclass(frozen=True)
class TruncationSplitReport:
    X: float
    p: int
    a: int
    N1: int
    head_abs: float
    head_bound: float
    head_ratio: float
    tail_abs: float
    tail_heuristic: float
    tail_ratio: float
    N1_admissible: bool  # N1 >= X^{1/3 - 2 delta} in the admitted regime


def _contour_nodes(W: SmoothWeight, sigma0: float, T: float, step: float) -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(-T, T + step / 2, step)
    s = sigma0 + 1j * t
    mell = np.array([W.mellin(1 - si) for si in s])
    return s, mell


def truncation_split_check(
    X: float,
    p: int,
    a: int,
    W: SmoothWeight | None = None,
    N1: int | None = None,
    delta: float = 0.05,
    T: float = 30.0,
    step: float = 0.25,
) -> TruncationSplitReport:
    """Split the character-side sum at N1 = p^{1/2-delta}.

    Head: contour at Re s = epsilon of
      W-hat(1-s) (X/p^2)^{1-s} (pi^{1/2-s} Gamma(s/2)/Gamma((1-s)/2))^2
        sum_{n<=N1} tau2(n) Kloos_2(an,p) n^{-s},
    reported against (X N1/p^2)^{1-eps} p^{1/2} log N1.  Tail: the same
    contour at Re s = 1+eps with the sum over N1 < n < p, reported
    against the conjectural p^{1/4+2 delta}.
    """
    if not is_prime(p) or a % p == 0:
        raise ValueError("need prime p and a unit a")
    W = W or _DEFAULT_WEIGHT
    if N1 is None:
        N1 = max(2, int(round(p ** (0.5 - delta))))
    eps = 0.05
    K = kloosterman_table(p)
    tau_head = tau2_range(1, N1 + 1)
    n_head = np.arange(1, N1 + 1)
    k_head = K[(n_head * (a % p)) % p]
    tau_tail = tau2_range(N1 + 1, p)
    n_tail = np.arange(N1 + 1, p)
    k_tail = K[(n_tail * (a % p)) % p]

    def piece(sigma0: float, n: np.ndarray, tau: np.ndarray, kl: np.ndarray) -> complex:
        s, mell = _contour_nodes(W, sigma0, T, step)
        gam = np.array([gamma(si / 2) / gamma((1 - si) / 2) for si in s])
        pref = mell * (X / p**2) ** (1 - s) * (np.pi ** (0.5 - s) * gam) ** 2
        nsum = (tau * kl)[None, :] * n.astype(float)[None, :] ** (-s[:, None])
        integrand = pref * nsum.sum(axis=1)
        return complex(np.trapezoid(integrand, dx=step) / (2 * np.pi))

    factor = 0.5 * (p - 2) / (p - 1)
    head = factor * piece(eps, n_head, tau_head, k_head)
    tail = factor * piece(1 + eps, n_tail, tau_tail, k_tail) if len(n_tail) else 0j
    head_bound = (X * N1 / p**2) ** (1 - eps) * math.sqrt(p) * math.log(max(N1, 2))
    tail_heur = p ** (0.25 + 2 * delta)
    admissible = N1 >= X ** (1.0 / 3 - 2 * delta) * (1 - 1e-9)
    return TruncationSplitReport(
        X,
        p,
        a % p,
        N1,
        abs(head),
        head_bound,
        abs(head) / head_bound,
        abs(tail),
        tail_heur,
        abs(tail) / tail_heur,
        admissible,
    )
