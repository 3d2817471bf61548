import math

import numpy as np
import pytest

from divap.arith import euler_phi
from divap.divisor_ap import (
    SieveBudgetError,
    ap_sum_smooth,
    coprime_sum_smooth,
    default_weight,
    delta_discrepancy,
    heathbrown_A,
    heathbrown_B,
    level_fit,
    main_term,
    mellin_W,
    residue_sums_smooth,
    sharp_ap_sum,
    truncation_split_check,
)
from divap.specfun import EULER_GAMMA


def test_weight_support_and_smoothness(bump_weight):
    assert bump_weight(1.0) == 0.0
    assert bump_weight(2.0) == 0.0
    assert bump_weight(0.5) == 0.0
    assert bump_weight(1.5) == pytest.approx(math.exp(-4.0))
    x = np.linspace(0.9, 2.1, 200)
    assert np.all(bump_weight(x) >= 0)


def test_weight_scaling(bump_weight):
    w2 = bump_weight.scaled(2.0)
    assert w2(1.5) == pytest.approx(2 * bump_weight(1.5))
    assert w2.tag != bump_weight.tag


def test_mellin_examples(bump_weight):
    assert mellin_W(1.0).real > 0
    assert abs(mellin_W(1.0).imag) < 1e-14
    assert np.isfinite(mellin_W(-2.0).real)  # entire: fine left of 0
    # measured decay ratios (the bump reaches 1e-3 only near t ~ 80)
    base = abs(mellin_W(0.0))
    assert abs(mellin_W(0 + 10j)) / base == pytest.approx(0.632, abs=0.01)
    assert abs(mellin_W(0 + 80j)) / base < 1e-3


def test_mellin_rapid_decay_envelopes(bump_weight):
    # |W-hat(sigma+it)| <= C_l (1+|t|)^{-l} for l = 1..4, |sigma| <= 3,
    # with constants measured at moderate t and verified further out
    for sigma in (-3.0, -1.0, 0.0, 1.0, 3.0):
        for ell in (1, 2, 3, 4):
            C = max(
                abs(mellin_W(complex(sigma, t))) * (1 + t) ** ell for t in (10.0, 20.0, 40.0)
            )
            for t in (60.0, 90.0, 120.0):
                assert abs(mellin_W(complex(sigma, t))) <= C * (1 + t) ** (-ell)


def test_ap_sum_smooth_examples(bump_weight):
    # empty range when q > 2X and a out of reach
    assert ap_sum_smooth(10.0, 50, 3, bump_weight) == 0.0
    full = ap_sum_smooth(1e4, 1, 0, bump_weight)
    assert full > 0
    parts = sum(ap_sum_smooth(1e4, 11, a, bump_weight) for a in range(11))
    assert parts == pytest.approx(full, rel=1e-12)


def test_coprime_sum_partition(bump_weight):
    X, q = 1e4, 11
    units_total = sum(ap_sum_smooth(X, q, a, bump_weight) for a in range(1, q))
    assert coprime_sum_smooth(X, q, bump_weight) == pytest.approx(units_total, rel=1e-12)
    # prime q: full sum minus the q | n part
    q_part = ap_sum_smooth(X, q, 0, bump_weight)
    assert coprime_sum_smooth(X, q, bump_weight) + q_part == pytest.approx(
        ap_sum_smooth(X, 1, 0, bump_weight), rel=1e-12
    )


def test_delta_discrepancy(bump_weight):
    X, p = 1e5, 101
    rec = delta_discrepancy(X, p, 1, bump_weight)
    assert rec.normalized == pytest.approx(abs(rec.delta) * p / X)
    assert rec.weight_tag == bump_weight.tag
    total = sum(delta_discrepancy(X, p, a, bump_weight).delta for a in range(1, p))
    assert abs(total) < 1e-9 * ap_sum_smooth(X, 1, 0, bump_weight)
    with pytest.raises(ValueError):
        delta_discrepancy(X, 100, 1, bump_weight)
    with pytest.raises(ValueError):
        delta_discrepancy(X, p, 0, bump_weight)


def test_delta_scaling_linearity(bump_weight):
    X, p, a = 1e4, 31, 5
    d1 = delta_discrepancy(X, p, a, bump_weight).delta
    d3 = delta_discrepancy(X, p, a, bump_weight.scaled(3.0)).delta
    assert d3 == pytest.approx(3 * d1, rel=1e-12)


def test_sharp_ap_sum_examples():
    assert sharp_ap_sum(100, 1, 0) == 482  # independent oracle in acceptance
    assert sharp_ap_sum(5, 7, 6) == 0.0  # X < a: empty
    assert sharp_ap_sum(20, 7, 6) == 12.0  # n in {6, 13, 20}: 4 + 2 + 6
    assert sharp_ap_sum(0.5, 3, 1) == 0.0
    # additivity in X against a direct range oracle
    from divap.kernels import tau2_range

    tau = tau2_range(501, 1001)
    n = np.arange(501, 1001)
    oracle = float(tau[n % 7 == 3].sum())
    assert sharp_ap_sum(1000, 7, 3) - sharp_ap_sum(500, 7, 3) == pytest.approx(oracle)


def test_heathbrown_examples():
    assert heathbrown_A(1, 5) == 1
    assert heathbrown_B(1, 5) == 0.0
    # brute-force oracle for A(4, 2)
    def oracle_A(q, a):
        g = math.gcd(q, a)
        tot = 0
        for d in range(1, q + 1):
            if g % d:
                continue
            for delta in range(1, q // d + 1):
                if (q // d) % delta:
                    continue
                from divap.arith import mobius

                tot += d * delta * mobius(q // (d * delta))
        return tot

    assert heathbrown_A(4, 2) == oracle_A(4, 2)
    assert heathbrown_A(12, 8) == oracle_A(12, 8)
    for q in (2, 3, 12, 100, 499):
        for a in (1, q - 1):
            if math.gcd(a, q) == 1:
                assert heathbrown_A(q, a) == euler_phi(q)


def test_main_term_variants():
    X = 100.0
    hb = main_term("heath-brown", X, 1, 0)
    assert hb == pytest.approx(X * (math.log(X) + 2 * EULER_GAMMA - 1))
    assert abs(hb - 482) < 3 * math.sqrt(X)  # O(sqrt X) error scale
    sq = main_term("selberg-squared", X, 1, 1)
    assert abs(sq - 482) > 2000  # gross mismatch, evidence for the typo
    # the linear variant misses by ~X (its bracket carries 2 gamma, not
    # 2 gamma - 1), so it also fails the sqrt-X scale
    lin = main_term("selberg-linear", X, 1, 1)
    assert 50 < abs(lin - 482) < 150
    with pytest.raises(ValueError):
        main_term("selberg-linear", X, 6, 2)
    with pytest.raises(ValueError):
        main_term("unknown", X, 1, 0)


def test_main_term_hb_agrees_with_selberg_linear_shape():
    # for (a,q)=1 the HB term equals the linear Selberg bracket with
    # 2 gamma - 1 in place of 2 gamma
    for p in (3, 7, 11):
        X = 1e4
        hb = main_term("heath-brown", X, p, 1)
        lin = main_term("selberg-linear", X, p, 1)
        assert lin - hb == pytest.approx(X * euler_phi(p) / p**2, rel=1e-9)


def test_level_fit_smoke():
    fit = level_fit(0.5, [1e4, 3e4], primes_per_X=2, seed=1)
    assert fit.n_points == 2
    assert np.isfinite(fit.slope)
    fit2 = level_fit(0.5, [1e4, 3e4], primes_per_X=2, seed=1)
    assert fit.slope == fit2.slope  # deterministic
    assert all(c.weight_tag == "bump" for c in fit.cells)
    with pytest.raises(ValueError):
        level_fit(1.5, [1e4])


def test_residue_sums_match_ap_sums(bump_weight):
    X, q = 3e3, 13
    sums = residue_sums_smooth(X, q, bump_weight)
    for a in range(q):
        assert sums[a] == pytest.approx(ap_sum_smooth(X, q, a, bump_weight), rel=1e-12)


def test_truncation_split_report(bump_weight):
    rep = truncation_split_check(1e5, 2003, 5, bump_weight)
    assert rep.N1 == max(2, round(2003 ** (0.5 - 0.05)))
    assert rep.head_ratio <= 1.0 + 1e-6  # sampled (X,p): bound holds
    assert rep.tail_ratio >= 0.0
    assert rep.N1_admissible  # N1 >= X^{1/3 - 2 delta} in this regime
    with pytest.raises(ValueError):
        truncation_split_check(1e5, 2004, 5, bump_weight)


def test_sieve_budget_guard():
    with pytest.raises(SieveBudgetError):
        sharp_ap_sum(1e9, 1, 0)
    with pytest.raises(SieveBudgetError):
        ap_sum_smooth(1e9, 3, 1, default_weight())
