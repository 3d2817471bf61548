"""Backend-parity and correctness tests for the hot kernels."""

import cmath
import math

import numpy as np
import pytest

from divap import _pykernels
from divap import kernels
from divap.arith import tau2


def _brute_tau2_range(lo, hi):
    return np.array([sum(1 for d in range(1, n + 1) if n % d == 0) for n in range(lo, hi)])


def _brute_kloosterman(m, n, q):
    if q == 1:
        return 1.0 + 0j
    total = 0j
    for h in range(1, q):
        if math.gcd(h, q) != 1:
            continue
        hbar = pow(h, -1, q)
        total += cmath.exp(2j * cmath.pi * ((m * h + n * hbar) % q) / q)
    return total


BACKENDS = [_pykernels]
try:
    from divap import _ckernels

    BACKENDS.append(_ckernels)
except ImportError:
    _ckernels = None


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def test_tau2_range_against_brute_force(impl):
    assert np.array_equal(impl.tau2_range(1, 201), _brute_tau2_range(1, 201))
    assert np.array_equal(impl.tau2_range(999, 1100), _brute_tau2_range(999, 1100))
    # perfect squares near the segment boundary
    assert np.array_equal(impl.tau2_range(961, 962), [tau2(961)])


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def test_tau2_range_validation(impl):
    with pytest.raises(ValueError):
        impl.tau2_range(0, 10)
    assert len(impl.tau2_range(5, 5)) == 0


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def test_kloosterman_against_brute_force(impl):
    for q in (1, 2, 3, 4, 5, 6, 12, 13, 30):
        for (m, n) in ((0, 0), (1, 1), (2, 3), (q - 1, 1), (7, 11)):
            assert impl.kloosterman_sum(m, n, q) == pytest.approx(
                _brute_kloosterman(m % q if q > 1 else 0, n % q if q > 1 else 0, q), abs=1e-12
            )


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def test_kloosterman_table_matches_scalar(impl):
    for q in (1, 7, 12, 45):
        table = impl.kloosterman_table(q)
        for b in range(q):
            assert table[b] == pytest.approx(impl.kloosterman_sum(1, b, q), abs=1e-12)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def test_modulus_guard(impl):
    with pytest.raises(ValueError):
        impl.kloosterman_sum(1, 1, 0)
    with pytest.raises(ValueError):
        impl.kloosterman_sum(1, 1, 2**31)


@pytest.mark.skipif(_ckernels is None, reason="compiled backend not built")
def test_backends_agree():
    for q in (13, 40, 101):
        a = _pykernels.kloosterman_table(q)
        b = _ckernels.kloosterman_table(q)
        assert np.max(np.abs(a - b)) < 1e-12
    assert np.array_equal(_pykernels.tau2_range(1, 5000), _ckernels.tau2_range(1, 5000))
    for p in (13, 61):
        ra, *_ = _pykernels.weil_scan_worst(p)
        rb, *_ = _ckernels.weil_scan_worst(p)
        assert ra == pytest.approx(rb, abs=1e-12)


def test_weil_scan_matches_explicit_max():
    p = 23
    ratio, m, n = kernels.weil_scan_worst(p)
    worst = 0.0
    for mm in range(p):
        for nn in range(p):
            bound = 2.0 * p if (mm == 0 and nn == 0) else 2.0 * math.sqrt(p)
            worst = max(worst, abs(_brute_kloosterman(mm, nn, p)) / bound)
    assert ratio == pytest.approx(worst, abs=1e-12)
    bound = 2.0 * p if (m == 0 and n == 0) else 2.0 * math.sqrt(p)
    assert abs(_brute_kloosterman(m, n, p)) / bound == pytest.approx(ratio, abs=1e-12)


def test_selected_backend_exports():
    assert kernels.BACKEND in ("compiled", "numpy")
    assert kernels.tau2_range(1, 4).tolist() == [1, 2, 2]
