import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgekit.specfun import (
    airy_arrays,
    airy_eval,
    airy_modulus,
    crossover_c,
    lambda0_estimate,
    lambda1_estimate,
    laguerre_fn,
    laguerre_poly,
    m_over_e,
)


def test_fixture_accuracy(airy_fixture):
    x = airy_fixture["x"]
    ai, aip, bi, bip = airy_arrays(x)
    # relative error, measured against the modulus on the oscillatory side where zeros make pure relative error meaningless
    big_m = np.where(x < 0, np.hypot(airy_fixture["ai"], airy_fixture["bi"]), 1.0)
    big_n = np.where(x < 0, np.hypot(airy_fixture["ai_prime"], airy_fixture["bi_prime"]), 1.0)
    for got, key, env in ((ai, "ai", big_m), (aip, "ai_prime", big_n), (bi, "bi", big_m), (bip, "bi_prime", big_n)):
        ref = airy_fixture[key]
        scale = np.where(x < 0, env, np.abs(ref))
        assert np.max(np.abs(got - ref) / scale) < 1e-12, key


def test_wronskian_at_zero():
    p = airy_eval(0.0)
    assert abs(p.ai * p.bi_prime - p.ai_prime * p.bi - 1 / math.pi) < 1e-15
    assert abs(1 / math.pi - 0.31830988618) < 1e-11


def test_ai_at_one_and_bound():
    # Maclaurin oracle in exact rational arithmetic for the two series f, g with Ai = c1 f - c2 g
    x = Fraction(1)
    f = g = Fraction(0)
    tf, tg = Fraction(1), x
    for k in range(40):
        f += tf
        g += tg
        tf = tf * x**3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x**3 / ((3 * k + 3) * (3 * k + 4))
    c1 = 3 ** (-2 / 3) / math.gamma(2 / 3)
    c2 = 3 ** (-1 / 3) / math.gamma(1 / 3)
    oracle = c1 * float(f) - c2 * float(g)
    ai = airy_eval(1.0).ai
    assert abs(ai - oracle) < 1e-14
    assert abs(ai - 0.1352924163) < 1e-10
    assert ai <= math.exp(-2 / 3) / (2 * math.sqrt(math.pi))
    assert abs(math.exp(-2 / 3) / (2 * math.sqrt(math.pi)) - 0.14485) < 5e-5


def test_ai_decay_at_30():
    ai = airy_eval(30.0).ai
    assert 0 < ai < 1e-40
    assert abs(ai / float(mp.airyai(30)) - 1) < 1e-12


def test_large_positive_bi_overflow_flagged():
    p = airy_eval(120.0)
    assert math.isinf(p.bi) and math.isinf(p.bi_prime)
    # Ai(120) ~ exp(-876) is below the double range
    assert p.ai == 0.0
    q = airy_eval(100.0)
    assert math.isfinite(q.bi) and q.ai > 0
    assert abs(q.ai / float(mp.airyai(100)) - 1) < 1e-12


def test_asymptotic_branches_match_mpmath():
    for x in (-60.0, -32.5, 33.0, 45.0, 80.0):
        p = airy_eval(x)
        env = float(mp.sqrt(mp.airyai(x) ** 2 + mp.airybi(x) ** 2)) if x < 0 else abs(float(mp.airyai(x)))
        assert abs(p.ai - float(mp.airyai(x))) / env < 1e-12


def test_wronskian_grid():
    x = np.linspace(-10, 8, 200)
    ai, aip, bi, bip = airy_arrays(x)
    assert np.max(np.abs(ai * bip - aip * bi - 1 / math.pi)) < 1e-10


def test_airy_equation_residual():
    x = np.linspace(-5, 5, 101)
    h = 1e-4
    a_m = airy_arrays(x - h)[0]
    a_0 = airy_arrays(x)[0]
    a_p = airy_arrays(x + h)[0]
    second = (a_p - 2 * a_0 + a_m) / h**2
    assert np.max(np.abs(second - x * a_0)) < 1e-7


def test_monotone_on_positive_axis():
    x = np.linspace(1e-3, 10, 500)
    ai, aip, _, _ = airy_arrays(x)
    assert np.all(ai > 0) and np.all(np.diff(ai) < 0)
    assert np.all(aip < 0) and np.all(np.diff(aip) > 0)
    bound = np.exp(-2 / 3 * x**1.5) / (2 * math.sqrt(math.pi) * x**0.25)
    assert np.all(ai <= bound)


def test_seam_continuity_across_anchor_midpoints():
    # neighbouring anchors must give the same value at the midpoint between them
    for x in (-20.25, -4.75, 0.25, 4.75, 20.25):
        eps = 1e-12
        lo, hi = airy_arrays(np.array([x - eps, x + eps]))[0]
        assert abs(lo - hi) < 1e-12 * max(1.0, abs(lo))


def test_crossover_value():
    c = crossover_c()
    ref = float(mp.findroot(lambda t: mp.airyai(t) - mp.airybi(t), -0.366))
    assert abs(c - ref) < 1e-12
    assert -1.5 < c < 0


def test_modulus_left_branch_weight_is_one():
    for x in (-5.0, -1.0, crossover_c()):
        assert airy_modulus(x).big_e == 1.0


def test_modulus_reconstruction():
    x = np.linspace(crossover_c(), 10, 300)
    m = airy_modulus(x)
    ai, aip, bi, bip = airy_arrays(x)
    assert np.max(np.abs(m.big_m / m.big_e * np.sin(m.theta) - ai) / np.abs(ai)) < 1e-9
    assert np.max(np.abs(m.big_m * m.big_e * np.cos(m.theta) - bi) / np.abs(bi)) < 1e-9
    assert np.max(np.abs(m.big_n / m.big_e * np.sin(m.omega) - aip) / np.abs(aip)) < 1e-9
    assert np.max(np.abs(m.big_n * m.big_e * np.cos(m.omega) - bip) / np.abs(bip)) < 1e-9


def test_modulus_reconstruction_oscillatory_side():
    x = np.linspace(-30, crossover_c(), 300)
    m = airy_modulus(x)
    ai, _, bi, _ = airy_arrays(x)
    assert np.max(np.abs(m.big_m * np.sin(m.theta) - ai)) < 1e-12
    assert np.max(np.abs(m.big_m * np.cos(m.theta) - bi)) < 1e-12


def test_weight_nondecreasing():
    x = np.linspace(0.01, 20, 400)
    assert np.all(np.diff(airy_modulus(x).big_e) >= 0)


def test_modulus_asymptotic_at_20():
    m = airy_modulus(20.0).big_m
    assert abs(m / (math.pi**-0.5 * 20**-0.25) - 1) < 0.02


def test_m_over_e_finite_far_right():
    assert np.isfinite(m_over_e(np.array([150.0, 300.0]))).all()
    assert abs(float(m_over_e(2.0)) - math.sqrt(2) * airy_eval(2.0).ai) < 1e-16


def test_lambda0():
    lam0 = lambda0_estimate()
    assert 1.0 <= lam0 < 1.2
    # x = 0 contributes nothing because of the |x|^(1/2) factor
    assert math.pi * 0.0 * airy_modulus(0.0).big_m ** 2 == 0.0


def test_lambda1_sup_close_to_one():
    assert abs(lambda1_estimate() - 1.0) < 1e-3


def test_laguerre_small_cases():
    for a in (0, 1, 5):
        for x in (0.0, 2.5, 40.0):
            assert laguerre_poly(0, a, x) == 1.0
    assert laguerre_poly(1, 3, 2.0) == 2.0
    v = laguerre_poly(10, 2, 5.0)
    assert abs(v) <= math.comb(12, 10) * math.exp(2.5)
    assert abs(math.comb(12, 10) * math.exp(2.5) - 804.04) < 0.01


def _explicit_laguerre(j, a, x):
    x = Fraction(x)
    return sum(Fraction((-1) ** i * math.comb(j + a, j - i)) * x**i / math.factorial(i) for i in range(j + 1))


@pytest.mark.parametrize("j", [2, 5, 9, 12])
@pytest.mark.parametrize("a", [0, 2, 7])
def test_laguerre_explicit_sum(j, a):
    for x in ("0.5", "3", "11.25"):
        ref = float(_explicit_laguerre(j, a, Fraction(x)))
        got = laguerre_poly(j, a, float(x))
        assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


@given(st.integers(0, 30), st.integers(0, 10), st.floats(0, 40))
@settings(max_examples=200, deadline=None)
def test_laguerre_bound(j, a, x):
    assert abs(laguerre_poly(j, a, x)) <= math.comb(j + a, j) * math.exp(x / 2) * (1 + 1e-12)


def test_laguerre_overflow_flagged():
    with pytest.raises(OverflowError):
        laguerre_poly(400, 0, 5000.0)


def test_laguerre_fn_examples():
    assert abs(laguerre_fn(0, 0, 2.0) - math.exp(-1)) < 1e-16
    assert laguerre_fn(3, 4, 0.0) == 0.0
    mp.mp.dps = 60
    ref = mp.mpf(10) ** 25 * mp.e ** -5 * mp.laguerre(50, 50, 10)
    got = laguerre_fn(50, 50, 10.0)
    assert abs(got / float(ref) - 1) < 1e-10


def test_laguerre_fn_large_degree_no_overflow():
    x = np.array([1.0, 1e3, 4e4, 1e5])
    v = laguerre_fn(10_000, 3, x)
    assert np.all(np.isfinite(v))
    mp.mp.dps = 50
    ref = mp.mpf(1000) ** 1.5 * mp.e ** -500 * mp.laguerre(10_000, 3, 1000)
    assert abs(v[1] - float(ref)) <= 1e-8 * abs(float(ref)) + 1e-300
