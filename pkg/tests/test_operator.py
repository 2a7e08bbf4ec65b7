import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgekit.errors import ConvergenceError, GridMismatchError
from edgekit.kernels import KernelSpec
from edgekit.operator import (
    DiscretizedOperator,
    QuadratureSpec,
    discretize,
    fredholm_det,
    hs_norm,
    trace_bound,
    tw2_cdf,
    w1_components,
    w1_upper_bound,
)
from edgekit.scaling import EnsembleParams, composite_left

ZERO = KernelSpec.custom(lambda x, y: 0.0 * x * y, "zero")


def test_quadrature_points():
    x, w = QuadratureSpec(-1.0, 4.0, 30).points()
    assert x.min() > -1 and x.max() < 3
    assert w.sum() == pytest.approx(4.0, rel=1e-14)
    assert np.sum(w * x**5) == pytest.approx((3**6 - 1) / 6, rel=1e-13)


def test_zero_kernel():
    q = QuadratureSpec(0.0, 5.0, 20)
    assert np.all(discretize(ZERO, q).matrix == 0)
    assert hs_norm(ZERO, q) == 0.0


def test_rank_one_hs_norm():
    phi = lambda x: np.exp(-x)  # noqa: E731
    spec = KernelSpec.custom(lambda x, y: phi(x) * phi(y))
    q = QuadratureSpec(0.0, 30.0, 120)
    assert hs_norm(spec, q) == pytest.approx(0.5, rel=1e-12)


def test_hs_norm_equals_frobenius():
    q = QuadratureSpec(-1.0, 12.0, 70)
    spec = KernelSpec.airy()
    assert hs_norm(spec, q) == pytest.approx(discretize(spec, q).hs_norm(), rel=1e-10)


def test_airy_sum_norm_truncation():
    a = hs_norm(KernelSpec.airy_sum(0.0), QuadratureSpec(0.0, 10.0, 120))
    b = hs_norm(KernelSpec.airy_sum(0.0), QuadratureSpec(0.0, 14.0, 160))
    assert math.isfinite(a) and abs(a - b) < 1e-8


def test_airy_spectrum_in_unit_interval():
    op = discretize(KernelSpec.airy(), QuadratureSpec(0.0, 12.0, 60))
    ev = op.eigenvalues()
    assert ev.min() >= -1e-10 and ev.max() <= 1 + 1e-10
    fine = discretize(KernelSpec.airy(), QuadratureSpec(0.0, 12.0, 120)).eigenvalues()
    assert abs(fine.max() - ev.max()) < 1e-10


def test_scaled_lue_spectrum():
    p = EnsembleParams(50, 50)
    op = discretize(KernelSpec.lue_left(p, composite_left(p)), QuadratureSpec(-3.0, 14.0, 100))
    ev = op.eigenvalues()
    assert ev.min() >= -1e-8 and ev.max() <= 1 + 1e-8


def test_matrix_symmetric():
    p = EnsembleParams(20, 20)
    op = discretize(KernelSpec.g_tau(p, composite_left(p), 0.0), QuadratureSpec(0.0, 10.0, 40))
    assert np.array_equal(op.matrix, op.matrix.T)


def test_trace_bound_zero():
    z = DiscretizedOperator.from_matrix(np.zeros((4, 4)))
    assert trace_bound(z, z, z) == (0.0, 0.0)


def test_trace_bound_projection_case():
    v = np.ones(5) / math.sqrt(5)
    pr = DiscretizedOperator.from_matrix(np.outer(v, v))
    c = DiscretizedOperator.from_matrix(math.sqrt(2) * np.outer(v, v))
    lhs, rhs = trace_bound(pr, pr, c)
    assert lhs <= rhs + 1e-9


def test_trace_bound_grid_mismatch():
    a = discretize(KernelSpec.airy(), QuadratureSpec(0.0, 5.0, 10))
    b = discretize(KernelSpec.airy(), QuadratureSpec(0.0, 5.0, 12))
    with pytest.raises(GridMismatchError):
        trace_bound(a, a, b)
    with pytest.raises(GridMismatchError):
        a.combine(b)


def _sym(rng, k=20):
    m = rng.standard_normal((k, k))
    return DiscretizedOperator.from_matrix(0.5 * (m + m.T))


def test_trace_inequality_random_triples():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        lhs, rhs = trace_bound(_sym(rng), _sym(rng), _sym(rng))
        assert lhs <= rhs + 1e-9


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 10))
@settings(max_examples=60, deadline=None)
def test_trace_inequality_property(seed, scale):
    rng = np.random.default_rng(seed)
    a, b = _sym(rng, 8), _sym(rng, 8)
    c = DiscretizedOperator.from_matrix(scale * _sym(rng, 8).matrix)
    lhs, rhs = trace_bound(a, b, c)
    assert lhs <= rhs * (1 + 1e-12) + 1e-9


def test_fredholm_empty_tail():
    assert fredholm_det(KernelSpec.airy(), 40.0, QuadratureSpec(0.0, 16.0, 40)) == pytest.approx(1.0, abs=1e-15)


def test_tw2_monotone_and_range():
    s = np.linspace(-6, 3, 19)
    f = tw2_cdf(s)
    assert np.all(np.diff(f) > 0)
    assert np.all((f > 0) & (f <= 1))
    assert tw2_cdf(0.0) > tw2_cdf(-2.0)


def test_tw2_self_convergence():
    s = np.linspace(-5, 2, 15)
    a = tw2_cdf(s, QuadratureSpec(0.0, 16.0, 80))
    b = tw2_cdf(s, QuadratureSpec(0.0, 16.0, 160))
    assert np.max(np.abs(a - b)) < 1e-8


def test_tw2_known_values():
    # median and mean of TW2 from high-order Nystrom references
    assert tw2_cdf(-1.8049) == pytest.approx(0.5, abs=5e-4)
    s = np.linspace(-9, 6, 1501)
    f = tw2_cdf(s, QuadratureSpec(0.0, 16.0, 50))
    mean = s[-1] - np.sum(0.5 * (f[1:] + f[:-1]) * np.diff(s))
    assert mean == pytest.approx(-1.7711, abs=1e-3)


def test_fredholm_refinement_check():
    assert fredholm_det(KernelSpec.airy(), -1.0, QuadratureSpec(0.0, 16.0, 60), tol=1e-8) > 0
    with pytest.raises(ConvergenceError):
        fredholm_det(KernelSpec.airy(), -8.0, QuadratureSpec(0.0, 16.0, 6), tol=1e-12)


def test_w1_bound_positive_and_parity():
    p = EnsembleParams.from_gamma(64, 0.5)
    c = w1_components(p, composite_left(p), 0.0, QuadratureSpec(0.0, 14.0, 80))
    assert c["w1_bound"] > 0
    assert c["norm_sum"] < c["norm_sum_other"]
    q = EnsembleParams.from_gamma(65, 0.5)
    d = w1_components(q, composite_left(q), 0.0, QuadratureSpec(0.0, 14.0, 80))
    assert d["sign"] == -c["sign"]
    assert d["norm_sum"] < d["norm_sum_other"]


def test_w1_bound_dominates_gap_difference():
    p = EnsembleParams.from_gamma(256, 0.5)
    sc = composite_left(p)
    q = QuadratureSpec(0.0, 14.0, 120)
    bound = w1_upper_bound(p, sc, 0.0, q)
    gap_lue = fredholm_det(KernelSpec.lue_left(p, sc), 0.0, q)
    gap_ai = fredholm_det(KernelSpec.airy(), 0.0, q)
    assert bound >= abs(gap_lue - gap_ai)
