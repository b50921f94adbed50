import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmtlab.determinantal import (
    DegenerateIntervalError,
    QuadratureRule,
    TruncationError,
    correlation_fn,
    discretize,
    fredholm_det,
    fredholm_det_trace_series,
    fredholm_eigenvalues,
    gap_probabilities,
    gauss_legendre,
    joint_density_unnormalized,
    tracy_widom_cdf,
    tracy_widom_table,
    verify_mehta_reduction,
)
from rmtlab.orthopoly import airy_kernel, cd_kernel, sine_kernel
from rmtlab.rng import RngState


def test_quadrature_rule():
    rule = gauss_legendre(12, -1.5, 2.5)
    assert abs(rule.weights.sum() - 4.0) < 1e-12
    for p in range(24):
        exact = (2.5 ** (p + 1) - (-1.5) ** (p + 1)) / (p + 1)
        assert abs(rule.integrate(lambda x: x**p) - exact) < 1e-12 * max(1.0, abs(exact))
    with pytest.raises(ValueError):
        QuadratureRule([1.0, 0.0], [1.0, 1.0], (0, 1))
    with pytest.raises(ValueError):
        gauss_legendre(5, 1.0, 1.0)


def test_joint_density_examples():
    assert joint_density_unnormalized(2.0, [0.4, 0.4]) == 0.0
    assert joint_density_unnormalized(2.0, [0.0]) == 1.0
    ratio = joint_density_unnormalized(2.0, [0.0, 2.0]) / joint_density_unnormalized(2.0, [0.0, 1.0])
    assert ratio == pytest.approx(4 * math.exp(-(4 - 1) / 2), rel=1e-14)
    assert joint_density_unnormalized(1.0, [0.0, 1.0], potential=lambda x: 0 * x) == pytest.approx(1.0)


def test_correlation_examples():
    n = 6
    x = 0.37
    assert correlation_fn(n, [x]) == pytest.approx(cd_kernel(n).diagonal(x), rel=1e-14)
    rule = gauss_legendre(200, -15, 15)
    assert abs(rule.integrate(lambda v: np.array([correlation_fn(n, [t]) for t in v])) - n) < 1e-6
    assert abs(correlation_fn(n, [0.2, 0.2])) < 1e-10
    with pytest.raises(ValueError):
        correlation_fn(2, [0.0, 1.0, 2.0])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_correlation_proportional_to_joint_density(n):
    # the Hermite functions carry the weight e^{-x^2}, i.e. V(x) = x^2 at beta = 2
    gen = RngState(60 + n).generator()
    ratios = []
    for _ in range(20):
        xs = gen.uniform(-2, 2, n)
        ratios.append(correlation_fn(n, xs) / joint_density_unnormalized(2.0, xs, potential=lambda x: x**2))
    ratios = np.array(ratios)
    assert np.ptp(ratios) / abs(ratios.mean()) < 1e-8


def test_mehta_reduction():
    c2 = verify_mehta_reduction(2, [0.3])
    assert c2.residual < 1e-6
    c3 = verify_mehta_reduction(3, [0.1, -0.4])
    assert c3.residual < 1e-5
    rule = gauss_legendre(200, -15, 15)
    for n in (2, 3, 7):
        assert abs(rule.integrate(cd_kernel(n).diagonal) - n) < 1e-8


def test_fredholm_trivial_and_rank_one():
    assert fredholm_det(sine_kernel(), (0, 1), 40, t=0.0) == 1.0
    lam = 0.5 + math.sin(2.0) / 4.0
    for t in (0.3, 1.0, -2.0):
        val = fredholm_det(lambda x, y: np.cos(x) * np.cos(y), (0, 1), 20, t=t)
        assert abs(val - (1 - t * lam)) < 1e-10
    with pytest.raises(ValueError):
        fredholm_det(sine_kernel(), (0, 1), 5)
    with pytest.raises(ValueError), np.errstate(divide="ignore"):
        fredholm_det(lambda x, y: 1.0 / (x - y + 0 * x), (0, 1), 20)


@pytest.mark.parametrize("kernel,interval", [(sine_kernel(), (0, 1)), (airy_kernel(), (-2, 14))])
def test_self_convergence(kernel, interval):
    assert abs(fredholm_det(kernel, interval, 40) - fredholm_det(kernel, interval, 80)) < 1e-9


def test_sine_self_convergence_tight():
    assert abs(fredholm_det(sine_kernel(), (0, 1), 40) - fredholm_det(sine_kernel(), (0, 1), 80)) < 1e-10


def test_trace_series():
    assert abs(fredholm_det_trace_series(lambda x, y: 0.5 + 0 * x * y, (0, 1), 10, 1.0, terms=60) - 0.5) < 1e-12
    assert fredholm_det_trace_series(sine_kernel(), (0, 0.5), t=0.0) == 1.0
    for interval in [(0, 0.5), (0, 1.0), (-0.7, 1.1)]:
        a = fredholm_det_trace_series(sine_kernel(), interval)
        b = fredholm_det(sine_kernel(), interval)
        assert abs(a - b) < 1e-8
    assert abs(fredholm_det_trace_series(airy_kernel(), (0, 16)) - fredholm_det(airy_kernel(), (0, 16))) < 1e-8
    with pytest.raises(ValueError):
        fredholm_det_trace_series(lambda x, y: 2.0 + 0 * x * y, (0, 1), 10)
    with pytest.raises(ValueError):
        fredholm_det_trace_series(lambda x, y: 0.999999 + 0 * x * y, (0, 1), 10)


@pytest.mark.parametrize("kernel,interval,m", [
    (sine_kernel(), (0, 3), 60), (airy_kernel(), (-4, 12), 60), (cd_kernel(10), (-8, 8), 100), (cd_kernel(5), (-1, 1), 60)])
def test_nystrom_spectrum_in_unit_interval(kernel, interval, m):
    ev = fredholm_eigenvalues(kernel, interval, m)
    assert ev[0] >= -1e-10 and ev[-1] <= 1 + 1e-10
    discretize(kernel, interval, m).check_projection()


def test_projection_check_flags_overshoot():
    with pytest.raises(ValueError):
        discretize(lambda x, y: 2.0 + 0 * x * y, (0, 1), 10).check_projection()


def test_gap_examples():
    empty = gap_probabilities(sine_kernel(), (0.5, 0.5), m_max=4)
    assert empty.tolist() == [1.0, 0.0, 0.0, 0.0, 0.0]
    a = gap_probabilities(sine_kernel(), (0, 1.3), m_max=8)
    assert abs(a[0] - fredholm_det(sine_kernel(), (0, 1.3))) < 1e-12
    assert np.all(a >= -1e-10) and a.sum() <= 1 + 1e-8
    for s in (0.5, 1.0, 2.0):
        a = gap_probabilities(sine_kernel(), (0, s), 40, m_max=40)
        assert abs(np.sum(np.arange(41) * a) - s) < 1e-6


@pytest.mark.parametrize("kernel,interval", [(sine_kernel(), (0, 2)), (airy_kernel(), (-3, 13))])
def test_gap_refinement_invariance(kernel, interval):
    a40 = gap_probabilities(kernel, interval, 40, m_max=6)
    a80 = gap_probabilities(kernel, interval, 80, m_max=6)
    assert np.max(np.abs(a40 - a80)) < 1e-8


def test_gap_saturation():
    # CD kernel of rank 3 over an interval holding all its mass is a projection
    with pytest.raises(DegenerateIntervalError):
        gap_probabilities(cd_kernel(3), (-15, 15), 80)


def test_tracy_widom_points():
    assert tracy_widom_cdf(5.0) > 1 - 1e-6
    assert tracy_widom_cdf(-9.0) < 1e-4
    for s in (-4.0, -2.0, 0.0, 2.0):
        assert abs(tracy_widom_cdf(s, m=40) - tracy_widom_cdf(s, m=80)) < 1e-9
    # known value of F_2(-2) to seven digits
    assert tracy_widom_cdf(-2.0) == pytest.approx(0.4132241, abs=5e-7)
    with pytest.raises(ValueError):
        tracy_widom_cdf(7.0)
    with pytest.raises(TruncationError):
        tracy_widom_cdf(-9.0, length=16.0)


def test_tracy_widom_monotone_grid():
    s = np.linspace(-10, 6, 50)
    f = np.array([tracy_widom_cdf(v) for v in s])
    assert np.all(np.diff(f) >= 0)
    assert f[0] < 1e-4 and f[-1] > 1 - 1e-4


def test_tracy_widom_table_moments():
    table = tracy_widom_table()
    assert np.all(np.diff(table.f2) >= 0)
    ds = np.diff(table.s)
    dens = np.diff(table.f2) / ds
    mid = 0.5 * (table.s[1:] + table.s[:-1])
    mean = np.sum(mid * dens * ds)
    var = np.sum((mid - mean) ** 2 * dens * ds)
    # literature values of the beta = 2 law: mean -1.7710868, variance 0.8131948
    assert abs(mean + 1.7710868) < 2e-3
    assert abs(var - 0.8131948) < 2e-3
    assert table.cdf(-20.0) == 0.0 and table.cdf(20.0) == 1.0


@settings(max_examples=25)
@given(st.floats(-0.5, 0.5), st.floats(0.2, 2.5))
def test_trace_series_agrees_where_defined(a, length):
    assert abs(fredholm_det_trace_series(sine_kernel(), (a, a + length)) - fredholm_det(sine_kernel(), (a, a + length))) < 1e-8
