import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmtlab.ensembles import sample_spectrum
from rmtlab.limit_laws import semicircle_cdf, semicircle_stieltjes
from rmtlab.linalg import Convention, SpectralSample
from rmtlab.rng import RngState
from rmtlab.spectral_stats import (
    EmpiricalMeasure,
    EnsembleSpec,
    bulk_spacings,
    empirical_measure,
    histogram,
    ks_distance,
    largest_eigenvalue_rescaled,
    measure_moment,
    moment_variance_experiment,
    monte_carlo_spectra,
    self_consistency_residual,
    stieltjes_invert,
    stieltjes_residual,
    stieltjes_transform,
)

DELTA0 = EmpiricalMeasure([0.0], [1.0])


def _semicircle_quantiles(n):
    # vectorised bisection for F^{-1}((i - 1/2) / n)
    p = (np.arange(1, n + 1) - 0.5) / n
    lo, hi = np.full(n, -2.0), np.full(n, 2.0)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        below = semicircle_cdf(mid) < p
        lo, hi = np.where(below, mid, lo), np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def test_empirical_measure_atoms():
    mu = empirical_measure([0.0])
    assert mu.locations.tolist() == [0.0] and mu.weights.tolist() == [1.0]
    mu = empirical_measure([-1.0, 1.0])
    assert mu.weights.tolist() == [0.5, 0.5]
    assert measure_moment(mu, 0) == 1.0
    with pytest.raises(ValueError):
        empirical_measure([])
    with pytest.raises(ValueError):
        EmpiricalMeasure([0.0, 1.0], [0.7, 0.7])


def test_measure_moments():
    assert measure_moment(EmpiricalMeasure([-1.0, 1.0], [0.5, 0.5]), 3) == 0.0
    assert measure_moment(EmpiricalMeasure([2.0], [1.0]), 4) == 16.0
    with pytest.raises(ValueError):
        measure_moment(DELTA0, -1)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=40), st.randoms(use_true_random=False), st.integers(0, 8))
def test_moment_is_function_of_the_set(xs, rnd, k):
    ys = list(xs)
    rnd.shuffle(ys)
    assert measure_moment(xs, k) == measure_moment(ys, k)


def test_stieltjes_of_point_mass():
    assert stieltjes_transform(DELTA0, 1j) == pytest.approx(1j, abs=1e-15)
    assert stieltjes_transform(DELTA0, 2j) == pytest.approx(0.5j, abs=1e-15)
    with pytest.raises(ValueError):
        stieltjes_transform(DELTA0, 0.5)


def test_stieltjes_of_wigner_sample():
    s = sample_spectrum("wigner", 1000, RngState(41))
    assert abs(stieltjes_transform(empirical_measure(s), 2j) - 1j * (math.sqrt(2) - 1)) < 0.02


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=30), st.floats(-10, 10), st.floats(1e-6, 10))
def test_herglotz_property(xs, re, im):
    assert stieltjes_transform(xs, complex(re, im)).imag > 0


def test_inversion_examples():
    g0 = lambda z: -1.0 / z
    assert abs(stieltjes_invert(g0, -1, 1) - 1.0) < 1e-3
    assert abs(stieltjes_invert(g0, 1, 2)) < 1e-3
    assert abs(stieltjes_invert(g0, -1, 1, eta_schedule=[1e-4]) - 1.0) < 1e-3
    target = 1 / 3 + math.sqrt(3) / (2 * math.pi)
    assert abs(stieltjes_invert(semicircle_stieltjes, -1, 1) - target) < 1e-3
    est, etas, vals = stieltjes_invert(semicircle_stieltjes, -1, 1, full_output=True)
    assert etas.tolist() == [1e-2, 1e-3, 1e-4] and len(vals) == 3


@pytest.mark.parametrize("schedule", [[1e-3, 1e-2], [1e-2, 1e-2], [], [1e-2, -1e-3]])
def test_inversion_rejects_bad_schedule(schedule):
    with pytest.raises(ValueError):
        stieltjes_invert(semicircle_stieltjes, -1, 1, eta_schedule=schedule)


def test_inversion_partition_sums_to_one():
    xs = np.array([-2.31, -1.47, -0.52, -0.05, 0.33, 0.81, 1.26, 1.94, 2.2, 0.6])
    mu = empirical_measure(xs)
    g = lambda z: stieltjes_transform(mu, z)
    cuts = [-3.0, -1.0, 0.1, 1.1, 3.0]
    total = sum(stieltjes_invert(g, a, b) for a, b in zip(cuts, cuts[1:]))
    assert abs(total - 1.0) < 2e-3


def test_variance_experiment_shapes_and_errors():
    spec = EnsembleSpec("wigner", 50)
    scan = moment_variance_experiment(spec, 0, [20, 40], 30, RngState(42))
    assert scan.variances == (0.0, 0.0) and scan.means == pytest.approx((1.0, 1.0), abs=1e-15)
    with pytest.raises(ValueError):
        moment_variance_experiment(spec, 2, [20], 30, RngState(42))
    with pytest.raises(ValueError):
        moment_variance_experiment(spec, 2, [20, 40], 10, RngState(42))


def test_fourth_moment_means_approach_catalan():
    scan = moment_variance_experiment(EnsembleSpec("wigner", 50), 4, [25, 100, 400], 30, RngState(43))
    dev = [abs(m - 2.0) for m in scan.means]
    assert dev[-1] < 0.02
    assert dev[0] > dev[-1]


def test_self_consistency():
    assert stieltjes_residual(semicircle_stieltjes(2j), 2j) < 1e-12
    spec = EnsembleSpec("wigner", 100)
    res = [self_consistency_residual(monte_carlo_spectra(spec, 50, RngState(44), n), 2j) for n in (100, 200, 400)]
    assert res[-1] < 0.02
    assert res[0] > res[1] > res[2]
    with pytest.raises(ValueError):
        self_consistency_residual([], 2j)


def test_odd_moments_vanish_on_average():
    vals = np.array([measure_moment(s, 3) for s in monte_carlo_spectra(EnsembleSpec("wigner", 100), 40, RngState(45))])
    assert abs(vals.mean()) < 3 * vals.std(ddof=1) / math.sqrt(vals.size)


def test_largest_eigenvalue_rescaling():
    n = 64
    s = SpectralSample(np.append(np.linspace(-10, 10, n - 1), 2 * math.sqrt(n)), Convention.UNIT_ENTRIES, 2.0)
    assert largest_eigenvalue_rescaled(s) == 0.0
    with pytest.raises(ValueError):
        largest_eigenvalue_rescaled(SpectralSample([0.0, 1.0], Convention.ONE_OVER_SQRT_N, 1.0))


def test_spacings_of_quantile_spectrum_are_equal():
    sp = bulk_spacings(_semicircle_quantiles(500), window=0.8)
    assert np.max(np.abs(sp - 1.0)) < 1e-9


def test_gue_spacings():
    sp = bulk_spacings(sample_spectrum("gue", 1000, RngState(46)))
    assert abs(sp.mean() - 1.0) < 0.05
    assert np.mean(sp < 0.1) < 0.05


def test_spacing_window_errors():
    with pytest.raises(ValueError):
        bulk_spacings([0.0, 1.9], window=0.1)
    with pytest.raises(ValueError):
        bulk_spacings([0.0, 0.1], window=0.0)


def test_histogram_cases():
    h = histogram([0.5], 4, range=(0, 1))
    assert h.counts.tolist() == [0, 0, 1, 0]
    h = histogram([0.1, 0.9], 2, range=(0, 1))
    assert h.counts.tolist() == [1, 1]
    x = RngState(47).generator().standard_normal(1000)
    h = histogram(x, 37, density=True)
    assert h.counts.sum() == x.size
    assert abs(np.sum(h.values * np.diff(h.edges)) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        histogram([0.5], 3, range=(1.0, 1.0))
    with pytest.raises(ValueError):
        histogram([], 3)


def test_ks_distance():
    assert ks_distance([0.0], lambda x: np.where(x >= 0, 0.5, 0.0)) == 0.5
    x = _semicircle_quantiles(200)
    assert ks_distance(x, semicircle_cdf) == pytest.approx(0.5 / 200, abs=1e-12)
