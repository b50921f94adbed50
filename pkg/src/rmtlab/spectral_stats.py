"""Empirical spectral measures and the statistics built on them."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .ensembles import EntryDistribution, sample_spectrum
from .limit_laws import semicircle_cdf
from .linalg import Convention, SpectralSample
from .rng import RngState

__all__ = [
    "EmpiricalMeasure",
    "EnsembleSpec",
    "Histogram",
    "VarianceScan",
    "bulk_spacings",
    "empirical_measure",
    "histogram",
    "ks_distance",
    "largest_eigenvalue_rescaled",
    "measure_moment",
    "moment_variance_experiment",
    "monte_carlo_spectra",
    "self_consistency_residual",
    "stieltjes_invert",
    "stieltjes_residual",
    "stieltjes_transform",
]

DEFAULT_ETAS = (1e-2, 1e-3, 1e-4)
PANELS_PER_UNIT = 2048
NODES_PER_ETA = 32


@dataclass(frozen=True)
class EmpiricalMeasure:
    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.locations, dtype=np.float64).ravel()
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if x.size == 0 or x.size != w.size:
            raise ValueError("measure needs matching, nonempty locations and weights")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to one")
        object.__setattr__(self, "locations", x)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    density: bool = False

    @property
    def values(self) -> np.ndarray:
        if not self.density:
            return self.counts.astype(np.float64)
        return self.counts / (self.counts.sum() * np.diff(self.edges))


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    n: int
    m: int | None = None
    beta: float | None = None
    entry_law: EntryDistribution = EntryDistribution.GAUSSIAN

    def sample(self, rng: RngState, n: int | None = None) -> SpectralSample:
        return sample_spectrum(self.kind, self.n if n is None else n, rng, m=self.m, beta=self.beta,
                               dist=self.entry_law)


def _eigenvalues(s) -> np.ndarray:
    if isinstance(s, SpectralSample):
        return s.eigenvalues
    return np.asarray(s, dtype=np.float64).ravel()


def empirical_measure(s) -> EmpiricalMeasure:
    # atoms are stored sorted so every statistic depends on the set alone
    ev = np.sort(_eigenvalues(s))
    if ev.size == 0:
        raise ValueError("empirical measure of an empty sample")
    return EmpiricalMeasure(ev, np.full(ev.size, 1.0 / ev.size))


def _as_measure(mu) -> EmpiricalMeasure:
    return mu if isinstance(mu, EmpiricalMeasure) else empirical_measure(mu)


def measure_moment(mu, k: int) -> float:
    if k < 0:
        raise ValueError("moment order must be non-negative")
    mu = _as_measure(mu)
    return float(np.sum(mu.weights * mu.locations ** k))


def stieltjes_transform(mu, z):
    mu = _as_measure(mu)
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z.imag == 0):
        raise ValueError("Stieltjes transform needs Im z != 0")
    flat = z.ravel()
    vals = np.empty(flat.size, dtype=np.complex128)
    step = max(1, (1 << 22) // mu.locations.size)
    for start in range(0, flat.size, step):
        zz = flat[start:start + step]
        vals[start:start + step] = (mu.weights / (mu.locations - zz[:, None])).sum(axis=1)
    vals = vals.reshape(z.shape)
    return vals if vals.ndim else complex(vals)


def _simpson(f: np.ndarray, h: float) -> float:
    return h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())


def stieltjes_invert(g: Callable, a: float, b: float, eta_schedule: Sequence[float] = DEFAULT_ETAS,
                     full_output: bool = False):
    """Mass of [a, b] from boundary values of a Stieltjes transform.

    For each eta the integral of Im g(x + i eta) / pi over [a, b] is taken by
    composite Simpson; the values are extrapolated to eta = 0 by a
    least-squares line in eta.  With ``full_output`` the etas and per-eta
    integrals are returned alongside the estimate.
    """
    if not a < b:
        raise ValueError("need a < b")
    etas = np.asarray(eta_schedule, dtype=np.float64)
    if etas.size == 0 or np.any(etas <= 0) or np.any(np.diff(etas) >= 0):
        raise ValueError("eta schedule must be positive and strictly decreasing")
    values = []
    for eta in etas:
        per_unit = max(PANELS_PER_UNIT, math.ceil(NODES_PER_ETA / eta))
        panels = max(1, math.ceil(per_unit * (b - a)))
        x = np.linspace(a, b, 2 * panels + 1)
        f = np.imag(g(x + 1j * eta)) / math.pi
        values.append(_simpson(f, (b - a) / (2 * panels)))
    values = np.array(values)
    if etas.size == 1:
        estimate = float(values[0])
    else:
        slope, intercept = np.polyfit(etas, values, 1)
        estimate = float(intercept)
    if full_output:
        return estimate, etas, values
    return estimate


def stieltjes_residual(s, z) -> float:
    """|s + 1/z + s^2 / z|: defect in the semicircle self-consistency equation."""
    z = complex(z)
    return abs(s + 1.0 / z + s * s / z)


def _wigner_scaled(s) -> np.ndarray:
    if isinstance(s, SpectralSample):
        return s.eigenvalues * s.convention.to_wigner_scale(s.n)
    return np.asarray(s, dtype=np.float64)


def self_consistency_residual(samples: Iterable, z) -> float:
    """Residual of the averaged Stieltjes transform over a Monte-Carlo set.

    Spectra are mapped onto the [-2, 2] scale using their convention tag;
    bare arrays are taken as already scaled.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("need Im z > 0")
    values = [stieltjes_transform(empirical_measure(_wigner_scaled(s)), z) for s in samples]
    if not values:
        raise ValueError("empty sample set")
    return stieltjes_residual(complex(np.mean(values)), z)


def monte_carlo_spectra(spec: EnsembleSpec, reps: int, rng: RngState, n: int | None = None) -> list[SpectralSample]:
    """One spectrum per repetition, each on its own child stream."""
    size = spec.n if n is None else n
    return [spec.sample(rng.child(size, rep), size) for rep in range(reps)]


@dataclass(frozen=True)
class VarianceScan:
    k: int
    sizes: tuple[int, ...]
    means: tuple[float, ...]
    variances: tuple[float, ...]
    reps: int
    slope: float


def _loglog_slope(sizes, variances) -> float:
    v = np.asarray(variances, dtype=np.float64)
    if np.any(v <= 0):
        return float("nan")
    slope, _ = np.polyfit(np.log(np.asarray(sizes, dtype=np.float64)), np.log(v), 1)
    return float(slope)


def moment_variance_experiment(spec: EnsembleSpec, k: int, sizes: Sequence[int], reps: int,
                               rng: RngState) -> VarianceScan:
    """Mean and variance of <L_N, x^k> per size, plus the log-log slope of the variance."""
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) < 2:
        raise ValueError("need at least two sizes to fit a slope")
    if reps < 30:
        raise ValueError("need at least 30 repetitions")
    means, variances = [], []
    for size in sizes:
        vals = np.array([measure_moment(_wigner_scaled(s), k) for s in monte_carlo_spectra(spec, reps, rng, size)])
        means.append(float(vals.mean()))
        variances.append(float(vals.var(ddof=1)))
    return VarianceScan(k, sizes, tuple(means), tuple(variances), reps, _loglog_slope(sizes, variances))


def largest_eigenvalue_rescaled(s: SpectralSample) -> float:
    """(lambda_max - 2 sqrt(N)) N^{1/6} for a UNIT_ENTRIES spectrum."""
    if not isinstance(s, SpectralSample) or s.convention is not Convention.UNIT_ENTRIES:
        raise ValueError("edge rescaling requires a UNIT_ENTRIES spectral sample")
    n = s.n
    return float((s.eigenvalues[-1] - 2.0 * math.sqrt(n)) * n ** (1.0 / 6.0))


def bulk_spacings(s, window: float = 0.5) -> np.ndarray:
    """Unfolded nearest-neighbour spacings from the central part of the spectrum.

    Eigenvalues are mapped to the [-2, 2] scale and unfolded through the
    semicircle distribution function, u = N F(x); only points with
    |x| < 2 * window are kept.
    """
    if not 0 < window <= 1:
        raise ValueError("window must lie in (0, 1]")
    x = np.sort(_wigner_scaled(s))
    n = x.size
    keep = x[np.abs(x) < 2.0 * window]
    if keep.size < 2:
        raise ValueError("window holds fewer than two eigenvalues")
    return np.diff(n * semicircle_cdf(keep))


def histogram(s, binning=50, range=None, density: bool = False) -> Histogram:
    x = _eigenvalues(s)
    if x.size == 0:
        raise ValueError("histogram of an empty sample")
    if range is not None:
        lo, hi = range
        if not hi > lo:
            raise ValueError("histogram range has zero width")
    if np.ndim(binning):
        edges = np.asarray(binning, dtype=np.float64)
        if edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must be strictly ascending")
    elif int(binning) < 1:
        raise ValueError("need at least one bin")
    counts, edges = np.histogram(x, bins=binning, range=range)
    if counts.sum() != x.size:
        raise ValueError("sample falls outside the requested bins")
    return Histogram(edges, counts, density)


def ks_distance(samples, cdf: Callable) -> float:
    """sup |F_emp - F| evaluated at the sample points."""
    x = np.sort(np.asarray(samples, dtype=np.float64).ravel())
    n = x.size
    f = np.asarray(cdf(x), dtype=np.float64)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
