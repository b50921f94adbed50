"""Joint eigenvalue densities, correlation functions, Fredholm determinants,
gap probabilities and the beta = 2 Tracy-Widom distribution."""

from __future__ import annotations

import functools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import det, log_abs_det, symmetric_eigenvalues
from .orthopoly import Kernel, airy_kernel, cd_kernel, hermite_functions

__all__ = [
    "DegenerateIntervalError",
    "DiscretizedKernel",
    "MehtaCheck",
    "QuadratureRule",
    "TracyWidomTable",
    "TruncationError",
    "correlation_fn",
    "discretize",
    "fredholm_det",
    "fredholm_det_trace_series",
    "fredholm_eigenvalues",
    "gap_probabilities",
    "gauss_legendre",
    "joint_density_unnormalized",
    "tracy_widom_cdf",
    "tracy_widom_table",
    "verify_mehta_reduction",
]

TW_RANGE = (-10.0, 6.0)
TW_LENGTH = 16.0
TW_CUT_TOLERANCE = 1e-14
# cut point beyond which the Airy kernel diagonal is below TW_CUT_TOLERANCE
TW_MIN_CUT = 8.0
SATURATION = 1e-12
SERIES_MAX_TERMS = 20000


class TruncationError(ValueError):
    """The truncated Airy domain leaves too much kernel mass past the cut."""


class DegenerateIntervalError(ValueError):
    """A discretized eigenvalue reached 1, so gap derivatives are undefined."""


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=np.float64)
        w = np.asarray(self.weights, dtype=np.float64)
        if x.shape != w.shape or x.ndim != 1:
            raise ValueError("nodes and weights must be matching vectors")
        if np.any(np.diff(x) <= 0) or np.any(w <= 0):
            raise ValueError("nodes must ascend and weights must be positive")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "interval", (float(self.interval[0]), float(self.interval[1])))

    def integrate(self, f: Callable) -> float:
        return float(np.sum(self.weights * np.asarray(f(self.nodes))))


def gauss_legendre(m: int, lo: float, hi: float) -> QuadratureRule:
    """m-point Gauss-Legendre rule mapped to [lo, hi]; exact for degree 2m - 1."""
    if m < 1:
        raise ValueError("need at least one node")
    if not hi > lo:
        raise ValueError("need lo < hi")
    t, w = np.polynomial.legendre.leggauss(m)
    half = 0.5 * (hi - lo)
    return QuadratureRule(lo + half * (t + 1.0), half * w, (lo, hi))


def _as_kernel(kernel) -> Kernel:
    if isinstance(kernel, Kernel):
        return kernel
    if callable(kernel):
        return Kernel("callable", kernel, lambda x: kernel(x, x))
    raise TypeError("kernel must be a Kernel or a callable K(x, y)")


@dataclass(frozen=True)
class DiscretizedKernel:
    """Nystrom matrix sqrt(w_i w_j) K(x_i, x_j) on a quadrature rule."""

    matrix: np.ndarray
    rule: QuadratureRule
    tag: str

    def eigenvalues(self) -> np.ndarray:
        return symmetric_eigenvalues(self.matrix)

    def check_projection(self, tol: float = 1e-10) -> np.ndarray:
        """Eigenvalues, after asserting they lie in [-tol, 1 + tol]."""
        ev = self.eigenvalues()
        if ev[0] < -tol or ev[-1] > 1.0 + tol:
            raise ValueError(f"{self.tag}: eigenvalues leave [0, 1]: [{ev[0]:.3e}, {ev[-1]:.3e}]")
        return ev


def discretize(kernel, interval: Sequence[float], m: int) -> DiscretizedKernel:
    lo, hi = (float(v) for v in interval)
    k = _as_kernel(kernel)
    rule = gauss_legendre(m, lo, hi)
    g = np.asarray(k.gram(rule.nodes), dtype=np.float64)
    if not np.all(np.isfinite(g)):
        raise ValueError(f"kernel {k.name} is not finite on the quadrature nodes")
    sw = np.sqrt(rule.weights)
    mat = sw[:, None] * g * sw[None, :]
    return DiscretizedKernel(0.5 * (mat + mat.T), rule, k.name)


def _check_nodes(m: int):
    if m < 10:
        raise ValueError("Nystrom discretization needs m >= 10 nodes")


def fredholm_det(kernel, interval: Sequence[float], m: int = 40, t: float = 1.0) -> float:
    """det(I - t K) on L^2(interval) by Gauss-Legendre Nystrom and LU."""
    _check_nodes(m)
    if t == 0:
        return 1.0
    dk = discretize(kernel, interval, m)
    sign, logabs = log_abs_det(np.eye(m) - t * dk.matrix)
    return float(sign * math.exp(logabs)) if sign else 0.0


def fredholm_eigenvalues(kernel, interval: Sequence[float], m: int = 40) -> np.ndarray:
    _check_nodes(m)
    return discretize(kernel, interval, m).eigenvalues()


def fredholm_det_trace_series(kernel, interval: Sequence[float], m: int = 40, t: float = 1.0,
                              terms: int | None = None) -> float:
    """exp(-sum_{j <= terms} t^j tr(M^j) / j), valid while the spectral radius of tM is below 1.

    Traces come from repeated matrix products, independent of the LU route.
    Without ``terms`` the series runs until the bound m r^{j+1} / ((j+1)(1-r))
    on the remainder drops below 1e-16, r being the spectral radius.
    """
    _check_nodes(m)
    if t == 0:
        return 1.0
    dk = discretize(kernel, interval, m)
    tm = t * dk.matrix
    radius = float(np.max(np.abs(dk.eigenvalues()))) * abs(t)
    if radius >= 1.0:
        raise ValueError(f"trace series diverges: spectral radius of tM is {radius:.6g}")
    limit = SERIES_MAX_TERMS if terms is None else int(terms)
    total = 0.0
    power = tm.copy()
    for j in range(1, limit + 1):
        total += np.trace(power) / j
        if terms is None and m * radius ** (j + 1) / ((j + 1) * (1.0 - radius)) < 1e-16:
            break
        power = power @ tm
    else:
        if terms is None:
            raise ValueError(f"trace series needs more than {limit} terms at spectral radius {radius:.6g}")
    return math.exp(-total)


def _elementary_symmetric(r: np.ndarray, m_max: int) -> np.ndarray:
    e = np.zeros(m_max + 1)
    e[0] = 1.0
    for v in r:
        e[1:] = e[1:] + v * e[:-1]
    return e


def gap_probabilities(kernel, interval: Sequence[float], m: int = 40, m_max: int = 5) -> np.ndarray:
    """A_0..A_{m_max}: probability of exactly k points in the interval.

    With Nystrom eigenvalues lam_j, A_k = prod(1 - lam_j) e_k(lam_j / (1 - lam_j)),
    the exact k-th derivative (up to sign and k!) of prod(1 - t lam_j) at t = 1.
    """
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    lo, hi = (float(v) for v in interval)
    if hi < lo:
        raise ValueError("interval endpoints out of order")
    out = np.zeros(m_max + 1)
    if hi == lo:
        out[0] = 1.0
        return out
    _check_nodes(m)
    lam = discretize(kernel, (lo, hi), m).eigenvalues()
    if lam[-1] >= 1.0 - SATURATION:
        raise DegenerateIntervalError(f"eigenvalue {lam[-1]!r} saturates at 1")
    base = float(np.prod(1.0 - lam))
    return base * _elementary_symmetric(lam / (1.0 - lam), m_max)


def joint_density_unnormalized(beta: float, xs, potential: Callable | None = None) -> float:
    """prod_{i<j} |x_i - x_j|^beta exp(-sum V(x_i)), V(x) = beta x^2 / 4 by default."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    x = np.asarray(xs, dtype=np.float64).ravel()
    if not np.all(np.isfinite(x)):
        raise ValueError("points must be finite")
    diff = np.abs(x[:, None] - x[None, :])[np.triu_indices(x.size, 1)]
    if np.any(diff == 0):
        return 0.0
    v = beta * x * x / 4.0 if potential is None else np.asarray(potential(x), dtype=np.float64)
    return math.exp(beta * float(np.sum(np.log(diff))) - float(np.sum(v)))


def correlation_fn(n: int, xs) -> float:
    """R_k(x_1..x_k) = det[K_N(x_i, x_j)] for the Hermite kernel."""
    x = np.asarray(xs, dtype=np.float64).ravel()
    if x.size < 1 or x.size > n:
        raise ValueError(f"need 1 <= k <= N points, got k={x.size}, N={n}")
    if x.size == n:
        # K = Phi^T Phi with Phi square, so det K = det(Phi)^2 without squaring the condition number
        return float(det(hermite_functions(n - 1, x)) ** 2)
    return float(det(cd_kernel(n).gram(x)))


class MehtaCheck(NamedTuple):
    lhs: float
    rhs: float
    residual: float


def verify_mehta_reduction(n: int, points: Sequence[float], nodes: int = 200) -> MehtaCheck:
    """Integrate det[K_N] over the last variable and compare with (r - N + 1) det[K_{N-1} block].

    r = int K_N(x, x) dx is evaluated with the same rule, so the identity is
    checked as stated rather than with r = N substituted.
    """
    fixed = np.asarray(points, dtype=np.float64).ravel()
    if fixed.size != n - 1:
        raise ValueError(f"need N - 1 = {n - 1} fixed points")
    k = cd_kernel(n)
    half = math.sqrt(2.0 * n) + 12.0
    rule = gauss_legendre(nodes, -half, half)
    r = rule.integrate(k.diagonal)
    vals = np.array([det(k.gram(np.append(fixed, y))) for y in rule.nodes])
    lhs = float(np.sum(rule.weights * vals))
    rhs = float((r - n + 1) * (det(k.gram(fixed)) if fixed.size else 1.0))
    return MehtaCheck(lhs, rhs, float(abs(lhs - rhs)))


def _tw_length(s: float, length: float | None) -> float:
    if length is not None:
        return float(length)
    return max(TW_LENGTH, TW_MIN_CUT - s)


def tracy_widom_cdf(s: float, m: int = 60, length: float | None = None) -> float:
    """F_2(s) = det(I - K_Airy) on [s, s + L].

    L defaults to max(16, 8 - s) so the kernel diagonal at the cut stays
    below 1e-14; an explicit ``length`` failing that check raises
    :class:`TruncationError`.
    """
    s = float(s)
    if not TW_RANGE[0] <= s <= TW_RANGE[1]:
        raise ValueError(f"s must lie in {TW_RANGE}")
    ell = _tw_length(s, length)
    cut = s + ell
    if cut > 30.0:
        cut, ell = 30.0, 30.0 - s
    tail = airy_kernel().diagonal(cut)
    if tail >= TW_CUT_TOLERANCE:
        raise TruncationError(f"Airy kernel diagonal {tail:.3e} at cut {cut:g}; increase the length")
    value = fredholm_det(airy_kernel(), (s, cut), m, 1.0)
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class TracyWidomTable:
    s: np.ndarray
    f2: np.ndarray

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = np.interp(x, self.s, self.f2, left=0.0, right=1.0)
        return out if out.ndim else float(out)


@functools.lru_cache(maxsize=8)
def _cached_table(lo: float, hi: float, step: float, m: int) -> TracyWidomTable:
    count = int(round((hi - lo) / step)) + 1
    s = lo + step * np.arange(count)
    f = np.array([tracy_widom_cdf(v, m) for v in s])
    # enforce the monotone envelope against round-off in the far left tail
    f = np.maximum.accumulate(f)
    return TracyWidomTable(s, f)


def tracy_widom_table(lo: float = TW_RANGE[0], hi: float = TW_RANGE[1], step: float = 0.05,
                      m: int = 60) -> TracyWidomTable:
    if not TW_RANGE[0] <= lo < hi <= TW_RANGE[1]:
        raise ValueError(f"table range must lie inside {TW_RANGE}")
    if not step > 0:
        raise ValueError("step must be positive")
    return _cached_table(float(lo), float(hi), float(step), int(m))
