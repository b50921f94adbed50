"""Hermite polynomials and functions, the Airy function, and the
Christoffel-Darboux, sine and Airy kernels.

Hermite functions here are orthonormal for the weight exp(-x^2):
phi_n(x) = H_n(x) exp(-x^2/2) / (pi^{1/4} 2^{n/2} sqrt(n!)).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np

__all__ = [
    "AIRY_RANGE",
    "AsymptoticComparison",
    "Kernel",
    "airy",
    "airy_kernel",
    "bulk_scaled_cd",
    "cd_kernel",
    "edge_scaled_cd",
    "hermite_bulk_asymptotic",
    "hermite_edge_asymptotic",
    "hermite_function",
    "hermite_functions",
    "hermite_poly",
    "hermite_steepest_descent",
    "sine_kernel",
]

NEAR_DIAGONAL = 1e-6
AIRY_RANGE = (-30.0, 30.0)
AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)


def _out(a):
    return a if np.ndim(a) else float(a)


def hermite_poly(n: int, x):
    """Physicists' H_n by the upward recurrence H_{k+1} = 2x H_k - 2k H_{k-1}.

    Overflows to inf for large n*|x|; use :func:`hermite_function` there.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=np.float64)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n):
            prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return _out(cur)


def hermite_functions(nmax: int, x) -> np.ndarray:
    """Rows phi_0 .. phi_nmax evaluated at x (shape (nmax + 1,) + x.shape).

    The recurrence runs on rescaled values with a running log scale, so
    large-degree values stay finite even where phi_0 underflows.
    """
    if nmax < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((nmax + 1,) + x.shape)
    log_scale = -0.5 * x * x - 0.25 * math.log(math.pi)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    out[0] = np.exp(log_scale)
    for k in range(nmax):
        prev, cur = cur, x * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1)) * prev
        big = np.abs(cur) > 1e150
        if big.any():
            prev = np.where(big, prev * 1e-150, prev)
            cur = np.where(big, cur * 1e-150, cur)
            log_scale = log_scale + np.where(big, 150.0 * math.log(10.0), 0.0)
        with np.errstate(under="ignore", over="ignore"):
            out[k + 1] = cur * np.exp(log_scale)
    return out


def hermite_function(n: int, x):
    return _out(hermite_functions(n, x)[n])


# ---------------------------------------------------------------------------
# Airy function
# ---------------------------------------------------------------------------

def _taylor_step(y, yp, t0, h, terms=60):
    """Advance (y, y') of y'' = t y from t0 by h using the Taylor recurrence."""
    c = [y, yp, 0.5 * t0 * y]
    for j in range(1, terms):
        c.append((t0 * c[j] + c[j - 1]) / ((j + 2) * (j + 1)))
    val = np.zeros_like(y)
    der = np.zeros_like(y)
    for j in range(len(c) - 1, -1, -1):
        val = val * h + c[j]
    for j in range(len(c) - 1, 0, -1):
        der = der * h + j * c[j]
    return val, der


def _airy_maclaurin(t):
    one = np.ones_like(t)
    return _taylor_step(AI0 * one, AIP0 * one, 0.0, t)


def _airy_march(t, start=-2.0, step=0.1):
    # t < start: integrate the oscillatory side from the Maclaurin values at start
    y0, yp0 = _airy_maclaurin(np.array([start]))
    nsteps = np.ceil((start - t) / step).astype(int)
    h = (t - start) / nsteps
    y = np.full(t.shape, y0[0])
    yp = np.full(t.shape, yp0[0])
    pos = np.full(t.shape, start)
    for s in range(int(nsteps.max(initial=0))):
        active = s < nsteps
        ny, nyp = _taylor_step(y[active], yp[active], pos[active], h[active], terms=40)
        y[active], yp[active] = ny, nyp
        pos[active] += h[active]
    return y, yp


def _airy_bessel_k(t):
    # t > 0: Ai = sqrt(t/3)/pi K_{1/3}(zeta), Ai' = -t/(pi sqrt 3) K_{2/3}(zeta)
    zeta = 2.0 / 3.0 * t ** 1.5
    ai = np.empty_like(t)
    aip = np.empty_like(t)
    for i, z in enumerate(zeta):
        h = 0.2 / max(1.0, math.sqrt(z))
        upper = math.acosh(1.0 + 45.0 / z) + 2 * h
        u = np.arange(0.0, upper, h)
        base = np.exp(-z * (np.cosh(u) - 1.0))
        w = np.full(u.size, h)
        w[0] = 0.5 * h
        k13 = np.sum(w * base * np.cosh(u / 3.0)) * math.exp(-z)
        k23 = np.sum(w * base * np.cosh(2.0 * u / 3.0)) * math.exp(-z)
        ai[i] = math.sqrt(t[i] / 3.0) / math.pi * k13
        aip[i] = -t[i] / (math.pi * math.sqrt(3.0)) * k23
    return ai, aip


def airy(t):
    """(Ai(t), Ai'(t)) for t in [-30, 30]."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(~np.isfinite(t)) or np.any(t < AIRY_RANGE[0]) or np.any(t > AIRY_RANGE[1]):
        raise ValueError(f"Airy evaluation supported on {AIRY_RANGE} only")
    flat = t.ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    mid = np.abs(flat) <= 2.0
    left = flat < -2.0
    right = flat > 2.0
    if mid.any():
        ai[mid], aip[mid] = _airy_maclaurin(flat[mid])
    if left.any():
        ai[left], aip[left] = _airy_march(flat[left])
    if right.any():
        ai[right], aip[right] = _airy_bessel_k(flat[right])
    return _out(ai.reshape(t.shape)), _out(aip.reshape(t.shape))


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

class Kernel:
    """Symmetric kernel K(x, y) with an exact diagonal evaluator."""

    def __init__(self, name: str, evaluate: Callable, diagonal: Callable, gram: Callable | None = None):
        self.name = name
        self._evaluate = evaluate
        self._diagonal = diagonal
        self._gram = gram

    def __repr__(self):
        return f"Kernel({self.name!r})"

    def evaluate(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))
        return _out(self._evaluate(x, y))

    __call__ = evaluate

    def diagonal(self, x):
        return _out(self._diagonal(np.asarray(x, dtype=np.float64)))

    def gram(self, nodes) -> np.ndarray:
        """Matrix K(x_i, x_j) on the given nodes, exact on the diagonal."""
        nodes = np.asarray(nodes, dtype=np.float64)
        if self._gram is not None:
            return self._gram(nodes)
        m = self.evaluate(nodes[:, None], nodes[None, :])
        m = 0.5 * (m + m.T)
        m[np.diag_indices(nodes.size)] = self.diagonal(nodes)
        return m


def _cd_parts(n):
    a_n = math.sqrt(n / 2.0)

    def evaluate(x, y):
        px = hermite_functions(n, x)
        py = hermite_functions(n, y)
        summed = np.einsum("k...,k...->...", px[:n], py[:n])
        with np.errstate(divide="ignore", invalid="ignore"):
            cd = a_n * (px[n] * py[n - 1] - px[n - 1] * py[n]) / (x - y)
        return np.where(np.abs(x - y) > NEAR_DIAGONAL, cd, summed)

    def diagonal(x):
        px = hermite_functions(n - 1, x)
        return np.sum(px * px, axis=0)

    def gram(nodes):
        phi = hermite_functions(n - 1, nodes)
        return phi.T @ phi

    return evaluate, diagonal, gram


def cd_kernel(n: int) -> Kernel:
    """K_N(x, y) = sum_{k<N} phi_k(x) phi_k(y), Christoffel-Darboux form off the diagonal."""
    if n < 1:
        raise ValueError("N must be at least 1")
    return Kernel(f"cd[{n}]", *_cd_parts(n))


def sine_kernel() -> Kernel:
    return Kernel("sine", lambda x, y: np.sinc(x - y), lambda x: np.ones_like(x))


def _airy_diag(x):
    ai, aip = airy(x)
    return -x * np.asarray(ai) ** 2 + np.asarray(aip) ** 2


def _airy_eval(x, y):
    ax, apx = (np.asarray(v) for v in airy(x))
    ay, apy = (np.asarray(v) for v in airy(y))
    with np.errstate(divide="ignore", invalid="ignore"):
        off = (ax * apy - ay * apx) / (x - y)
    near = np.abs(x - y) <= NEAR_DIAGONAL
    if np.any(near):
        off = np.where(near, _airy_diag(0.5 * (x + y)), off)
    return off


def _airy_gram(nodes):
    ai, aip = (np.asarray(v) for v in airy(nodes))
    diff = nodes[:, None] - nodes[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        m = (ai[:, None] * aip[None, :] - ai[None, :] * aip[:, None]) / diff
    near = np.abs(diff) <= NEAR_DIAGONAL
    mid = 0.5 * (nodes[:, None] + nodes[None, :])
    m[near] = _airy_diag(mid[near])
    return 0.5 * (m + m.T)


def airy_kernel() -> Kernel:
    return Kernel("airy", _airy_eval, _airy_diag, _airy_gram)


def bulk_scaled_cd(n: int) -> Kernel:
    """(pi / sqrt(2N)) K_N(pi xi / sqrt(2N), pi eta / sqrt(2N))."""
    if n < 2:
        raise ValueError("N must be at least 2")
    base = cd_kernel(n)
    c = math.pi / math.sqrt(2.0 * n)
    return Kernel(
        f"bulk[{n}]",
        lambda x, y: c * base.evaluate(c * x, c * y),
        lambda x: c * base.diagonal(c * x),
        lambda nodes: c * base.gram(c * nodes),
    )


def _edge_map(n):
    center = math.sqrt(2.0 * n)
    width = 1.0 / (math.sqrt(2.0) * n ** (1.0 / 6.0))
    return center, width


def edge_scaled_cd(n: int) -> Kernel:
    """K_N(x, y) / (sqrt 2 N^{1/6}) at x = sqrt(2N) + xi 2^{-1/2} N^{-1/6}."""
    if n < 1:
        raise ValueError("N must be at least 1")
    base = cd_kernel(n)
    center, width = _edge_map(n)
    return Kernel(
        f"edge[{n}]",
        lambda x, y: width * base.evaluate(center + width * x, center + width * y),
        lambda x: width * base.diagonal(center + width * x),
        lambda nodes: width * base.gram(center + width * nodes),
    )


class AsymptoticComparison(NamedTuple):
    approx: float | np.ndarray
    limit: float | np.ndarray
    residual: float | np.ndarray


def hermite_bulk_asymptotic(m: int, xi, parity: str = "even") -> AsymptoticComparison:
    """(-1)^m m^{1/4} phi_{2m(+1)}(pi xi / sqrt(2n)) against cos or sin(pi xi)/sqrt(pi).

    n is the actual degree (2m or 2m + 1), so the argument is pi xi / (2 sqrt m)
    in the even case.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    xi = np.asarray(xi, dtype=np.float64)
    if parity == "even":
        deg = 2 * m
        limit = np.cos(math.pi * xi) / math.sqrt(math.pi)
    elif parity == "odd":
        deg = 2 * m + 1
        limit = np.sin(math.pi * xi) / math.sqrt(math.pi)
    else:
        raise ValueError("parity must be 'even' or 'odd'")
    arg = math.pi * xi / math.sqrt(4.0 * m)
    approx = (-1) ** m * m ** 0.25 * hermite_functions(deg, arg)[deg]
    return AsymptoticComparison(_out(approx), _out(limit), _out(approx - limit))


def hermite_edge_asymptotic(n: int, t, refined: bool = False) -> AsymptoticComparison:
    """phi_n at sqrt(2n) + t / (sqrt 2 n^{1/6}) against 2^{1/4} n^{-1/12} Ai(t).

    With ``refined`` the centre moves to sqrt(2n + 1), which removes the
    O(n^{-1/3}) turning-point offset and leaves an O(n^{-2/3}) error.
    """
    t = np.asarray(t, dtype=np.float64)
    center, width = _edge_map(n)
    if refined:
        center = math.sqrt(2.0 * n + 1.0)
    exact = hermite_functions(n, center + width * t)[n]
    limit = 2.0 ** 0.25 * n ** (-1.0 / 12.0) * np.asarray(airy(t)[0])
    return AsymptoticComparison(_out(exact), _out(limit), _out(exact - limit))


def _saddle_data(n, y):
    theta = np.arccos(y)
    sin_t = np.sin(theta)
    # f(z) = 4yz - 2z^2 - log z; saddle z+ = exp(i theta)/2, f''(z+) = -8i sin(theta) e^{-i theta}
    phase = n * (y * np.sqrt(1.0 - y * y) - theta) + math.pi / 4.0 - theta / 2.0
    log_c = (math.log(2.0 / math.pi) + math.lgamma(n + 1) - 0.5 * n * math.log(2.0 * n) + 0.5 * n
             + n * math.log(2.0) + 0.5 * np.log(math.pi / (4.0 * n * sin_t)))
    return log_c, phase


def hermite_steepest_descent(n: int, y, normalized: bool = False):
    """Two-saddle approximation of H_n(sqrt(2n) y) for |y| < 0.9.

    H_n(sqrt(2n) y) ~ c_n e^{n y^2} cos(n (y sqrt(1 - y^2) - theta_c) + theta_0)
    with theta_c = arccos y, theta_0 = pi/4 - theta_c/2 and c_n from the
    saddle curvature.  With ``normalized`` the same approximation is returned
    for the orthonormal function phi_n(sqrt(2n) y), avoiding overflow.
    """
    y = np.asarray(y, dtype=np.float64)
    if n < 10:
        raise ValueError("steepest-descent form needs n >= 10")
    if np.any(np.abs(y) >= 0.9):
        raise ValueError("|y| >= 0.9 is outside the oscillatory region handled here")
    log_c, phase = _saddle_data(n, y)
    if normalized:
        log_norm = 0.25 * math.log(math.pi) + 0.5 * n * math.log(2.0) + 0.5 * math.lgamma(n + 1)
        return _out(np.exp(log_c - log_norm) * np.cos(phase))
    return _out(np.exp(log_c + n * y * y) * np.cos(phase))
