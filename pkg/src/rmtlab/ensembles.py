"""Seedable samplers for the classical matrix ensembles."""

from __future__ import annotations

import enum
import math

import numpy as np

from .linalg import (
    Convention,
    HermitianMatrix,
    SpectralSample,
    SymmetricMatrix,
    TridiagonalSymmetric,
    hermitian_eigenvalues,
    symmetric_eigenvalues,
    tridiagonal_eigenvalues,
)
from .rng import RngLike, as_generator, chi, normals, uniforms

__all__ = [
    "EntryDistribution",
    "sample_beta_tridiagonal",
    "sample_goe",
    "sample_gue",
    "sample_wigner",
    "sample_wishart",
    "sample_spectrum",
]


class EntryDistribution(enum.Enum):
    """Centred, unit-variance entry laws."""

    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    UNIFORM = "uniform"

    def draw(self, gen: np.random.Generator, size) -> np.ndarray:
        if self is EntryDistribution.GAUSSIAN:
            return normals(gen, size)
        u = uniforms(gen, size)
        if self is EntryDistribution.RADEMACHER:
            return np.where(u <= 0.5, -1.0, 1.0)
        return math.sqrt(3.0) * (2.0 * u - 1.0)

    def moment(self, p: int) -> float:
        """E Z^p."""
        if p % 2:
            return 0.0
        if self is EntryDistribution.GAUSSIAN:
            return float(math.prod(range(p - 1, 0, -2))) if p else 1.0
        if self is EntryDistribution.RADEMACHER:
            return 1.0
        return 3.0 ** (p / 2) / (p + 1)


def _check_dim(n: int, name: str = "n") -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def _symmetric_from_upper(n: int, upper: np.ndarray) -> np.ndarray:
    a = np.zeros((n, n))
    iu = np.triu_indices(n)
    a[iu] = upper
    a.T[iu] = upper
    return a


def sample_wigner(n: int, dist: EntryDistribution = EntryDistribution.GAUSSIAN, rng: RngLike = 0) -> SymmetricMatrix:
    """X_ij = Z_ij / sqrt(n) with Z iid on i <= j (convention ONE_OVER_SQRT_N)."""
    n = _check_dim(n)
    gen = as_generator(rng)
    z = EntryDistribution(dist).draw(gen, n * (n + 1) // 2)
    return SymmetricMatrix(_symmetric_from_upper(n, z / math.sqrt(n)))


def sample_goe(n: int, rng: RngLike = 0) -> SymmetricMatrix:
    """Diagonal N(0, 2), off-diagonal N(0, 1) (convention UNIT_ENTRIES)."""
    n = _check_dim(n)
    gen = as_generator(rng)
    a = _symmetric_from_upper(n, normals(gen, n * (n + 1) // 2))
    a[np.diag_indices(n)] *= math.sqrt(2.0)
    return SymmetricMatrix(a)


def sample_gue(n: int, rng: RngLike = 0) -> HermitianMatrix:
    """Diagonal N(0, 1) real, off-diagonal (xi + i eta)/sqrt(2) (convention UNIT_ENTRIES)."""
    n = _check_dim(n)
    gen = as_generator(rng)
    diag = normals(gen, n)
    iu = np.triu_indices(n, 1)
    off = normals(gen, (2, iu[0].size))
    upper = (off[0] + 1j * off[1]) / math.sqrt(2.0)
    h = np.zeros((n, n), dtype=np.complex128)
    h[iu] = upper
    h.T[iu] = upper.conj()
    h[np.diag_indices(n)] = diag
    return HermitianMatrix(h)


def sample_wishart(n: int, m: int, rng: RngLike = 0, dist: EntryDistribution = EntryDistribution.GAUSSIAN) -> SymmetricMatrix:
    """(1/n) X^T X for an n x m matrix X of iid unit-variance entries; m x m result."""
    n = _check_dim(n)
    m = _check_dim(m, "m")
    gen = as_generator(rng)
    x = EntryDistribution(dist).draw(gen, (n, m))
    w = (x.T @ x) / n
    return SymmetricMatrix.symmetrize(w)


def sample_beta_tridiagonal(n: int, beta: float, rng: RngLike = 0) -> TridiagonalSymmetric:
    """Tridiagonal beta-Hermite model scaled to the density exp(-beta/4 sum x^2)."""
    n = _check_dim(n)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    gen = as_generator(rng)
    s = math.sqrt(2.0 / beta)
    diag = normals(gen, n) * s
    dof = beta * np.arange(n - 1, 0, -1, dtype=np.float64)
    off = chi(gen, dof) / math.sqrt(2.0) * s if n > 1 else np.zeros(0)
    return TridiagonalSymmetric(diag, off)


def sample_spectrum(kind: str, n: int, rng: RngLike = 0, *, m: int | None = None, beta: float | None = None,
                    dist: EntryDistribution = EntryDistribution.GAUSSIAN) -> SpectralSample:
    """Draw one matrix of the named ensemble and return its sorted spectrum."""
    kind = kind.lower()
    if kind == "wigner":
        ev = symmetric_eigenvalues(sample_wigner(n, dist, rng))
        return SpectralSample(ev, Convention.ONE_OVER_SQRT_N, 1.0)
    if kind == "goe":
        return SpectralSample(symmetric_eigenvalues(sample_goe(n, rng)), Convention.UNIT_ENTRIES, 1.0)
    if kind == "gue":
        return SpectralSample(hermitian_eigenvalues(sample_gue(n, rng)), Convention.UNIT_ENTRIES, 2.0)
    if kind == "wishart":
        if m is None:
            raise ValueError("wishart needs m")
        # Wishart spectra carry no Gaussian-ensemble convention; tagged as-is.
        return SpectralSample(symmetric_eigenvalues(sample_wishart(n, m, rng, dist)), Convention.ONE_OVER_SQRT_N, 1.0)
    if kind == "beta":
        if beta is None:
            raise ValueError("beta ensemble needs beta")
        ev = tridiagonal_eigenvalues(sample_beta_tridiagonal(n, beta, rng))
        return SpectralSample(ev, Convention.UNIT_ENTRIES, float(beta))
    raise ValueError(f"unknown ensemble {kind!r}")
