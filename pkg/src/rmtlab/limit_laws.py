"""Closed-form semicircle and Marchenko-Pastur laws."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moments import catalan

__all__ = [
    "MarchenkoPasturLaw",
    "SemicircleLaw",
    "mp_atom",
    "mp_cdf",
    "mp_density",
    "mp_support",
    "semicircle_cdf",
    "semicircle_density",
    "semicircle_moment",
    "semicircle_stieltjes",
]


@dataclass(frozen=True)
class SemicircleLaw:
    lo: float = -2.0
    hi: float = 2.0

    def density(self, x):
        return semicircle_density(x)

    def cdf(self, x):
        return semicircle_cdf(x)


@dataclass(frozen=True)
class MarchenkoPasturLaw:
    """Limit of (1/n) X^T X with aspect ratio lam = m / n."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"aspect ratio must be positive, got {self.lam!r}")

    @property
    def a(self) -> float:
        return (1.0 - math.sqrt(self.lam)) ** 2

    @property
    def b(self) -> float:
        return (1.0 + math.sqrt(self.lam)) ** 2

    def density(self, x):
        return mp_density(x, self)

    def cdf(self, x):
        return mp_cdf(x, self)


def semicircle_density(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.sqrt(np.clip(4.0 - x * x, 0.0, None)) / (2.0 * math.pi)
    return out if out.ndim else float(out)


def semicircle_moment(k: int) -> float:
    if k < 0:
        raise ValueError("moment order must be non-negative")
    if k % 2:
        return 0.0
    return float(catalan(k // 2))


def semicircle_cdf(x):
    x = np.asarray(x, dtype=np.float64)
    xc = np.clip(x, -2.0, 2.0)
    out = 0.5 + xc * np.sqrt(4.0 - xc * xc) / (4.0 * math.pi) + np.arcsin(xc / 2.0) / math.pi
    out = np.where(x <= -2.0, 0.0, np.where(x >= 2.0, 1.0, out))
    return out if out.ndim else float(out)


def semicircle_stieltjes(z):
    """Root of s^2 + z s + 1 = 0 on the Herglotz branch (Im s has the sign of Im z)."""
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z.imag == 0):
        raise ValueError("Stieltjes transform needs Im z != 0")
    root = np.sqrt(z * z - 4.0)
    s1 = 0.5 * (-z + root)
    s2 = 0.5 * (-z - root)
    out = np.where(s1.imag * z.imag > 0, s1, s2)
    return out if out.ndim else complex(out)


def mp_support(law: MarchenkoPasturLaw) -> tuple[float, float]:
    return law.a, law.b


def mp_atom(law: MarchenkoPasturLaw) -> float:
    return max(0.0, 1.0 - 1.0 / law.lam)


def mp_density(x, law: MarchenkoPasturLaw):
    """Continuous part sqrt((b-x)(x-a)) / (2 pi lam x) on [a, b]."""
    x = np.asarray(x, dtype=np.float64)
    a, b = law.a, law.b
    inside = (x > a) & (x < b)
    xs = np.where(inside, x, 1.0)
    out = np.where(inside, np.sqrt(np.clip((b - xs) * (xs - a), 0.0, None)) / (2.0 * math.pi * law.lam * xs), 0.0)
    return out if out.ndim else float(out)


def _mp_continuous_cdf(x, law):
    a, b = law.a, law.b
    xc = np.clip(x, a, b)
    r = np.sqrt(np.clip((b - xc) * (xc - a), 0.0, None))
    u = np.clip((2.0 * xc - a - b) / (b - a), -1.0, 1.0)
    part = r + 0.5 * (a + b) * (np.arcsin(u) + 0.5 * math.pi)
    if a > 0:
        rt = math.sqrt(a * b)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.clip(((a + b) * xc - 2.0 * a * b) / ((b - a) * xc), -1.0, 1.0)
        part = part - rt * (np.arcsin(v) + 0.5 * math.pi)
    return part / (2.0 * math.pi * law.lam)


def mp_cdf(x, law: MarchenkoPasturLaw):
    x = np.asarray(x, dtype=np.float64)
    cont = np.where(x <= law.a, 0.0, np.where(x >= law.b, 1.0 - mp_atom(law), _mp_continuous_cdf(x, law)))
    out = cont + np.where(x >= 0.0, mp_atom(law), 0.0)
    return out if out.ndim else float(out)
