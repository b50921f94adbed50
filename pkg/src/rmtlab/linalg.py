"""Dense symmetric/Hermitian eigenvalues, LU, and the resolvent.

The eigensolver is Householder tridiagonalisation followed by implicit-shift
QL (eigenvalues only).  Hermitian input is handled through the real
``[[Re, -Im], [Im, Re]]`` embedding, whose spectrum is that of ``H`` with
every eigenvalue doubled.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._kernels import ConvergenceError

__all__ = [
    "ConvergenceError",
    "Convention",
    "HermitianMatrix",
    "SpectralSample",
    "SymmetricMatrix",
    "TridiagonalSymmetric",
    "hermitian_eigenvalues",
    "log_abs_det",
    "lu_factor",
    "lu_solve",
    "det",
    "principal_submatrix",
    "resolvent",
    "symmetric_eigenvalues",
    "tridiagonal_eigenvalues",
]


class Convention(enum.Enum):
    """Normalisation of a spectrum.

    UNIT_ENTRIES     entries of variance one; GUE edge at 2*sqrt(N)
    ONE_OVER_SQRT_N  Wigner scaling; support [-2, 2]
    HALF_WEIGHT      UNIT_ENTRIES divided by sqrt(2); edge at sqrt(2N)
    """

    UNIT_ENTRIES = "unit_entries"
    ONE_OVER_SQRT_N = "one_over_sqrt_n"
    HALF_WEIGHT = "half_weight"

    def to_wigner_scale(self, n: int) -> float:
        """Factor mapping eigenvalues of this convention onto [-2, 2]."""
        if self is Convention.ONE_OVER_SQRT_N:
            return 1.0
        if self is Convention.UNIT_ENTRIES:
            return 1.0 / np.sqrt(n)
        return np.sqrt(2.0 / n)


def _finite_square(entries, dtype) -> np.ndarray:
    a = np.array(entries, dtype=dtype)
    if a.ndim == 0 and a.size == 1:
        a = a.reshape(1, 1)
    if a.size == 0:
        return a.reshape(0, 0)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    return a


@dataclass(frozen=True)
class SymmetricMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = _finite_square(self.entries, np.float64)
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric; use SymmetricMatrix.symmetrize")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def symmetrize(cls, entries) -> "SymmetricMatrix":
        a = _finite_square(entries, np.float64)
        return cls(0.5 * (a + a.T))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = _finite_square(self.entries, np.complex128)
        if not np.array_equal(a, a.conj().T):
            raise ValueError("matrix is not exactly Hermitian")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def real_embedding(self) -> np.ndarray:
        re, im = self.entries.real, self.entries.imag
        return np.block([[re, -im], [im, re]])


@dataclass(frozen=True)
class TridiagonalSymmetric:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=np.float64).ravel()
        e = np.array(self.offdiag, dtype=np.float64).ravel()
        if d.size == 0 and e.size:
            raise ValueError("empty diagonal with nonempty off-diagonal")
        if d.size and e.size != d.size - 1:
            raise ValueError(f"off-diagonal must have length {d.size - 1}, got {e.size}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("tridiagonal entries contain NaN or Inf")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class SpectralSample:
    eigenvalues: np.ndarray
    convention: Convention = Convention.UNIT_ENTRIES
    beta: float = 2.0
    n: int = field(default=-1)

    def __post_init__(self):
        ev = np.array(self.eigenvalues, dtype=np.float64).ravel()
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        if self.n == -1:
            object.__setattr__(self, "n", ev.size)
        elif self.n != ev.size:
            raise ValueError(f"n={self.n} does not match {ev.size} eigenvalues")
        object.__setattr__(self, "convention", Convention(self.convention))


def _as_symmetric_array(a) -> np.ndarray:
    if isinstance(a, SymmetricMatrix):
        return a.entries
    return SymmetricMatrix(a).entries


def _tridiagonal_solve(d: np.ndarray, e: np.ndarray) -> np.ndarray:
    n = d.size
    if n == 0:
        return np.zeros(0)
    padded = np.zeros(n)
    padded[: n - 1] = e[: n - 1]
    ev, status = _kernels.tql(np.ascontiguousarray(d, dtype=np.float64), padded, 30 * n)
    if status < 0:
        raise ConvergenceError(f"QL iteration did not converge within {30 * n} sweeps")
    return np.sort(ev)


def symmetric_eigenvalues(a) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending."""
    arr = np.ascontiguousarray(_as_symmetric_array(a), dtype=np.float64)
    if arr.shape[0] == 0:
        return np.zeros(0)
    d, e = _kernels.householder_tridiagonal(arr)
    return _tridiagonal_solve(d, e)


def hermitian_eigenvalues(h) -> np.ndarray:
    """All eigenvalues of a complex Hermitian matrix, ascending."""
    if not isinstance(h, HermitianMatrix):
        h = HermitianMatrix(h)
    n = h.n
    if n == 0:
        return np.zeros(0)
    doubled = symmetric_eigenvalues(h.real_embedding())
    lo, hi = doubled[0::2], doubled[1::2]
    scale = max(1.0, float(np.abs(doubled).max()))
    tol = 1e3 * n * _kernels.EPS * scale
    gap = np.abs(hi - lo).max()
    if gap > max(tol, 1e-8 * scale):
        raise RuntimeError(f"embedded eigenvalues failed to pair (max gap {gap:.3e})")
    return 0.5 * (lo + hi)


def tridiagonal_eigenvalues(t: TridiagonalSymmetric) -> np.ndarray:
    if not isinstance(t, TridiagonalSymmetric):
        raise TypeError("expected a TridiagonalSymmetric")
    return _tridiagonal_solve(t.diag, t.offdiag)


def lu_factor(a):
    """Partial-pivot LU.  Returns (packed LU, row permutation, permutation sign)."""
    arr = np.ascontiguousarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("LU needs a square matrix")
    if not np.iscomplexobj(arr):
        arr = arr.astype(np.float64)
    return _kernels.lu(arr)


def lu_solve(lu_piv, b) -> np.ndarray:
    lu, piv, _ = lu_piv
    b = np.asarray(b)
    x = b[piv].astype(np.result_type(lu, b), copy=True)
    n = lu.shape[0]
    for i in range(n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        if lu[i, i] == 0:
            raise np.linalg.LinAlgError("singular matrix")
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def log_abs_det(a) -> tuple[complex | float, float]:
    """(sign, log|det|) accumulated from the LU diagonal."""
    arr = np.asarray(a)
    if arr.shape[0] == 0:
        return 1.0, 0.0
    lu, _, sign = lu_factor(arr)
    diag = np.diag(lu)
    if np.any(diag == 0):
        return 0.0, -np.inf
    logabs = float(np.sum(np.log(np.abs(diag))))
    phase = sign * np.prod(diag / np.abs(diag))
    if not np.iscomplexobj(diag):
        phase = float(np.real(phase))
    return phase, logabs


def det(a):
    sign, logabs = log_abs_det(a)
    return sign * np.exp(logabs)


def resolvent(a, z: complex) -> np.ndarray:
    """G(z) = (A - z)^{-1} for Im z != 0."""
    arr = _as_symmetric_array(a)
    z = complex(z)
    if z.imag == 0.0:
        raise ValueError("resolvent requires Im z != 0")
    n = arr.shape[0]
    shifted = arr.astype(np.complex128) - z * np.eye(n)
    return lu_solve(lu_factor(shifted), np.eye(n, dtype=np.complex128))


def principal_submatrix(a, i: int) -> SymmetricMatrix:
    arr = _as_symmetric_array(a)
    n = arr.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range for dimension {n}")
    keep = np.delete(np.arange(n), i)
    return SymmetricMatrix(arr[np.ix_(keep, keep)])
