"""Euler-Maruyama integration of the Dyson eigenvalue SDE

    d lambda_i = dB_i / sqrt(N) + (-beta/4 lambda_i + beta/(2N) sum_{j != i} 1/(lambda_i - lambda_j)) dt

and the exact Ornstein-Uhlenbeck entry process.  At equilibrium
lambda * sqrt(N) is distributed like a UNIT_ENTRIES Gaussian-ensemble spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ensembles import sample_beta_tridiagonal
from .linalg import SymmetricMatrix, tridiagonal_eigenvalues
from .rng import RngLike, as_generator, normals

__all__ = [
    "DysonState",
    "DysonTrajectory",
    "StepFailureError",
    "dyson_simulate",
    "dyson_step",
    "initial_state",
    "ou_entry_process_step",
]

MAX_HALVINGS = 20
BLOCK_ROWS = 1024
PERTURBATION = 1e-6


class StepFailureError(RuntimeError):
    def __init__(self, time: float, min_gap: float):
        super().__init__(f"ordering could not be kept after {MAX_HALVINGS} halvings at t={time:.6g} "
                         f"(min gap {min_gap:.3e})")
        self.time = time
        self.min_gap = min_gap


@dataclass(frozen=True)
class DysonState:
    time: float
    lambdas: np.ndarray
    beta: float

    def __post_init__(self):
        lam = np.array(self.lambdas, dtype=np.float64).ravel()
        if lam.size == 0 or not np.all(np.isfinite(lam)):
            raise ValueError("need a nonempty finite configuration")
        if np.any(np.diff(lam) <= 0):
            raise ValueError("eigenvalues must be strictly ascending")
        if not self.beta > 0 or self.time < 0:
            raise ValueError("need beta > 0 and time >= 0")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "time", float(self.time))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def n(self) -> int:
        return self.lambdas.size


@dataclass(frozen=True)
class DysonTrajectory:
    times: np.ndarray
    snapshots: np.ndarray
    final: DysonState
    steps: int

    def second_moment(self) -> float:
        """<L, x^2> of the final configuration; equals (1/N^2) tr H^2 for the matching UNIT_ENTRIES matrix."""
        lam = self.final.lambdas
        return float(np.mean(lam * lam))


def _advance(lam, xi, dt, t, t_end, beta, noise_scale):
    lam, t, used, status, min_gap = _kernels.dyson_block(
        np.ascontiguousarray(lam, dtype=np.float64), np.ascontiguousarray(xi, dtype=np.float64),
        float(dt), float(t), float(t_end), float(beta), float(noise_scale), MAX_HALVINGS)
    if status < 0:
        raise StepFailureError(t, min_gap)
    return lam, t, int(used)


def dyson_step(state: DysonState, dt: float, rng: RngLike, noise_scale: float = 1.0) -> DysonState:
    """One Euler-Maruyama step; halves dt (reusing the noise draw) while ordering breaks.

    ``noise_scale`` = 0 switches the noise off (pure drift).
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    gen = as_generator(rng)
    xi = normals(gen, (1, state.n))
    lam, t, _ = _advance(state.lambdas, xi, dt, state.time, math.inf, state.beta, noise_scale)
    return DysonState(t, lam, state.beta)


def initial_state(n: int, beta: float, init="zeros-perturbed", rng: RngLike = 0) -> DysonState:
    """Starting configuration: a tiny symmetric grid, an equilibrium draw, or explicit values."""
    if isinstance(init, str):
        if init == "zeros-perturbed":
            lam = PERTURBATION * (np.arange(n) - 0.5 * (n - 1))
        elif init == "sample":
            lam = tridiagonal_eigenvalues(sample_beta_tridiagonal(n, beta, rng)) / math.sqrt(n)
        else:
            raise ValueError(f"unknown initial condition {init!r}")
    else:
        lam = np.sort(np.asarray(init, dtype=np.float64).ravel())
        if lam.size != n:
            raise ValueError(f"initial configuration has {lam.size} points, expected {n}")
    return DysonState(0.0, lam, beta)


def dyson_simulate(n: int, beta: float, t_end: float, dt: float, rng: RngLike, init="zeros-perturbed",
                   snapshot_every: int | None = None, noise_scale: float = 1.0) -> DysonTrajectory:
    """Integrate to ``t_end``, keeping a snapshot every ``snapshot_every`` attempted steps.

    Noise is drawn in fixed blocks from one stream, so the path does not
    depend on the snapshot cadence.  The final state is always recorded.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not dt > 0 or not t_end >= 0:
        raise ValueError("need dt > 0 and t_end >= 0")
    if snapshot_every is not None and snapshot_every < 1:
        raise ValueError("snapshot_every must be positive")
    gen = as_generator(rng)
    state = initial_state(n, beta, init, gen)
    lam, t = state.lambdas.copy(), 0.0
    times, snaps = [0.0], [lam.copy()]
    steps = 0
    cadence = snapshot_every or 0
    while t < t_end:
        block = normals(gen, (BLOCK_ROWS, n))
        row = 0
        while row < BLOCK_ROWS and t < t_end:
            take = BLOCK_ROWS - row
            if cadence:
                take = min(take, cadence - steps % cadence)
            lam, t, used = _advance(lam, block[row:row + take], dt, t, t_end, beta, noise_scale)
            row += used
            steps += used
            if cadence and steps % cadence == 0 and t < t_end:
                times.append(t)
                snaps.append(lam.copy())
    final = DysonState(t, lam, beta)
    if times[-1] != t:
        times.append(t)
        snaps.append(lam.copy())
    return DysonTrajectory(np.array(times), np.array(snaps), final, steps)


def ou_entry_process_step(x, dt: float, theta: float, sigma: float, rng: RngLike) -> SymmetricMatrix:
    """Exact Ornstein-Uhlenbeck transition applied to every entry on and above the diagonal."""
    if not theta > 0:
        raise ValueError("theta must be positive")
    if not dt > 0:
        raise ValueError("dt must be positive")
    arr = x.entries if isinstance(x, SymmetricMatrix) else SymmetricMatrix(x).entries
    n = arr.shape[0]
    decay = math.exp(-theta * dt)
    sd = sigma * math.sqrt(-math.expm1(-2.0 * theta * dt) / (2.0 * theta))
    iu = np.triu_indices(n)
    upper = decay * arr[iu] + sd * normals(as_generator(rng), iu[0].size)
    out = np.zeros((n, n))
    out[iu] = upper
    out.T[iu] = upper
    return SymmetricMatrix(out)
