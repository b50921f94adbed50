"""Reproducible random streams.

An :class:`RngState` is an immutable (seed, stream-path) pair.  It maps to a
counter-based Philox generator whose 128-bit key is derived from the pair, so
identical states always produce identical draws and sibling streams
(``state.child(i)``) never share counters.  Gaussians are produced by
Box-Muller from the raw uniforms rather than by any library sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngState:
    seed: int
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.seed, (int, np.integer)):
            raise TypeError("seed must be an integer")
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        stream = self.stream
        if isinstance(stream, (int, np.integer)):
            stream = (int(stream),)
        object.__setattr__(self, "stream", tuple(int(s) for s in stream))

    def child(self, *keys: int) -> "RngState":
        return RngState(self.seed, self.stream + tuple(int(k) for k in keys))

    def key(self) -> np.ndarray:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.stream)
        return ss.generate_state(2, dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key()))


RngLike = Union[RngState, np.random.Generator, int]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Accept an RngState, a live Generator, or a bare integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngState):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngState(int(rng)).generator()
    raise TypeError(f"cannot build a random stream from {type(rng).__name__}")


def uniforms(gen: np.random.Generator, size) -> np.ndarray:
    """Uniforms on the half-open interval (0, 1]."""
    return 1.0 - gen.random(size)


def normals(gen: np.random.Generator, size) -> np.ndarray:
    shape = (size,) if np.isscalar(size) else tuple(size)
    count = int(np.prod(shape, dtype=np.int64))
    pairs = (count + 1) // 2
    u1 = uniforms(gen, pairs)
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * math.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count].reshape(shape)


def gamma(gen: np.random.Generator, shape_param: np.ndarray) -> np.ndarray:
    """Gamma(a, 1) variates by Marsaglia-Tsang, one per entry of ``shape_param``."""
    a = np.atleast_1d(np.asarray(shape_param, dtype=np.float64))
    if np.any(a <= 0):
        raise ValueError("gamma shape must be positive")
    boost = a < 1.0
    d = np.where(boost, a + 1.0, a) - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty_like(a)
    todo = np.arange(a.size)
    while todo.size:
        x = normals(gen, todo.size)
        u = uniforms(gen, todo.size)
        v = (1.0 + c[todo] * x) ** 3
        with np.errstate(invalid="ignore", divide="ignore"):
            accept = (v > 0) & (np.log(u) < 0.5 * x * x + d[todo] - d[todo] * v + d[todo] * np.log(v))
        out[todo[accept]] = d[todo[accept]] * v[accept]
        todo = todo[~accept]
    if np.any(boost):
        idx = np.flatnonzero(boost)
        out[idx] *= uniforms(gen, idx.size) ** (1.0 / a[idx])
    return out.reshape(np.shape(shape_param))


def chi(gen: np.random.Generator, dof) -> np.ndarray:
    """Chi variates with the given (possibly non-integer) degrees of freedom."""
    return np.sqrt(2.0 * gamma(gen, 0.5 * np.asarray(dof, dtype=np.float64)))
