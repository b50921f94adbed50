"""Longest increasing subsequences, Robinson-Schensted-Knuth insertion,
tableau counting and last passage percolation."""

from __future__ import annotations

import bisect
import math
import operator
from fractions import Fraction
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rng import RngLike, as_generator, uniforms

__all__ = [
    "GeneralizedPermutation",
    "Tableau",
    "YoungDiagram",
    "count_perms_by_lds",
    "count_perms_by_lds_hsum",
    "frobenius_young_count",
    "generalized_permutation",
    "hook_length_count",
    "lds_length",
    "lis_length",
    "lpp_grid",
    "partitions",
    "random_permutation",
    "rsk",
    "rsk_generalized",
    "rsk_inverse",
    "sample_geometric_matrix",
]

MAX_CENSUS_N = 10


def _check_permutation(p) -> tuple[int, ...]:
    try:
        seq = tuple(operator.index(v) for v in p)
    except TypeError as exc:
        raise ValueError("permutation must be a sequence of integers") from exc
    if sorted(seq) != list(range(1, len(seq) + 1)):
        raise ValueError("permutation must contain each of 1..n exactly once")
    return seq


def lis_length(p) -> int:
    """Longest strictly increasing subsequence by patience sorting."""
    seq = _check_permutation(p)
    piles: list[int] = []
    for v in seq:
        k = bisect.bisect_left(piles, v)
        if k == len(piles):
            piles.append(v)
        else:
            piles[k] = v
    return len(piles)


def lds_length(p) -> int:
    seq = _check_permutation(p)
    return lis_length([len(seq) + 1 - v for v in seq])


@dataclass(frozen=True)
class YoungDiagram:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(v) for v in self.parts)
        if any(v <= 0 for v in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("a partition needs weakly decreasing positive parts")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "YoungDiagram":
        if not self.parts:
            return self
        return YoungDiagram(tuple(sum(1 for p in self.parts if p > c) for c in range(self.parts[0])))


@dataclass(frozen=True)
class Tableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        if any(len(r) == 0 for r in rows):
            raise ValueError("tableau rows must be nonempty")
        YoungDiagram(tuple(len(r) for r in rows))
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self) -> YoungDiagram:
        return YoungDiagram(tuple(len(r) for r in self.rows))

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def is_semistandard(self) -> bool:
        """Rows weakly increase, columns strictly increase."""
        rows = self.rows
        for r in rows:
            if any(a > b for a, b in zip(r, r[1:])):
                return False
        for upper, lower in zip(rows, rows[1:]):
            if any(lower[c] <= upper[c] for c in range(len(lower))):
                return False
        return True

    def is_standard(self) -> bool:
        entries = sorted(v for r in self.rows for v in r)
        if entries != list(range(1, len(entries) + 1)):
            return False
        return self.is_semistandard() and all(a < b for r in self.rows for a, b in zip(r, r[1:]))


def _insert(rows: list[list[int]], v: int, strict: bool) -> int:
    """Row-insert v; returns the index of the row that grew."""
    find = bisect.bisect_left if strict else bisect.bisect_right
    for i, row in enumerate(rows):
        k = find(row, v)
        if k == len(row):
            row.append(v)
            return i
        row[k], v = v, row[k]
    rows.append([v])
    return len(rows) - 1


def _freeze(rows) -> Tableau:
    return Tableau(tuple(tuple(r) for r in rows))


def rsk(p) -> tuple[Tableau, Tableau]:
    """Row-insertion tableau P and recording tableau Q of a permutation."""
    seq = _check_permutation(p)
    prow: list[list[int]] = []
    qrow: list[list[int]] = []
    for step, v in enumerate(seq, start=1):
        i = _insert(prow, v, strict=True)
        if i == len(qrow):
            qrow.append([])
        qrow[i].append(step)
    return _freeze(prow), _freeze(qrow)


def rsk_inverse(p_tab: Tableau, q_tab: Tableau) -> tuple[int, ...]:
    if not isinstance(p_tab, Tableau):
        p_tab = Tableau(p_tab)
    if not isinstance(q_tab, Tableau):
        q_tab = Tableau(q_tab)
    if p_tab.shape != q_tab.shape:
        raise ValueError("P and Q must have the same shape")
    if not (p_tab.is_standard() and q_tab.is_standard()):
        raise ValueError("P and Q must be standard tableaux")
    prow = [list(r) for r in p_tab.rows]
    where = {v: i for i, r in enumerate(q_tab.rows) for v in r}
    n = p_tab.size
    out = [0] * n
    for step in range(n, 0, -1):
        i = where[step]
        v = prow[i].pop()
        if not prow[i]:
            prow.pop()
        for row in reversed(prow[:i]):
            k = bisect.bisect_left(row, v) - 1
            row[k], v = v, row[k]
        out[step - 1] = v
    return tuple(out)


@dataclass(frozen=True)
class GeneralizedPermutation:
    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __post_init__(self):
        if len(self.top) != len(self.bottom):
            raise ValueError("rows must have equal length")
        pairs = list(zip(self.top, self.bottom))
        if pairs != sorted(pairs):
            raise ValueError("columns must be sorted lexicographically")


def _weight_matrix(w) -> np.ndarray:
    arr = np.asarray(w)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("weight matrix must be a nonempty 2-d grid")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.round(arr)):
            raise ValueError("weights must be integers")
    arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError("weights must be non-negative")
    return arr


def generalized_permutation(w) -> GeneralizedPermutation:
    """Two-line array holding the pair (i, j) w_ij times, 1-based, in lexicographic order."""
    arr = _weight_matrix(w)
    top: list[int] = []
    bottom: list[int] = []
    for i, j in zip(*np.nonzero(arr)):
        top.extend([int(i) + 1] * int(arr[i, j]))
        bottom.extend([int(j) + 1] * int(arr[i, j]))
    return GeneralizedPermutation(tuple(top), tuple(bottom))


def rsk_generalized(w) -> tuple[Tableau, Tableau]:
    """Semistandard (P, Q) by weak row insertion of the bottom row; empty tableaux for a zero grid."""
    gp = generalized_permutation(w)
    prow: list[list[int]] = []
    qrow: list[list[int]] = []
    for t, b in zip(gp.top, gp.bottom):
        i = _insert(prow, b, strict=False)
        if i == len(qrow):
            qrow.append([])
        qrow[i].append(t)
    return _freeze(prow), _freeze(qrow)


def _diagram(d) -> YoungDiagram:
    return d if isinstance(d, YoungDiagram) else YoungDiagram(tuple(d))


def hook_length_count(d) -> int:
    d = _diagram(d)
    conj = d.conjugate().parts
    prod = 1
    for i, row in enumerate(d.parts):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    total = math.factorial(d.size)
    if total % prod:
        raise ArithmeticError("hook product does not divide n!")
    return total // prod


def frobenius_young_count(d) -> int:
    """n! prod_{i<j} (h_i - h_j) / prod h_i! with h_i = lambda_i + (r - i)."""
    d = _diagram(d)
    r = len(d.parts)
    h = [d.parts[i] + (r - 1 - i) for i in range(r)]
    num = math.factorial(d.size)
    for i in range(r):
        for j in range(i + 1, r):
            num *= h[i] - h[j]
    den = math.prod(math.factorial(v) for v in h)
    if num % den:
        raise ArithmeticError("Frobenius-Young quotient is not integral")
    return num // den


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def count_perms_by_lds(n: int, r: int) -> int:
    """Permutations of n with longest decreasing subsequence r: sum of f(lambda)^2 over r-row shapes."""
    if not 0 <= n <= MAX_CENSUS_N:
        raise ValueError(f"census limited to 0 <= n <= {MAX_CENSUS_N}")
    if r > n or r < 0:
        raise ValueError("need 0 <= r <= n")
    return sum(hook_length_count(lam) ** 2 for lam in partitions(n) if len(lam) == r)


def _decreasing_tuples(total: int, length: int, below: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        if total == 0:
            yield ()
        return
    # remaining entries strictly decrease and stay >= 1
    for first in range(min(below - 1, total), length - 1, -1):
        for rest in _decreasing_tuples(total - first, length - 1, first):
            yield (first,) + rest


def count_perms_by_lds_hsum(n: int, r: int) -> int:
    """(n!)^2 sum prod_{i<j}(h_i - h_j)^2 / prod (h_i!)^2 over strictly decreasing h >= 1
    with sum h = n + r(r-1)/2."""
    if not 1 <= r <= n <= 8:
        raise ValueError("h-sum census limited to 1 <= r <= n <= 8")
    total = Fraction(0)
    target = n + r * (r - 1) // 2
    for h in _decreasing_tuples(target, r, target + 1):
        term = Fraction(math.factorial(n) ** 2)
        for i in range(r):
            for j in range(i + 1, r):
                term *= (h[i] - h[j]) ** 2
        term /= math.prod(math.factorial(v) for v in h) ** 2
        total += term
    if total.denominator != 1:
        raise ArithmeticError("h-sum is not integral")
    return int(total)


def lpp_grid(w) -> int:
    """Maximal weight of an up-right path across the grid."""
    return int(_kernels.lpp(np.ascontiguousarray(_weight_matrix(w))))


def sample_geometric_matrix(rows: int, cols: int, q: float, rng: RngLike) -> np.ndarray:
    """iid P(w = k) = (1 - q) q^k by inversion of uniforms."""
    if not 0 < q < 1:
        raise ValueError("q must lie strictly between 0 and 1")
    if rows < 1 or cols < 1:
        raise ValueError("grid must be nonempty")
    u = uniforms(as_generator(rng), (rows, cols))
    return np.floor(np.log(u) / math.log(q)).astype(np.int64)


def random_permutation(n: int, rng: RngLike) -> np.ndarray:
    """Uniform permutation of 1..n by Fisher-Yates."""
    if n < 0:
        raise ValueError("n must be non-negative")
    gen = as_generator(rng)
    p = np.arange(1, n + 1)
    u = gen.random(max(n - 1, 0))
    for i in range(n - 1, 0, -1):
        j = int(u[n - 1 - i] * (i + 1))
        p[i], p[j] = p[j], p[i]
    return p
