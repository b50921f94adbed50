"""Dyck paths, plane trees, Catalan numbers and exact finite-N trace moments."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels

__all__ = [
    "DyckPath",
    "RootedPlaneTree",
    "catalan",
    "dyck_to_tree",
    "enumerate_dyck_paths",
    "exact_trace_moment",
    "tree_to_dyck",
]

MAX_DYCK_LENGTH = 24
WORD_BUDGET = 10**7


@dataclass(frozen=True)
class DyckPath:
    steps: tuple[int, ...]

    def __post_init__(self):
        steps = tuple(int(s) for s in self.steps)
        height = 0
        for s in steps:
            if s not in (1, -1):
                raise ValueError(f"Dyck steps must be +1 or -1, got {s}")
            height += s
            if height < 0:
                raise ValueError("Dyck path dips below zero")
        if height != 0:
            raise ValueError("Dyck path does not return to zero")
        object.__setattr__(self, "steps", steps)

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class RootedPlaneTree:
    children: tuple["RootedPlaneTree", ...] = ()

    @property
    def edges(self) -> int:
        return sum(1 + c.edges for c in self.children)


def enumerate_dyck_paths(k: int) -> list[DyckPath]:
    if k < 0 or k % 2:
        raise ValueError(f"Dyck paths need an even non-negative length, got {k}")
    if k > MAX_DYCK_LENGTH:
        raise ValueError(f"enumeration limited to k <= {MAX_DYCK_LENGTH}")
    half = k // 2
    out = []

    def walk(prefix, ups, downs):
        if ups == half and downs == half:
            out.append(DyckPath(tuple(prefix)))
            return
        if ups < half:
            prefix.append(1)
            walk(prefix, ups + 1, downs)
            prefix.pop()
        if downs < ups:
            prefix.append(-1)
            walk(prefix, ups, downs + 1)
            prefix.pop()

    walk([], 0, 0)
    return out


def catalan(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise ValueError(f"catalan needs a non-negative integer, got {m!r}")
    m = int(m)
    return math.comb(2 * m, m) // (m + 1)


def dyck_to_tree(path: DyckPath) -> RootedPlaneTree:
    """Up-steps descend to a new rightmost child, down-steps climb back."""
    if not isinstance(path, DyckPath):
        path = DyckPath(tuple(path))
    stack: list[list] = [[]]
    for s in path.steps:
        if s == 1:
            stack.append([])
        else:
            node = RootedPlaneTree(tuple(stack.pop()))
            stack[-1].append(node)
    return RootedPlaneTree(tuple(stack[0]))


def tree_to_dyck(tree: RootedPlaneTree) -> DyckPath:
    if not isinstance(tree, RootedPlaneTree):
        raise TypeError("expected a RootedPlaneTree")
    steps: list[int] = []

    def visit(node):
        for child in node.children:
            steps.append(1)
            visit(child)
            steps.append(-1)

    visit(tree)
    return DyckPath(tuple(steps))


def word_signature_counts(n: int, k: int) -> dict[tuple[int, ...], int]:
    """Exact number of closed index words per edge-multiplicity signature.

    The signature lists the multiplicities of the distinct undirected edges
    of the word's walk, sorted descending.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if n**k > WORD_BUDGET:
        raise ValueError(f"n^k = {n**k} exceeds the enumeration budget {WORD_BUDGET}")
    codes, counts = _kernels.word_signatures(n, k)
    base = k + 1
    out: dict[tuple[int, ...], int] = {}
    for code, count in zip(codes.tolist(), counts.tolist()):
        hist = []
        for _ in range(k):
            hist.append(code % base)
            code //= base
        # hist[p - 1] is the number of edges of multiplicity p
        sig = tuple(p for p in range(k, 0, -1) for _ in range(hist[p - 1]))
        out[sig] = out.get(sig, 0) + int(count)
    return out


def exact_trace_moment(n: int, k: int, moment_table: Sequence[float]) -> float:
    """(1/n) E tr(X^k) for X = Z / sqrt(n), Z symmetric with iid entries.

    ``moment_table[p]`` must give E Z^p for p = 0..k.
    """
    if k == 0:
        return 1.0
    if len(moment_table) < k + 1:
        raise ValueError(f"moment table must reach order {k}")
    if any(moment_table[p] is None for p in range(k + 1)):
        raise ValueError("moment table has missing entries")
    sigs = word_signature_counts(n, k)
    total = Fraction(0)
    for sig, count in sigs.items():
        term = Fraction(count)
        for p in sig:
            term *= Fraction(moment_table[p])
        total += term
    # each word carries n^{-k/2}; the trace is normalised by 1/n
    return float(total / n) / n ** (k / 2)
