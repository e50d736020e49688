"""Two-order grid construction with small homogeneous sets.

A b x b grid of cells, each holding ``a`` vertices.  Order 1 chains every
row into ``a`` random chains and compares cells strictly south-east of
each other; order 2 chains every column through the fixed in-cell layout
and compares cells strictly south-west.  All grid coordinates and chain
indices are 0-based.

Vertex ``p`` of cell ``(i, j)`` has index ``(i * b + j) * a + p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, TooSmall
from .poset import LabeledUnionGraph, StrictOrder, union_graphs

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class GridParams:
    a: int
    b: int
    seed: int = 0

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError(f"grid needs a >= 1 and b >= 1, got a={self.a}, b={self.b}")
        if not 0 <= self.seed <= SEED_MASK:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def n(self) -> int:
        return self.a * self.b * self.b


def grid_params_from_n(n: int, seed: int = 0) -> GridParams:
    """Grid parameters for a target vertex count, natural logs throughout.

    b is rounded first and a recomputed from it, so ``a * b**2`` only
    approximates ``n``; read the realized count from ``params.n``.
    """
    if n < 100:
        raise TooSmall(f"n={n} is below 100")
    ln = math.log(n)
    b = max(1, round(n ** (1 / 3) * (math.log(ln) / ln) ** (1 / 3)))
    a = max(1, round(n / b**2))
    return GridParams(a=a, b=b, seed=seed)


def cell_rng(seed: int, i: int, j: int) -> np.random.Generator:
    """Counter-based stream for one cell, independent of iteration order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, i, j])))


class GridConstruction:
    """The two orders of the grid construction for fixed parameters."""

    def __init__(self, params: GridParams):
        self.params = params
        a, b = params.a, params.b
        # f[i, j, k] = in-cell position of the k-th row chain's vertex
        f = np.empty((b, b, a), dtype=np.int64)
        for i in range(b):
            for j in range(b):
                f[i, j] = cell_rng(params.seed, i, j).permutation(a)
        finv = np.empty_like(f)
        ii, jj, kk = np.indices(f.shape)
        finv[ii, jj, f] = kk
        f.flags.writeable = False
        finv.flags.writeable = False
        self.f = f
        self._finv = finv

    @property
    def a(self) -> int:
        return self.params.a

    @property
    def b(self) -> int:
        return self.params.b

    @property
    def n(self) -> int:
        return self.params.n

    # vertex bookkeeping

    def vertex(self, i: int, j: int, p: int) -> int:
        return (i * self.b + j) * self.a + p

    def cell_of(self, v: int) -> tuple[int, int]:
        c, _ = divmod(v, self.a)
        return divmod(c, self.b)

    def coords(self, v: int) -> tuple[int, int, int]:
        """``(i, j, p)`` for vertex v."""
        c, p = divmod(v, self.a)
        i, j = divmod(c, self.b)
        return i, j, p

    def f_vertex(self, i: int, j: int, k: int) -> int:
        return self.vertex(i, j, int(self.f[i, j, k]))

    def g_vertex(self, i: int, j: int, l: int) -> int:
        return self.vertex(i, j, l)

    def row_index(self, v: int) -> int:
        """k such that v = f_{i,j}(k)."""
        i, j, p = self.coords(v)
        return int(self._finv[i, j, p])

    def col_index(self, v: int) -> int:
        """l such that v = g_{i,j}(l)."""
        return v % self.a

    # comparators

    def less1(self, v: int, w: int) -> bool:
        i, j, p = self.coords(v)
        i2, j2, p2 = self.coords(w)
        if i < i2 and j < j2:
            return True
        return i == i2 and j < j2 and self._finv[i, j, p] == self._finv[i2, j2, p2]

    def less2(self, v: int, w: int) -> bool:
        i, j, p = self.coords(v)
        i2, j2, p2 = self.coords(w)
        if i < i2 and j > j2:
            return True
        return i < i2 and j == j2 and p == p2

    def adjacent(self, v: int, w: int) -> bool:
        return (
            self.less1(v, w) or self.less1(w, v) or self.less2(v, w) or self.less2(w, v)
        )

    # chains

    def _check(self, name: str, x: int, bound: int):
        if not 0 <= x < bound:
            raise IndexOutOfRange(f"{name}={x} outside [0, {bound})")

    def row_chain(self, i: int, k: int) -> list[int]:
        self._check("i", i, self.b)
        self._check("k", k, self.a)
        return [self.f_vertex(i, j, k) for j in range(self.b)]

    def col_chain(self, j: int, l: int) -> list[int]:
        self._check("j", j, self.b)
        self._check("l", l, self.a)
        return [self.g_vertex(i, j, l) for i in range(self.b)]

    # explicit orders, only sensible for small n

    def vertex_arrays(self):
        """Per-vertex arrays (i, j, in-cell position, row-chain index)."""
        v = np.arange(self.n)
        c, p = np.divmod(v, self.a)
        i, j = np.divmod(c, self.b)
        k = self._finv[i, j, p]
        return i, j, p, k

    @cached_property
    def order1(self) -> StrictOrder:
        i, j, _, k = self.vertex_arrays()
        ii, jj, kk = i[:, None], j[:, None], k[:, None]
        m = ((ii < i) & (jj < j)) | ((ii == i) & (jj < j) & (kk == k))
        return StrictOrder(m)

    @cached_property
    def order2(self) -> StrictOrder:
        i, j, p, _ = self.vertex_arrays()
        ii, jj, pp = i[:, None], j[:, None], p[:, None]
        m = ((ii < i) & (jj > j)) | ((ii < i) & (jj == j) & (pp == p))
        return StrictOrder(m)

    @property
    def orders(self) -> list[StrictOrder]:
        return [self.order1, self.order2]

    @cached_property
    def graph(self) -> LabeledUnionGraph:
        return union_graphs(self.orders)

    def __repr__(self) -> str:
        return f"GridConstruction(a={self.a}, b={self.b}, seed={self.params.seed})"


def build_grid(p: GridParams) -> GridConstruction:
    return GridConstruction(p)


def structural_clique(gc: GridConstruction, ks: Sequence[int], ls: Sequence[int]) -> set[int]:
    """Union of the selected row chains intersected with the selected column chains."""
    if len(ks) != gc.b or len(ls) != gc.b:
        raise IndexOutOfRange(f"selector vectors must have length b={gc.b}")
    rows = set()
    for i, k in enumerate(ks):
        rows.update(gc.row_chain(i, k))
    cols = set()
    for j, l in enumerate(ls):
        cols.update(gc.col_chain(j, l))
    return rows & cols


def greedy_selectors(gc: GridConstruction) -> tuple[list[int], list[int]]:
    """Row chain 0 everywhere, then the column chain meeting those rows most often."""
    ks = [0] * gc.b
    ls = []
    for j in range(gc.b):
        # chain 0 of row i meets column chain l of column j exactly when
        # f_{i,j}(0) sits at position l of cell (i, j)
        hits = np.bincount(gc.f[:, j, 0], minlength=gc.a)
        ls.append(int(np.argmax(hits)))  # argmax takes the smallest l on ties
    return ks, ls


def greedy_clique_witness(gc: GridConstruction) -> set[int]:
    ks, ls = greedy_selectors(gc)
    return structural_clique(gc, ks, ls)


def alpha_witness(gc: GridConstruction) -> set[int]:
    """Cell (0, 0); no two of its vertices are comparable in either order."""
    return {gc.vertex(0, 0, p) for p in range(gc.a)}


def is_clique_by_comparators(gc: GridConstruction, vertices) -> bool:
    vs = sorted(vertices)
    return all(gc.adjacent(v, w) for x, v in enumerate(vs) for w in vs[x + 1 :])
