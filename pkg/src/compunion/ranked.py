"""r-order construction on ranked cells with expander-power adjacency.

Vertices live in cells indexed by rank vectors in ``{0..b-1}^r``; each cell
is a copy of a random d-regular graph H on ``a`` vertices.  Order ``s``
(1-based) puts ``v`` below ``w`` when the rank of ``v`` precedes the rank
of ``w`` in the s-th rank order and their H-labels are within H-distance
``|rank(w) - rank(v)|_inf``.

Vertex ``p`` of the cell with rank ``alpha`` has index
``mixed_radix(alpha) * a + p``, first coordinate most significant.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, SizeMismatch, TooSmall, ZeroNormal
from .expander import PowerGraph, RegularGraph, graph_powers, random_regular
from .poset import LabeledUnionGraph, StrictOrder, union_graphs

VARIANTS = ("overlapping", "disjoint")


def _diff(alpha, beta):
    if len(alpha) != len(beta):
        raise DimensionMismatch(f"vectors of length {len(alpha)} and {len(beta)}")
    return [y - x for x, y in zip(alpha, beta)]


def _check_s(s: int, r: int):
    if not 1 <= s <= r:
        raise DimensionMismatch(f"relation index s={s} outside 1..{r}")


def prec(s: int, alpha, beta, strict: bool = False) -> bool:
    """alpha precedes beta in order s: beta_s - alpha_s equals the l-inf distance."""
    d = _diff(alpha, beta)
    _check_s(s, len(d))
    if strict and not any(d):
        return False
    return d[s - 1] == max(abs(x) for x in d)


def prec_disjoint(s: int, alpha, beta) -> bool:
    """Tie-broken version: order s wins only if no lower index attains the maximum."""
    d = _diff(alpha, beta)
    _check_s(s, len(d))
    ds = d[s - 1]
    if ds <= 0:
        return False
    return ds == max(abs(x) for x in d) and all(abs(x) < ds for x in d[: s - 1])


def linf(alpha, beta) -> int:
    return max(abs(x) for x in _diff(alpha, beta)) if len(alpha) else 0


@dataclass(frozen=True)
class RankedParams:
    r: int
    b: int
    a: int
    d: int = 3
    seed: int = 0
    variant: str = "overlapping"
    epsilon: float | None = None

    def __post_init__(self):
        if self.r < 1 or self.b < 1 or self.a < 1:
            raise ValueError("r, b and a must all be positive")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if (self.a * self.d) % 2:
            raise ValueError(f"a*d = {self.a * self.d} is odd")

    @property
    def n(self) -> int:
        return self.a * self.b**self.r


def ranked_params_from_n(
    n: int,
    epsilon: float,
    r: int,
    d: int = 3,
    seed: int = 0,
    variant: str = "overlapping",
) -> RankedParams:
    """Parameters b = eps ln n / ln 9 and a = n / b^r, rounded.

    ``a`` is kept above ``d`` so a simple d-regular graph exists, then
    bumped by one if ``a*d`` is odd.
    """
    if n < 100:
        raise TooSmall(f"n={n} is below 100")
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if r < 1:
        raise ValueError("r must be positive")
    b = max(1, round(epsilon * math.log(n) / math.log(9)))
    a = max(2, d + 1, round(n / b**r))
    if (a * d) % 2:
        a += 1
    return RankedParams(r=r, b=b, a=a, d=d, seed=seed, variant=variant, epsilon=epsilon)


def _rank_comparator(variant: str):
    if variant == "disjoint":
        return prec_disjoint
    return lambda s, x, y: prec(s, x, y, strict=True)


class RankedConstruction:
    def __init__(self, params: RankedParams, H: RegularGraph | None = None):
        self.params = params
        if H is None:
            H = random_regular(params.a, params.d, params.seed)
        elif H.n != params.a:
            raise ValueError(f"expander has {H.n} vertices, cells have {params.a}")
        self.H = H
        self.powers: list[PowerGraph] = graph_powers(H, max(params.b - 1, 0))
        self.ranks: list[tuple[int, ...]] = list(
            itertools.product(range(params.b), repeat=params.r)
        )

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def a(self) -> int:
        return self.params.a

    @property
    def b(self) -> int:
        return self.params.b

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def cells(self) -> int:
        return len(self.ranks)

    def cell_index(self, alpha: Sequence[int]) -> int:
        c = 0
        for x in alpha:
            c = c * self.b + x
        return c

    def vertex(self, alpha: Sequence[int], p: int) -> int:
        return self.cell_index(alpha) * self.a + p

    def rank(self, v: int) -> tuple[int, ...]:
        return self.ranks[v // self.a]

    def h(self, v: int) -> int:
        return v % self.a

    def less(self, s: int, v: int, w: int) -> bool:
        alpha, beta = self.rank(v), self.rank(w)
        if not _rank_comparator(self.params.variant)(s, alpha, beta):
            return False
        return self.powers[linf(alpha, beta)].adjacent(self.h(v), self.h(w))

    def labels(self, v: int, w: int) -> frozenset[int]:
        return frozenset(
            s for s in range(1, self.r + 1) if self.less(s, v, w) or self.less(s, w, v)
        )

    # cell-level tables

    @cached_property
    def cell_distance(self) -> np.ndarray:
        R = np.array(self.ranks, dtype=np.int64).reshape(self.cells, self.r)
        return np.abs(R[:, None, :] - R[None, :, :]).max(axis=2)

    def cell_relation(self, s: int) -> np.ndarray:
        """``out[x, y]`` iff rank x strictly precedes rank y in rank order s."""
        _check_s(s, self.r)
        R = np.array(self.ranks, dtype=np.int64).reshape(self.cells, self.r)
        D = R[None, :, :] - R[:, None, :]  # D[x, y] = rank_y - rank_x
        ds = D[:, :, s - 1]
        rel = (ds > 0) & (ds == np.abs(D).max(axis=2))
        if self.params.variant == "disjoint" and s > 1:
            rel &= (np.abs(D[:, :, : s - 1]) < ds[:, :, None]).all(axis=2)
        return rel

    @cached_property
    def _power_stack(self) -> np.ndarray:
        return np.stack([p.matrix() for p in self.powers])

    def order(self, s: int) -> StrictOrder:
        rel = self.cell_relation(s)
        blocks = self._power_stack[self.cell_distance] & rel[:, :, None, None]
        C, a = self.cells, self.a
        return StrictOrder(blocks.transpose(0, 2, 1, 3).reshape(C * a, C * a))

    @cached_property
    def orders(self) -> list[StrictOrder]:
        return [self.order(s) for s in range(1, self.r + 1)]

    @cached_property
    def graph(self) -> LabeledUnionGraph:
        return union_graphs(self.orders)

    # counting without materializing

    def edge_count(self) -> int:
        """Edges of the union graph.

        Distinct cells always share a rank order, so cross-cell adjacency is
        decided by the H-power alone; same-cell pairs are never comparable.
        """
        nnz = [int(p.ball_sizes().sum()) for p in self.powers]
        dist = self.cell_distance
        total = 0
        for k in range(1, self.b):
            pairs = int((np.triu(dist, k=1) == k).sum())
            total += pairs * nnz[k]
        return total

    def __repr__(self) -> str:
        p = self.params
        return f"RankedConstruction(r={p.r}, b={p.b}, a={p.a}, seed={p.seed}, variant={p.variant})"


def build_ranked(p: RankedParams, H: RegularGraph | None = None) -> RankedConstruction:
    return RankedConstruction(p, H)


def max_degree(rc: RankedConstruction) -> int:
    """Exact maximum degree of the union graph, from cell distances and ball sizes."""
    if rc.b == 1:
        return 0
    balls = np.stack([p.ball_sizes() for p in rc.powers])  # (b, a)
    dist = rc.cell_distance
    counts = np.stack([(dist == k).sum(axis=1) for k in range(rc.b)], axis=1)  # (C, b)
    counts[:, 0] = 0  # the cell itself
    return int((counts @ balls).max())


def degree_bound(rc: RankedConstruction) -> int:
    return rc.b**rc.r * 3**rc.b


# separation machinery


class Separation(NamedTuple):
    a_idx: list[int]
    b_idx: list[int]
    t: float
    a_lower: bool


def _dot(x, normal):
    return sum(xi * ni for xi, ni in zip(x, normal))


def separate_multisets(A: Sequence, B: Sequence, normal: Sequence) -> Separation:
    """Halve two equal-size multisets so a translate of the hyperplane splits them.

    ``t`` is the least level at which ceil(m/2) points of A or of B lie in the
    closed lower halfspace; that side keeps its ceil(m/2) lowest points, the
    other keeps its ceil(m/2) highest.  Ties between the sides send A low;
    ties inside a side break by (projection, index).
    """
    m = len(A)
    if m != len(B):
        raise SizeMismatch(f"multisets of size {len(A)} and {len(B)}")
    if m == 0:
        raise SizeMismatch("multisets must be nonempty")
    if not any(normal):
        raise ZeroNormal("normal vector is zero")
    for x in itertools.chain(A, B):
        if len(x) != len(normal):
            raise DimensionMismatch("point and normal dimensions differ")
    h = -(-m // 2)
    pa = sorted((_dot(x, normal), i) for i, x in enumerate(A))
    pb = sorted((_dot(x, normal), i) for i, x in enumerate(B))
    ta, tb = pa[h - 1][0], pb[h - 1][0]
    if ta <= tb:
        return Separation([i for _, i in pa[:h]], [i for _, i in pb[-h:]], ta, True)
    return Separation([i for _, i in pa[-h:]], [i for _, i in pb[:h]], tb, False)


def dominates(s: int, A: Sequence, B: Sequence) -> bool:
    """A precedes B elementwise in rank order s (non-strict), checked by extremes."""
    if not A or not B:
        return True
    r = len(A[0])
    i_s = s - 1
    for i in range(r):
        if min(y[i_s] - y[i] for y in B) < max(x[i_s] - x[i] for x in A):
            return False
        if min(y[i_s] + y[i] for y in B) < max(x[i_s] + x[i] for x in A):
            return False
    return True


def separation_normals(r: int) -> list[tuple[int, ...]]:
    if r == 1:
        return [(1,)]
    out = []
    for i in range(r):
        for j in range(i + 1, r):
            e = [0] * r
            e[i], e[j] = 1, -1
            out.append(tuple(e))
            e = [0] * r
            e[i], e[j] = 1, 1
            out.append(tuple(e))
    return out


class ComparableSubsets(NamedTuple):
    x_ids: list
    y_ids: list
    s: int
    forward: bool  # True: X' precedes Y' in order s; False: Y' precedes X'


def find_comparable_subsets(X: Sequence, Y: Sequence, r: int) -> ComparableSubsets:
    """Equal-size X' in X, Y' in Y whose ranks are totally dominated in one order.

    X and Y are sequences of ``(id, rank)``.  Each separating hyperplane
    x_i - x_j and x_i + x_j (i < j) halves both sides; for r = 1 a single
    split along the axis is used.  Sizes stay at least m * 2**(-r*r).
    """
    if len(X) != len(Y):
        raise SizeMismatch(f"sets of size {len(X)} and {len(Y)}")
    if not X:
        raise SizeMismatch("sets must be nonempty")
    xa = list(range(len(X)))
    ya = list(range(len(Y)))
    for normal in separation_normals(r):
        sep = separate_multisets([X[i][1] for i in xa], [Y[i][1] for i in ya], normal)
        xa = [xa[i] for i in sep.a_idx]
        ya = [ya[i] for i in sep.b_idx]
    A = [tuple(X[i][1]) for i in xa]
    B = [tuple(Y[i][1]) for i in ya]

    # one pair fixes the order; boundary ties can spoil that pair's choice,
    # so every (s, direction) is checked against the whole sets
    alpha, beta = A[0], B[0]
    candidates = []
    for s in range(1, r + 1):
        if prec(s, alpha, beta):
            candidates.append((s, True))
        if prec(s, beta, alpha):
            candidates.append((s, False))
    candidates += [(s, f) for s in range(1, r + 1) for f in (True, False)]
    for s, forward in candidates:
        ok = dominates(s, A, B) if forward else dominates(s, B, A)
        if ok:
            return ComparableSubsets([X[i][0] for i in xa], [Y[i][0] for i in ya], s, forward)
    raise AssertionError("separated sets admit no dominating order")  # unreachable
