"""Strict partial orders, comparability graphs and their labeled unions.

Relations are held as dense boolean matrices (``matrix[u, v]`` means
``u < v``), always transitively closed.  Graphs are dense boolean adjacency
matrices with an empty diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CycleDetected, EmptyInput, MismatchedVertexCount


def _pairs_to_matrix(pairs: Iterable[tuple[int, int]], n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=bool)
    pairs = list(pairs)
    if pairs:
        idx = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if idx.min() < 0 or idx.max() >= n:
            raise IndexError(f"pair references a vertex outside [0, {n})")
        m[idx[:, 0], idx[:, 1]] = True
    return m


def _bool_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # float32 keeps the product on BLAS; counts stay exact far beyond any n used here
    return (x.astype(np.float32) @ y.astype(np.float32)) > 0.5


class StrictOrder:
    """A transitively closed strict relation on ``range(n)``.

    Build one with :func:`transitive_closure` or :meth:`from_matrix`; the
    constructor itself trusts its input.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix: np.ndarray):
        m = np.array(matrix, dtype=bool, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("relation matrix must be square")
        m.flags.writeable = False
        self._m = m

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "StrictOrder":
        return cls(matrix)

    @property
    def n(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def rel(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.pairs())

    def pairs(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(self._m)
        return list(zip(us.tolist(), vs.tolist()))

    def less(self, u: int, v: int) -> bool:
        return bool(self._m[u, v])

    def comparable(self, u: int, v: int) -> bool:
        return bool(self._m[u, v] or self._m[v, u])

    def __contains__(self, pair) -> bool:
        u, v = pair
        return bool(self._m[u, v])

    def __len__(self) -> int:
        return int(self._m.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, StrictOrder):
            return NotImplemented
        return self._m.shape == other._m.shape and bool(np.array_equal(self._m, other._m))

    def __hash__(self):
        return hash((self.n, self._m.tobytes()))

    def __repr__(self) -> str:
        return f"StrictOrder(n={self.n}, pairs={len(self)})"


def transitive_closure(pairs: Iterable[tuple[int, int]] | np.ndarray, n: int) -> StrictOrder:
    """Smallest transitive relation containing ``pairs``.

    Raises CycleDetected when the closure is not a strict order.
    """
    if isinstance(pairs, np.ndarray) and pairs.dtype == bool and pairs.ndim == 2:
        m = pairs.copy()
        if m.shape != (n, n):
            raise MismatchedVertexCount(f"matrix shape {m.shape} does not match n={n}")
    else:
        m = _pairs_to_matrix(pairs, n)
    # repeated squaring: path lengths double every round
    while True:
        nxt = m | _bool_matmul(m, m)
        if np.array_equal(nxt, m):
            break
        m = nxt
    bad = np.flatnonzero(np.diagonal(m))
    if bad.size:
        raise CycleDetected(f"closure places vertex {int(bad[0])} below itself")
    return StrictOrder(m)


@dataclass
class OrderReport:
    """Outcome of :func:`is_partial_order`."""

    irreflexivity: list[int] = field(default_factory=list)
    antisymmetry: list[tuple[int, int]] = field(default_factory=list)
    transitivity: list[tuple[int, int, int]] = field(default_factory=list)
    transitivity_count: int = 0

    @property
    def ok(self) -> bool:
        return not (self.irreflexivity or self.antisymmetry or self.transitivity_count)

    def __bool__(self) -> bool:
        return self.ok


def is_partial_order(pairs, n: int | None = None, max_report: int | None = None) -> OrderReport:
    """Validate a relation as a strict partial order.

    ``pairs`` is a StrictOrder, a square boolean matrix, or an iterable of
    ordered pairs (``n`` is then required).  Every violation is reported;
    ``max_report`` caps only the list of transitivity triples, the count is
    always exact.
    """
    if isinstance(pairs, StrictOrder):
        m = pairs.matrix
    elif isinstance(pairs, np.ndarray) and pairs.ndim == 2:
        m = pairs.astype(bool, copy=False)
    else:
        if n is None:
            raise ValueError("n is required when validating a pair list")
        m = _pairs_to_matrix(pairs, n)

    report = OrderReport()
    report.irreflexivity = np.flatnonzero(np.diagonal(m)).tolist()
    sym = m & m.T
    us, vs = np.nonzero(np.triu(sym, k=1))
    report.antisymmetry = list(zip(us.tolist(), vs.tolist()))

    missing = _bool_matmul(m, m) & ~m
    report.transitivity_count = 0
    for u, w in zip(*np.nonzero(missing)):
        mids = np.flatnonzero(m[u] & m[:, w])
        report.transitivity_count += int(mids.size)
        for v in mids.tolist():
            if max_report is None or len(report.transitivity) < max_report:
                report.transitivity.append((int(u), v, int(w)))
    return report


class Graph:
    """Simple undirected graph on ``range(n)`` backed by a boolean matrix."""

    def __init__(self, matrix: np.ndarray):
        m = np.array(matrix, dtype=bool, copy=True)
        m = m | m.T
        np.fill_diagonal(m, False)
        m.flags.writeable = False
        self._adj = m

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        m = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            m[u, v] = m[v, u] = True
        return cls(m)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), dtype=bool))

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self._adj, k=1))
        return list(zip(us.tolist(), vs.tolist()))

    def edge_count(self) -> int:
        return int(np.triu(self._adj, k=1).sum())

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    def neighbor_bits(self) -> list[int]:
        """Neighborhoods as Python int bitsets (bit v set iff v adjacent)."""
        weights = [1 << v for v in range(self.n)]
        bits = []
        for row in self._adj:
            b = 0
            for v in np.flatnonzero(row).tolist():
                b |= weights[v]
            bits.append(b)
        return bits

    def complement(self) -> "Graph":
        return Graph(~self._adj)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = sorted(set(vertices))
        sub = self._adj[np.ix_(vs, vs)]
        return bool(sub.sum() == len(vs) * (len(vs) - 1))

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = sorted(set(vertices))
        return not bool(self._adj[np.ix_(vs, vs)].any())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return bool(np.array_equal(self._adj, other._adj))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, edges={self.edge_count()})"


class LabeledUnionGraph(Graph):
    """Union of r comparability graphs, each edge tagged with its relation indices.

    Labels are 1-based: bit ``s - 1`` of ``label_bits[u, v]`` is set iff u, v
    are comparable in order ``s``.
    """

    def __init__(self, label_bits: np.ndarray, r: int):
        bits = np.array(label_bits, dtype=np.uint32, copy=True)
        bits = bits | bits.T
        np.fill_diagonal(bits, 0)
        super().__init__(bits != 0)
        bits.flags.writeable = False
        self._bits = bits
        self.r = r

    @property
    def label_bits(self) -> np.ndarray:
        return self._bits

    def labels(self, u: int, v: int) -> frozenset[int]:
        b = int(self._bits[u, v])
        return frozenset(s + 1 for s in range(self.r) if b >> s & 1)

    @property
    def edges_labeled(self) -> dict[tuple[int, int], frozenset[int]]:
        out = {}
        for u, v in self.edges():
            out[(u, v)] = self.labels(u, v)
        return out

    def layer(self, s: int) -> Graph:
        """The comparability graph of order ``s`` alone."""
        return Graph((self._bits >> (s - 1)) & 1 != 0)

    def graph(self) -> Graph:
        return Graph(self.matrix)


def comparability_graph(p: StrictOrder) -> Graph:
    return Graph(p.matrix | p.matrix.T)


def union_graphs(ps: Sequence[StrictOrder], n: int | None = None) -> LabeledUnionGraph:
    """Label every comparable pair of every order with its 1-based index."""
    if ps:
        n0 = ps[0].n
        for p in ps:
            if p.n != n0:
                raise MismatchedVertexCount(f"orders on {n0} and {p.n} vertices")
        if n is not None and n != n0:
            raise MismatchedVertexCount(f"orders on {n0} vertices, n={n} requested")
        n = n0
    elif n is None:
        n = 0
    bits = np.zeros((n, n), dtype=np.uint32)
    for s, p in enumerate(ps):
        comp = p.matrix | p.matrix.T
        bits |= comp.astype(np.uint32) << np.uint32(s)
    return LabeledUnionGraph(bits, len(ps))


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    palette_size: int

    @property
    def n(self) -> int:
        return len(self.colors)

    def is_proper(self, g: Graph) -> bool:
        c = np.asarray(self.colors)
        if c.size == 0:
            return True
        same = c[:, None] == c[None, :]
        return not bool((same & g.matrix).any())

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return out


def _heights(p: StrictOrder) -> np.ndarray:
    m = p.matrix
    # in a closed order u < v implies pred(u) is a proper subset of pred(v),
    # so sorting by predecessor count gives a linear extension
    npred = m.sum(axis=0)
    height = np.zeros(p.n, dtype=np.int64)
    for v in np.argsort(npred, kind="stable").tolist():
        preds = np.flatnonzero(m[:, v])
        if preds.size:
            height[v] = height[preds].max() + 1
    return height


def mirsky_coloring(p: StrictOrder) -> Coloring:
    """Color each element by its height (longest chain ending there, 0-based)."""
    h = _heights(p)
    palette = int(h.max()) + 1 if h.size else 0
    return Coloring(tuple(h.tolist()), palette)


def longest_chain(p: StrictOrder) -> list[int]:
    """A maximum chain, listed bottom to top."""
    if p.n == 0:
        return []
    h = _heights(p)
    m = p.matrix
    v = int(np.argmax(h))
    chain = [v]
    while h[v] > 0:
        preds = np.flatnonzero(m[:, v] & (h == h[v] - 1))
        v = int(preds[0])
        chain.append(v)
    return chain[::-1]


def product_coloring(cs: Sequence[Coloring]) -> Coloring:
    """Color v by the tuple of its input colors, re-indexed lexicographically."""
    if not cs:
        raise EmptyInput("no colorings given")
    n = cs[0].n
    for c in cs:
        if c.n != n:
            raise MismatchedVertexCount(f"colorings over {n} and {c.n} vertices")
    tuples = list(zip(*(c.colors for c in cs)))
    index = {t: i for i, t in enumerate(sorted(set(tuples)))}
    return Coloring(tuple(index[t] for t in tuples), len(index))


@dataclass(frozen=True)
class HomogeneousSet:
    kind: str  # "clique" or "independent"
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def verify(self, g: Graph) -> bool:
        if self.kind == "clique":
            return g.is_clique(self.vertices)
        if self.kind == "independent":
            return g.is_independent(self.vertices)
        return False


def extract_homogeneous(ps: Sequence[StrictOrder]) -> HomogeneousSet:
    """Homogeneous set of size at least n**(1/(r+1)) in the union of the orders.

    Both candidates from the coloring argument are built: the longest chain
    over all orders (a clique) and the largest class of the product of the
    height colorings (an independent set).  The larger wins; ties go to the
    clique.
    """
    if not ps or ps[0].n == 0:
        raise EmptyInput("need at least one order on at least one vertex")
    n = ps[0].n
    for p in ps:
        if p.n != n:
            raise MismatchedVertexCount(f"orders on {n} and {p.n} vertices")

    chains = [longest_chain(p) for p in ps]
    clique = max(chains, key=len)

    prod = product_coloring([mirsky_coloring(p) for p in ps])
    classes = prod.classes()
    best = max(sorted(classes), key=lambda c: len(classes[c]))
    indep = classes[best]

    if len(clique) >= len(indep):
        return HomogeneousSet("clique", tuple(sorted(clique)))
    return HomogeneousSet("independent", tuple(sorted(indep)))


def homogeneous_bound(n: int, r: int) -> float:
    return float(n) ** (1.0 / (r + 1))
