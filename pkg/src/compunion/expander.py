"""Random regular graphs, vertex expansion, and graph powers with loops."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import (
    BudgetZero,
    ExactLimitExceeded,
    InfeasibleDegree,
    NonExactCertificate,
    RejectionLimitExceeded,
)

EXACT_LIMIT = 20
MAX_ATTEMPTS = 10_000


@dataclass(frozen=True)
class RegularGraph:
    n: int
    d: int
    adj: tuple[tuple[int, ...], ...]
    attempts: int = 1

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency list length differs from n")

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def is_simple_regular(self) -> bool:
        for u, nb in enumerate(self.adj):
            if len(nb) != self.d or len(set(nb)) != self.d or u in nb:
                return False
            if any(u not in self.adj[v] for v in nb):
                return False
        return True

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for u, nb in enumerate(self.adj):
            m[u, list(nb)] = True
        return m

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "RegularGraph":
        nb: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            nb[u].add(v)
            nb[v].add(u)
        degs = {len(s) for s in nb}
        if len(degs) > 1:
            raise ValueError(f"graph is not regular, degrees {sorted(degs)}")
        d = degs.pop() if degs else 0
        return cls(n, d, tuple(tuple(sorted(s)) for s in nb))


def random_regular(n: int, d: int, seed: int, max_attempts: int = MAX_ATTEMPTS) -> RegularGraph:
    """Uniform simple d-regular graph from the pairing model with rejection."""
    if (n * d) % 2 or not 0 <= d < n:
        raise InfeasibleDegree(f"no simple {d}-regular graph on {n} vertices")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    stubs = np.repeat(np.arange(n), d)
    for attempt in range(1, max_attempts + 1):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        if (lo == hi).any():
            continue
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        nb: list[list[int]] = [[] for _ in range(n)]
        for u, v in zip(lo.tolist(), hi.tolist()):
            nb[u].append(v)
            nb[v].append(u)
        return RegularGraph(n, d, tuple(tuple(sorted(x)) for x in nb), attempts=attempt)
    raise RejectionLimitExceeded(f"no simple pairing in {max_attempts} attempts")


def closed_neighborhood(H: RegularGraph, U: Iterable[int]) -> set[int]:
    U = set(U)
    out = set(U)
    for v in U:
        out.update(H.adj[v])
    return out


@dataclass(frozen=True)
class ExpansionCertificate:
    """Vertex expansion value; ``ratio`` is the minimizing |N[U]|/|U| as a fraction."""

    ratio: Fraction
    mode: str  # "exact" or "estimated"
    witness: tuple[int, ...] | None = None
    samples: int = 0

    @property
    def lam(self) -> float:
        return float(self.ratio - 1)

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x)


def _subset_closed_nbhd_masks(nmask: list[int], n: int) -> np.ndarray:
    """Bitmask of N[U] for every bitmask U over n vertices (n <= 30)."""
    out = np.zeros(1 << n, dtype=np.uint32)
    for i in range(n):
        lo = 1 << i
        out[lo : 2 * lo] = out[:lo] | np.uint32(nmask[i])
    return out


def _closed_masks(adj) -> list[int]:
    return [(1 << u) | sum(1 << v for v in nb) for u, nb in enumerate(adj)]


def vertex_expansion(
    H: RegularGraph,
    mode: str = "exact",
    budget: int = 1000,
    seed: int = 0,
    exact_limit: int = EXACT_LIMIT,
) -> ExpansionCertificate:
    """Minimum of |N[U]|/|U| - 1 over nonempty U with |U| <= n/2.

    ``exact`` enumerates every such U (n <= exact_limit).  ``estimated``
    minimizes over ``budget`` random sets and therefore only upper-bounds the
    true value.
    """
    n = H.n
    half = n // 2
    if half == 0:
        raise ValueError("expansion needs at least two vertices")
    nmask = _closed_masks(H.adj)
    if mode == "exact":
        if n > exact_limit:
            raise ExactLimitExceeded(f"n={n} above exact limit {exact_limit}")
        nb = _subset_closed_nbhd_masks(nmask, n)
        u = np.arange(1 << n, dtype=np.uint32)
        usize = _popcount(u).astype(np.int64)
        nsize = _popcount(nb).astype(np.int64)
        ok = (usize >= 1) & (usize <= half)
        idx = np.flatnonzero(ok)
        ratios = nsize[idx] / usize[idx]
        # float screen, then exact fractions among the near-minimal sets
        near = idx[ratios <= ratios.min() + 1e-9]
        fr = [Fraction(int(nsize[c]), int(usize[c])) for c in near]
        best = int(near[fr.index(min(fr))])
        witness = tuple(v for v in range(n) if best >> v & 1)
        return ExpansionCertificate(Fraction(int(nsize[best]), int(usize[best])), "exact", witness)
    if mode == "estimated":
        if budget <= 0:
            raise BudgetZero("estimated mode needs a positive sample budget")
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
        best_ratio = None
        best_set = None
        for _ in range(budget):
            size = int(rng.integers(1, half + 1))
            U = rng.choice(n, size=size, replace=False)
            fr = Fraction(len(closed_neighborhood(H, U.tolist())), size)
            if best_ratio is None or fr < best_ratio:
                best_ratio, best_set = fr, tuple(sorted(U.tolist()))
        return ExpansionCertificate(best_ratio, "estimated", best_set, samples=budget)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class PowerGraph:
    """H^k: u ~ w iff dist_H(u, w) <= k; every vertex carries a loop."""

    base: RegularGraph
    k: int
    adj: tuple[frozenset[int], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.base.n

    def adjacent(self, u: int, w: int) -> bool:
        return w in self.adj[u]

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for u, nb in enumerate(self.adj):
            m[u, list(nb)] = True
        return m

    def ball_sizes(self) -> np.ndarray:
        return np.array([len(nb) for nb in self.adj], dtype=np.int64)

    def masks(self) -> list[int]:
        return [sum(1 << v for v in nb) for nb in self.adj]


def bfs_distances(H: RegularGraph, src: int, depth: int | None = None) -> dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if depth is not None and dist[u] >= depth:
            continue
        for w in H.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def graph_power(H: RegularGraph, k: int) -> PowerGraph:
    if k < 0:
        raise ValueError("power exponent must be non-negative")
    adj = tuple(frozenset(bfs_distances(H, u, k)) for u in range(H.n))
    return PowerGraph(H, k, adj)


def graph_powers(H: RegularGraph, kmax: int) -> list[PowerGraph]:
    """H^0 .. H^kmax from one BFS per vertex."""
    dists = [bfs_distances(H, u, kmax) for u in range(H.n)]
    out = []
    for k in range(kmax + 1):
        adj = tuple(frozenset(w for w, dw in dist.items() if dw <= k) for dist in dists)
        out.append(PowerGraph(H, k, adj))
    return out


def check_expander_bound(
    H: RegularGraph,
    cert: ExpansionCertificate,
    k: int,
    X: Iterable[int],
    Y: Iterable[int],
    power: PowerGraph | None = None,
) -> str:
    """Audit |X||Y| <= n^2 (1+lambda)^-k for X, Y with no H^k edge between them.

    Returns ``"vacuous"``, ``"bound_holds"`` or ``"violation"``.  Passing a
    precomputed ``power`` (of exponent k) skips the BFS.
    """
    if not cert.exact:
        raise NonExactCertificate("bound audit requires an exact certificate")
    X, Y = set(X), set(Y)
    if not X or not Y:
        return "bound_holds"
    if power is None:
        power = graph_power(H, k)
    elif power.k != k:
        raise ValueError(f"power graph has exponent {power.k}, expected {k}")
    for x in X:
        if not power.adj[x].isdisjoint(Y):
            return "vacuous"
    # (1+lambda)^-k = (|U|/|N[U]|)^k, compared exactly
    p, q = cert.ratio.numerator, cert.ratio.denominator
    return "bound_holds" if len(X) * len(Y) * p**k <= H.n**2 * q**k else "violation"
