"""Exact search oracles for small graphs: cliques, independent sets, bicliques.

All searches run on Python int bitsets (bit v stands for vertex v).
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import LimitExceeded
from .poset import Graph

CLIQUE_LIMIT = int(os.environ.get("COMPUNION_CLIQUE_LIMIT", 40))
BICLIQUE_LIMIT = int(os.environ.get("COMPUNION_BICLIQUE_LIMIT", 24))


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: tuple
    explored: int
    exact: bool


def _bits_to_list(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def _max_clique_bits(nb: list[int], node_budget: int | None) -> tuple[list[int], int, bool]:
    best: list[int] = []
    explored = 0
    aborted = False

    def color_sort(P: int):
        order, bounds = [], []
        color = 0
        while P:
            color += 1
            Q = P
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~(nb[v] | low)
                P &= ~low
                order.append(v)
                bounds.append(color)
        return order, bounds

    def expand(R: list[int], P: int):
        nonlocal best, explored, aborted
        explored += 1
        if node_budget is not None and explored > node_budget:
            aborted = True
            return
        order, bounds = color_sort(P)
        for idx in range(len(order) - 1, -1, -1):
            if aborted or len(R) + bounds[idx] <= len(best):
                return
            v = order[idx]
            R.append(v)
            NP = P & nb[v]
            if NP:
                expand(R, NP)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << v)

    n = len(nb)
    if n:
        expand([], (1 << n) - 1)
    return sorted(best), explored, not aborted


def max_clique_exact(g: Graph, limit: int | None = None) -> OracleResult:
    """Maximum clique by branch and bound with greedy-coloring bounds.

    ``limit`` caps the number of search nodes; when it runs out the best
    clique so far is returned with ``exact=False``.
    """
    best, explored, exact = _max_clique_bits(g.neighbor_bits(), limit)
    return OracleResult(len(best), tuple(best), explored, exact)


def max_independent_exact(g: Graph, limit: int | None = None) -> OracleResult:
    return max_clique_exact(g.complement(), limit)


def enumerate_maximal_cliques(g: Graph, limit: int = CLIQUE_LIMIT) -> list[tuple[int, ...]]:
    """Every maximal clique (Bron-Kerbosch with pivoting), sorted."""
    if g.n > limit:
        raise LimitExceeded(f"n={g.n} above maximal-clique limit {limit}")
    nb = g.neighbor_bits()
    out: list[tuple[int, ...]] = []

    def bk(R: list[int], P: int, X: int):
        if not P and not X:
            out.append(tuple(sorted(R)))
            return
        # pivot with most neighbors in P
        pivot = max(_bits_to_list(P | X), key=lambda u: (P & nb[u]).bit_count())
        for v in _bits_to_list(P & ~nb[pivot]):
            R.append(v)
            bk(R, P & nb[v], X & nb[v])
            R.pop()
            P &= ~(1 << v)
            X |= 1 << v

    if g.n:
        bk([], (1 << g.n) - 1, 0)
    return sorted(out)


def max_balanced_biclique_exact(
    g: Graph, limit: int = BICLIQUE_LIMIT, node_budget: int | None = None
) -> OracleResult:
    """Largest t with disjoint X, Y of size t and every X-Y pair adjacent.

    Edges inside X or Y are allowed.  The search grows X in increasing vertex
    order and takes Y from the common neighborhood of X above min(X), which
    loses nothing since the part holding the smaller minimum can be called X.
    """
    n = g.n
    if n > limit:
        raise LimitExceeded(f"n={n} above biclique limit {limit}")
    nb = g.neighbor_bits()
    full = (1 << n) - 1
    best_t = 0
    best = ((), ())
    explored = 0
    aborted = False

    def record(X: list[int], cn: int):
        nonlocal best_t, best
        ys = _bits_to_list(cn)
        t = min(len(X), len(ys))
        if t > best_t:
            best_t = t
            best = (tuple(sorted(X[:t])), tuple(ys[:t]))

    def grow(X: list[int], cn: int, nxt: int):
        nonlocal explored, aborted
        explored += 1
        if node_budget is not None and explored > node_budget:
            aborted = True
            return
        record(X, cn)
        if cn.bit_count() <= best_t:
            return
        for v in range(nxt, n):
            if aborted:
                return
            # X can grow by at most n - v more vertices
            if len(X) + (n - v) <= best_t:
                return
            c2 = cn & nb[v]
            if c2.bit_count() <= best_t:
                continue
            X.append(v)
            grow(X, c2, v + 1)
            X.pop()

    for x0 in range(n):
        if n - x0 <= 2 * best_t or aborted:
            break
        above = full & ~((1 << (x0 + 1)) - 1)
        cn = nb[x0] & above
        if cn.bit_count() <= best_t:
            continue
        grow([x0], cn, x0 + 1)

    return OracleResult(best_t, best, explored, not aborted)


def certify_clique(g: Graph, vertices) -> bool:
    vs = list(vertices)
    return len(set(vs)) == len(vs) and g.is_clique(vs)


def certify_independent(g: Graph, vertices) -> bool:
    vs = list(vertices)
    return len(set(vs)) == len(vs) and g.is_independent(vs)


def certify_biclique(g: Graph, X, Y) -> bool:
    X, Y = list(X), list(Y)
    if len(X) != len(Y) or set(X) & set(Y) or len(set(X)) != len(X) or len(set(Y)) != len(Y):
        return False
    return all(g.has_edge(x, y) for x in X for y in Y)
