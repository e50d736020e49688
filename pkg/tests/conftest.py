"""Brute-force reference implementations, deliberately naive."""
import itertools

import numpy as np
import pytest

from compunion.poset import Graph, StrictOrder, transitive_closure


def brute_max_clique(g: Graph) -> int:
    best = 0
    for size in range(1, g.n + 1):
        if any(all(g.has_edge(u, v) for u, v in itertools.combinations(S, 2))
               for S in itertools.combinations(range(g.n), size)):
            best = size
        else:
            break
    return best


def brute_balanced_biclique(g: Graph) -> int:
    """Largest t over all 3-way assignments (X, Y, neither)."""
    best = 0
    for assign in itertools.product(range(3), repeat=g.n):
        X = [v for v, c in enumerate(assign) if c == 1]
        Y = [v for v, c in enumerate(assign) if c == 2]
        t = min(len(X), len(Y))
        if t > best and all(g.has_edge(x, y) for x in X for y in Y):
            best = t
    return best


def brute_longest_chain(p: StrictOrder) -> int:
    """Longest chain by trying every subset (n <= ~16)."""
    best = 0
    for mask in range(1 << p.n):
        S = [v for v in range(p.n) if mask >> v & 1]
        if len(S) > best and all(p.comparable(u, v) for u, v in itertools.combinations(S, 2)):
            best = len(S)
    return best


def random_order(rng: np.random.Generator, n: int, density: float) -> StrictOrder:
    """Random strict order: forward pairs of a random permutation, then closed."""
    perm = rng.permutation(n)
    pairs = [(int(perm[i]), int(perm[j])) for i in range(n) for j in range(i + 1, n)
             if rng.random() < density]
    return transitive_closure(pairs, n)


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                                if rng.random() < p])


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
