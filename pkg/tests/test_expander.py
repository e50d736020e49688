import itertools
from fractions import Fraction

import numpy as np
import pytest

from compunion.errors import (
    BudgetZero,
    ExactLimitExceeded,
    InfeasibleDegree,
    NonExactCertificate,
    RejectionLimitExceeded,
)
from compunion.expander import (
    ExpansionCertificate,
    RegularGraph,
    check_expander_bound,
    closed_neighborhood,
    graph_power,
    graph_powers,
    random_regular,
    vertex_expansion,
)

K4 = RegularGraph.from_edges(4, itertools.combinations(range(4), 2))
C6 = RegularGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
PATH3 = RegularGraph(3, 0, ((1,), (0, 2), (1,)))  # not regular; only used for powers


def brute_expansion(H: RegularGraph) -> Fraction:
    best = None
    for size in range(1, H.n // 2 + 1):
        for U in itertools.combinations(range(H.n), size):
            fr = Fraction(len(closed_neighborhood(H, U)), size)
            best = fr if best is None or fr < best else best
    return best


def test_k4_is_unique_cubic_on_four():
    H = random_regular(4, 3, 123)
    assert sorted(H.edges()) == sorted(itertools.combinations(range(4), 2))


def test_parity_and_degree_errors():
    with pytest.raises(InfeasibleDegree):
        random_regular(5, 3, 0)
    with pytest.raises(InfeasibleDegree):
        random_regular(3, 3, 0)


def test_random_regular_simple_and_deterministic():
    H = random_regular(10, 3, 7)
    assert H.is_simple_regular()
    assert random_regular(10, 3, 7) == H
    assert H.attempts >= 1


@pytest.mark.parametrize("n,d", [(20, 3), (50, 3), (12, 4), (1000, 3)])
def test_random_regular_degree_audit(n, d):
    for seed in range(3):
        assert random_regular(n, d, seed).is_simple_regular()


def test_rejection_cap():
    # a simple 5-regular pairing on 6 vertices (K6) is rare; one attempt rarely suffices
    with pytest.raises(RejectionLimitExceeded):
        for seed in range(50):
            random_regular(6, 5, seed, max_attempts=1)


def test_closed_neighborhood():
    assert closed_neighborhood(K4, []) == set()
    assert closed_neighborhood(K4, range(4)) == set(range(4))
    assert closed_neighborhood(K4, [0]) == {0, 1, 2, 3}


def test_expansion_k4():
    cert = vertex_expansion(K4)
    assert cert.ratio == Fraction(2) and cert.lam == 1.0
    assert len(cert.witness) == 2


def test_expansion_c6():
    cert = vertex_expansion(C6)
    assert cert.ratio == Fraction(5, 3)
    assert cert.ratio == brute_expansion(C6)
    assert abs(cert.lam - 2 / 3) < 1e-12


def test_expansion_matches_brute_force():
    for seed in range(6):
        H = random_regular(12, 3, seed)
        cert = vertex_expansion(H)
        assert cert.ratio == brute_expansion(H)
        assert Fraction(len(closed_neighborhood(H, cert.witness)), len(cert.witness)) == cert.ratio
        assert cert.lam > 0


def test_estimated_upper_bounds_exact():
    H = random_regular(16, 3, 2)
    exact = vertex_expansion(H)
    est = vertex_expansion(H, "estimated", budget=300, seed=5)
    assert not est.exact and est.ratio >= exact.ratio
    with pytest.raises(BudgetZero):
        vertex_expansion(H, "estimated", budget=0)
    with pytest.raises(ExactLimitExceeded):
        vertex_expansion(random_regular(22, 3, 0))


def test_power_zero_has_only_loops():
    p = graph_power(K4, 0)
    assert all(p.adj[v] == {v} for v in range(4))


def test_power_of_path():
    p = graph_power(PATH3, 2)
    assert all(p.adj[v] == {0, 1, 2} for v in range(3))


def test_k4_first_power():
    p = graph_power(K4, 1)
    assert all(p.adj[v] == set(range(4)) for v in range(4))


def test_powers_monotone_and_match_boolean_closure():
    for seed in range(3):
        H = random_regular(40, 3, seed)
        A = H.matrix() | np.eye(40, dtype=bool)
        closure = np.eye(40, dtype=bool)
        powers = graph_powers(H, 6)
        for k in range(7):
            assert np.array_equal(powers[k].matrix(), closure)
            assert powers[k].adj == graph_power(H, k).adj
            if k:
                assert (powers[k - 1].matrix() <= powers[k].matrix()).all()
            closure = (closure.astype(int) @ A.astype(int)) > 0


def test_powers_by_repeated_squaring():
    H = random_regular(64, 3, 9)
    A = H.matrix() | np.eye(64, dtype=bool)
    sq = A
    for e in range(1, 4):
        sq = (sq.astype(int) @ sq.astype(int)) > 0
        assert np.array_equal(graph_power(H, 2**e).matrix(), sq)


def test_bound_examples():
    cert = vertex_expansion(K4)
    assert check_expander_bound(K4, cert, 1, [], [0]) == "bound_holds"
    assert check_expander_bound(K4, cert, 1, [0, 1], [0, 1]) == "vacuous"
    for X in ([0], [0, 1]):
        for Y in ([2], [2, 3]):
            assert check_expander_bound(K4, cert, 2, X, Y) == "vacuous"


def test_bound_rejects_estimates():
    est = ExpansionCertificate(Fraction(2), "estimated")
    with pytest.raises(NonExactCertificate):
        check_expander_bound(K4, est, 1, [0], [1])


def test_bound_never_violated_small():
    for seed in range(2):
        H = random_regular(8, 3, seed)
        cert = vertex_expansion(H)
        for k in (1, 2):
            pw = graph_power(H, k)
            for assign in itertools.product(range(3), repeat=8):
                X = [v for v in range(8) if assign[v] == 1]
                Y = [v for v in range(8) if assign[v] == 2]
                assert check_expander_bound(H, cert, k, X, Y, power=pw) != "violation"
