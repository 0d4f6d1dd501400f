import random

import pytest

from spanreg.errors import DomainError, StageFailure
from spanreg.extremal import ExtremalDecomposition, check_star_family, find_disjoint_stars, solve_extremal_one, \
    solve_extremal_two
from spanreg.graph import Graph, complete_graph, cycle_graph
from spanreg.harness import generate_instance
from spanreg.oracle import build_tightness_example
from spanreg.verifier import verify_certificate


@pytest.mark.parametrize("n,r,c", [(40, 2, 0), (40, 3, 1), (44, 4, 2), (60, 4, 0), (48, 5, 0), (56, 6, 1)])
def test_case_one_templates(n, r, c):
    inst = generate_instance("extremal_one", {"n": n, "r": r, "c": c}, 1)
    cert = solve_extremal_one(inst.graph, inst.decomposition(), r, seed=1)
    assert verify_certificate(inst.graph, cert.sub_edges, r, exact_connectivity=True).ok


@pytest.mark.parametrize("n,r,m", [(40, 2, 0), (40, 3, 1), (44, 4, 2), (60, 4, 0), (48, 5, 0)])
def test_case_two_templates(n, r, m):
    inst = generate_instance("extremal_two", {"n": n, "r": r, "m": m}, 1)
    cert = solve_extremal_two(inst.graph, inst.decomposition(), r, seed=1)
    assert verify_certificate(inst.graph, cert.sub_edges, r, exact_connectivity=True).ok


def test_tightness_slack0_via_merge():
    g = build_tightness_example(20, 4, slack=0)
    a = tuple(range(8))
    c = tuple(range(8, 12))
    b = tuple(range(12, 20))
    cert = solve_extremal_one(g, ExtremalDecomposition("one", a, b, c), 4)
    assert cert.ok


def test_odd_size_gap_fails_with_witness():
    inst = generate_instance("extremal_one", {"n": 36, "r": 3, "c": 1}, 0)
    with pytest.raises(StageFailure) as info:
        solve_extremal_one(inst.graph, inst.decomposition(), 3)
    rep = info.value.report()
    assert rep["witness"]["attempts"]
    assert all("stage" in a for a in rep["witness"]["attempts"])


def test_decomposition_validation():
    g = complete_graph(6)
    with pytest.raises(DomainError):
        ExtremalDecomposition("one", (0, 1), (2, 3), ()).validate(g)
    with pytest.raises(DomainError):
        ExtremalDecomposition("two", (0, 1, 2), (3, 4, 5), (), m=1).validate(g)
    with pytest.raises(DomainError):
        solve_extremal_one(cycle_graph(6), ExtremalDecomposition("one", (0, 1, 2), (3, 4, 5)), 2)


def test_stars_on_a_cycle_and_bad_input():
    g = cycle_graph(12)
    stars = find_disjoint_stars(g, 2, 1)
    assert len(stars) == 4 and check_star_family(g, stars, 1)
    assert not check_star_family(g, [(0, (1,)), (1, (2,))], 1)
    with pytest.raises(DomainError):
        find_disjoint_stars(g, 2, 3)       # min degree 2 < m+s-1


def test_stars_fallback_search():
    rng = random.Random(3)
    # 4-regular on 21 vertices, four K_{1,3} needed: the greedy alone can stall here
    for _ in range(10):
        n, need = 21, 4
        adj = [set() for _ in range(n)]
        for v in range(n):
            while len(adj[v]) < need:
                free = [u for u in range(n) if u != v and u not in adj[v]]
                low = min(len(adj[u]) for u in free)
                u = rng.choice([u for u in free if len(adj[u]) == low])
                adj[v].add(u)
                adj[u].add(v)
        g = Graph(n, [(u, v) for u in range(n) for v in adj[u] if u < v])
        stars = find_disjoint_stars(g, 2, 3)
        assert check_star_family(g, stars, 3) and len(stars) == 4
