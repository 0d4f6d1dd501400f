import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import to_nx
from spanreg.errors import DomainError
from spanreg.graph import (Graph, complete_bipartite, complete_graph, cycle_graph, gnp,
                           petersen_graph)
from spanreg.oracle import (FOUND, NONE, UNKNOWN, brute_force_spanning, build_divisibility_example,
                            build_tightness_example, find_hamilton_cycle, search_spanning_blowup_cycle)


def has_hamilton_cycle(g: Graph) -> bool:
    if g.n < 3:
        return False
    for perm in itertools.permutations(range(1, g.n)):
        cyc = (0,) + perm
        if all(g.has_edge(cyc[i], cyc[(i + 1) % g.n]) for i in range(g.n)):
            return True
    return False


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 7), st.lists(st.booleans(), min_size=21, max_size=21))
def test_hamilton_matches_permutation_search(n, coins):
    pairs = list(itertools.combinations(range(n), 2))
    g = Graph(n, [e for e, keep in zip(pairs, coins) if keep])
    res = find_hamilton_cycle(g)
    assert res.found == has_hamilton_cycle(g)
    if res.found:
        assert res.certificate.ok


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 8), st.lists(st.booleans(), min_size=28, max_size=28))
def test_three_regular_results_are_certified(n, coins):
    if n % 2:
        n += 1
    pairs = list(itertools.combinations(range(n), 2))
    g = Graph(n, [e for e, keep in zip(pairs, coins) if keep])
    res = brute_force_spanning(g, 3)
    if res.found:
        sub = to_nx(Graph(n, res.edges))
        assert all(d == 3 for _, d in sub.degree()) and nx.node_connectivity(sub) >= 3


def test_known_instances():
    assert brute_force_spanning(petersen_graph(), 3).found
    assert brute_force_spanning(complete_graph(8), 4).found
    assert brute_force_spanning(complete_bipartite(3, 3), 3).found
    assert brute_force_spanning(cycle_graph(8), 3).status == NONE


def test_budget_gives_unknown():
    res = brute_force_spanning(complete_graph(14), 5, budget=3)
    assert res.status in (UNKNOWN, FOUND)
    g = gnp(14, 0.5, random.Random(1))
    assert brute_force_spanning(g, 4, budget=5).status == UNKNOWN
    assert brute_force_spanning(g, 4).status == FOUND


def test_odd_product_rejected():
    with pytest.raises(DomainError):
        brute_force_spanning(complete_graph(5), 3)


def test_tightness_examples():
    g = build_tightness_example(12, 4, slack=0)
    assert g.n == 12 and min(g.degrees()) == 7
    loose = build_tightness_example(12, 4, slack=1)
    assert loose.n == 13 and nx.node_connectivity(to_nx(loose)) == 3
    with pytest.raises(DomainError):
        build_tightness_example(14, 3)


def test_divisibility_example_and_blowup_search():
    g = build_divisibility_example(14)
    assert min(g.degrees()) >= 8
    assert search_spanning_blowup_cycle(g, 2).status == NONE
    assert search_spanning_blowup_cycle(complete_graph(8), 2).status == FOUND
    with pytest.raises(DomainError):
        build_divisibility_example(12)
