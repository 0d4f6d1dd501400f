import json
import random

import pytest
from hypothesis import given, strategies as st

from conftest import to_nx
from spanreg.errors import DomainError
from spanreg.graph import (Graph, common_neighbourhood, complete_bipartite, complete_graph, cycle_graph,
                           density, gnp, induced, is_connected, min_degree, petersen_graph)


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


def test_empty_common_neighbourhood_rejected():
    with pytest.raises(DomainError):
        common_neighbourhood(Graph(2), [])


def test_rejects_bad_edges():
    with pytest.raises(DomainError):
        Graph(3, [(0, 0)])
    with pytest.raises(DomainError):
        Graph(3, [(0, 3)])
    with pytest.raises(DomainError):
        Graph(-1)


def test_duplicates_and_orientation_collapse():
    g = Graph(3, [(0, 1), (1, 0), (2, 1)])
    assert g.num_edges() == 2
    assert g.sorted_edges() == [(0, 1), (1, 2)]


@given(graphs())
def test_json_round_trip(g):
    assert Graph.from_json(json.loads(g.dumps())) == g


@given(graphs())
def test_degrees_and_connectivity_match_networkx(g):
    import networkx as nx
    h = to_nx(g)
    assert g.degrees() == [h.degree(v) for v in range(g.n)]
    assert is_connected(g) == nx.is_connected(h)


@given(graphs(), st.data())
def test_common_neighbourhood_and_induced(g, data):
    s = data.draw(st.lists(st.integers(0, g.n - 1), unique=True, min_size=1, max_size=3))
    want = set(range(g.n))
    for v in s:
        want &= set(g.adj[v])
    assert set(common_neighbourhood(g, s)) == want
    sub, order = induced(g, s)
    assert sub.n == len(s)
    assert sub.num_edges() == sum(1 for u in s for v in s if u < v and g.has_edge(u, v))


def test_named_graphs():
    assert min_degree(petersen_graph()) == 3 and petersen_graph().num_edges() == 15
    assert complete_graph(5).num_edges() == 10
    assert cycle_graph(6).degrees() == [2] * 6
    kb = complete_bipartite(3, 4)
    assert density(kb, range(3), range(3, 7)) == 1


def test_gnp_is_seeded():
    assert gnp(30, 0.3, random.Random(4)) == gnp(30, 0.3, random.Random(4))


def test_dot_output():
    text = Graph(3, [(0, 1)]).to_dot("T", {0: "a"})
    assert text.startswith("graph T {") and "0 -- 1;" in text and 'label="a"' in text
