import itertools

import networkx as nx
from hypothesis import given, settings, strategies as st

from conftest import to_nx
from spanreg.blowup import BlowupSpec, build_blowup
from spanreg.graph import Graph, complete_graph, cycle_graph, petersen_graph
from spanreg.verifier import vertex_connectivity, verify_certificate


def brute_kappa(g: Graph) -> int:
    """Smallest vertex cut by enumeration; n-1 for complete graphs."""
    for k in range(g.n - 1):
        for cut in itertools.combinations(range(g.n), k):
            rest = [v for v in range(g.n) if v not in cut]
            h = to_nx(g).subgraph(rest)
            if not nx.is_connected(h):
                return k
    return g.n - 1


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 8))
    p = draw(st.floats(0.2, 1.0))
    bits = draw(st.lists(st.floats(0, 1), min_size=n * n, max_size=n * n))
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if bits[u * n + v] < p])


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_connectivity_against_networkx_and_enumeration(g):
    k = vertex_connectivity(g)
    assert k == brute_kappa(g)
    if g.n > 1:
        assert k == nx.node_connectivity(to_nx(g))


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.integers(0, 7))
def test_bounded_connectivity_is_min_with_bound(g, bound):
    assert vertex_connectivity(g, bound) == min(vertex_connectivity(g), bound)


def test_known_values():
    assert vertex_connectivity(petersen_graph()) == 3
    assert vertex_connectivity(complete_graph(6)) == 5
    assert vertex_connectivity(cycle_graph(9)) == 2
    assert vertex_connectivity(build_blowup(BlowupSpec("cycle", 12, 3))) == 6


def test_certificate_checks_each_property():
    host = complete_graph(6)
    ok = verify_certificate(host, cycle_graph(6).edges, 2)
    assert ok.ok and ok.connectivity == 2
    missing = verify_certificate(cycle_graph(6), [(0, 2), (2, 4), (4, 0), (1, 3), (3, 5), (5, 1)], 2)
    assert not missing.is_subgraph and not missing.ok
    two_triangles = verify_certificate(host, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], 2)
    assert two_triangles.is_r_regular and not two_triangles.connectivity_lower_bound_met
    path = verify_certificate(host, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], 2)
    assert path.is_spanning and not path.is_r_regular
    partial = verify_certificate(host, [(0, 1), (1, 2), (2, 0)], 2)
    assert not partial.is_spanning


def test_report_is_json_ready():
    import json
    rep = verify_certificate(complete_graph(4), cycle_graph(4).edges, 2).report()
    json.dumps(rep)
    assert rep["ok"] and rep["checks"]["is_r_regular"]
