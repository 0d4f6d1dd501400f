import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spanreg.errors import CapabilityError, DomainError
from spanreg.graph import Graph, complete_bipartite, gnp
from spanreg.harness import generate_instance
from spanreg.regularity import (RegularPair, classify_case, detect_alpha_extremal, embed_spanning_path_blowup,
                                is_eps_regular, is_super_regular, regular_partition, slice_pair,
                                super_regularize)


def random_pair(seed: int, na: int, nb: int, p: float):
    rng = random.Random(seed)
    edges = [(u, na + v) for u in range(na) for v in range(nb) if rng.random() < p]
    return Graph(na + nb, edges), list(range(na)), list(range(na, na + nb))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 9), st.integers(2, 9), st.floats(0.1, 0.9),
       st.integers(2, 10))
def test_witnesses_are_genuine(seed, na, nb, p, eps20):
    g, a, b = random_pair(seed, na, nb, p)
    pair = RegularPair(g, a, b, Fraction(eps20, 20))
    for mode in ("exact", "sampled"):
        res = is_eps_regular(pair, mode, trials=50, seed=seed)
        if not res.regular:
            x, y = res.witness
            assert len(x) >= pair.eps * na and len(y) >= pair.eps * nb
            e = sum(1 for u in x for v in y if g.has_edge(u, v))
            assert abs(Fraction(e, len(x) * len(y)) - pair.d) > pair.eps
    # sampled never contradicts exact in the "irregular" direction
    if is_eps_regular(pair, "exact").regular:
        assert is_eps_regular(pair, "sampled", trials=50, seed=seed).regular


def test_complete_pair_is_regular_for_any_eps():
    g = complete_bipartite(6, 6)
    assert is_eps_regular(RegularPair(g, range(6), range(6, 12), Fraction(1, 100)), "exact")


def test_exact_mode_has_a_size_cap():
    g = complete_bipartite(15, 15)
    with pytest.raises(CapabilityError):
        is_eps_regular(RegularPair(g, range(15), range(15, 30), Fraction(1, 10)), "exact")


def test_pair_validation():
    g = complete_bipartite(2, 2)
    with pytest.raises(DomainError):
        RegularPair(g, [0, 1], [1, 2], Fraction(1, 4))
    with pytest.raises(DomainError):
        RegularPair(g, [], [2], Fraction(1, 4))


def test_slice_doubles_eps_and_keeps_density():
    g, a, b = random_pair(0, 12, 12, 0.5)
    pair = RegularPair(g, a, b, Fraction(9, 20))
    assert is_eps_regular(pair, "exact")
    pair.verified = True
    sliced = slice_pair(pair, a[:10], b[:10], Fraction(2, 3))
    assert sliced.eps == 2 * pair.eps
    assert abs(sliced.d - pair.d) <= pair.eps
    with pytest.raises(DomainError):
        slice_pair(pair, a[:2], b[:2], Fraction(2, 3))


def test_super_regularize_meets_degree_scan():
    g, a, b = random_pair(3, 40, 44, 0.6)
    pair = RegularPair(g, a, b, Fraction(1, 5))
    res = super_regularize(pair, multiple=2)
    assert res.ok
    out = res.pair
    assert len(out.a) == len(out.b) and len(out.a) % 2 == 0
    assert is_super_regular(out, pair.d - 3 * pair.eps)


def test_partition_properties_on_dense_random():
    g = gnp(200, 0.6, random.Random(1))
    part = regular_partition(g, Fraction(1, 4), Fraction(3, 10), 4, seed=0)
    chk = part.checks
    assert chk["disjoint_cover"] and chk["equal_cluster_sizes"] and chk["P1_exceptional_small"]
    assert chk["reduced_edge_predicate"]
    assert part.reduced.num_edges() >= 5


def test_detector_on_bipartite_and_dense():
    g = complete_bipartite(8, 8)
    hit = detect_alpha_extremal(g, Fraction(1, 10))
    assert hit is not None
    a, b = hit
    assert all(not g.has_edge(u, v) for u in a for v in b if u != v)
    assert detect_alpha_extremal(gnp(16, 0.9, random.Random(0)), Fraction(1, 10)) is None
    with pytest.raises(DomainError):
        detect_alpha_extremal(g, Fraction(1, 2))


@pytest.mark.parametrize("template,params,kind", [
    ("extremal_one", {"n": 40, "r": 4}, "extremal_one"),
    ("extremal_two", {"n": 40, "r": 4}, "extremal_two"),
    ("dense_random", {"n": 80, "r": 4, "p": 0.7}, "non_extremal"),
])
def test_classify_templates(template, params, kind):
    g = generate_instance(template, params, 0).graph
    assert classify_case(g, params["r"]).kind == kind


def test_pair_embedding_covers_both_sides():
    g = complete_bipartite(12, 12)
    pair = RegularPair(g, range(12), range(12, 24), Fraction(1, 10))
    res = embed_spanning_path_blowup(pair, 3)
    covered = sorted(v for col in res.columns for v in col)
    assert covered == list(range(24))
    with pytest.raises(DomainError):
        embed_spanning_path_blowup(pair, 5)
