import pytest

from spanreg.blowup import BlowupSpec, blowup_degree_profile, build_blowup, recognize_path_blowup
from spanreg.errors import DomainError
from spanreg.graph import Graph
from spanreg.verifier import vertex_connectivity


@pytest.mark.parametrize("k,t", [(5, 2), (6, 3), (8, 1), (3, 3)])
def test_full_cycle_blowup(k, t):
    spec = BlowupSpec("cycle", k, t)
    g = build_blowup(spec)
    assert g.n == k * t
    assert set(g.degrees()) == {2 * t}
    assert set(blowup_degree_profile(spec).values()) == {2 * t}


@pytest.mark.parametrize("k,t", [(4, 2), (6, 3), (10, 2)])
def test_half_cycle_blowup(k, t):
    g = build_blowup(BlowupSpec("cycle", k, t, half=True))
    assert set(g.degrees()) == {2 * t - 1}
    assert vertex_connectivity(g) == 2 * t - 1


def test_path_profile_has_lighter_ends():
    # links: reduced, full, reduced
    prof = blowup_degree_profile(BlowupSpec("path", 4, 3, half=True))
    assert prof == {0: 2, 1: 5, 2: 5, 3: 2}


def test_invalid_specs():
    for spec in (BlowupSpec("cycle", 2, 1), BlowupSpec("cycle", 5, 2, half=True),
                 BlowupSpec("path", 3, 0), BlowupSpec("tree", 3, 1)):
        with pytest.raises(DomainError):
            build_blowup(spec)


def test_recognize_path_blowup():
    spec = BlowupSpec("path", 3, 2, half=True)
    g = build_blowup(spec)
    cols = [tuple(spec.block(i)) for i in range(3)]
    assert recognize_path_blowup(g, cols, half=True)
    assert not recognize_path_blowup(g, cols, half=False)
    assert not recognize_path_blowup(Graph(g.n, list(g.edges)[1:]), cols, half=True)
