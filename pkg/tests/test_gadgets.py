import pytest

from spanreg.chain import NEEDS_FULL, NEEDS_PM, End
from spanreg.errors import DomainError
from spanreg.gadgets import (ABSORBER_KINDS, absorb_pattern, absorber_pattern, bridge_pattern,
                             check_pattern_contract, glue, k1r_pattern, star_pair_pattern)
from spanreg.graph import complete_graph
from spanreg.toys import embedding_contract, toy_assemblies


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 7])
def test_all_toys_close_up(r):
    results = toy_assemblies(r)
    assert results
    for res in results:
        assert res.ok, res.report()
        if res.certificate is not None:
            assert res.certificate.connectivity >= r


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
def test_pattern_contracts(r):
    s = (r + 1) // 2
    odd = r % 2 == 1
    for pairs in range(1, s + 1):
        for variant in (("odd1",) if odd else ("even",)):
            assert check_pattern_contract(bridge_pattern(r, pairs, variant), r) == []
    for kind in ABSORBER_KINDS:
        if kind.endswith("odd") == odd:
            assert check_pattern_contract(absorber_pattern(r, kind), r) == []
    tags = (NEEDS_FULL, NEEDS_PM) if odd else (NEEDS_FULL,)
    # odd star pairs start from a pm-tagged end
    star_tag = NEEDS_PM if odd else NEEDS_FULL
    assert check_pattern_contract(star_pair_pattern(r, star_tag), r, star_tag) == []
    for tag in tags:
        try:
            pat = k1r_pattern(r, tag)
        except DomainError:
            continue
        assert check_pattern_contract(pat, r, tag) == []
        for mode in ("interior", "balance", "endgame_odd" if odd else "endgame_even"):
            assert check_pattern_contract(absorb_pattern(r, mode, tag), r, tag) == []


def test_wrong_parity_absorber_rejected():
    with pytest.raises(DomainError):
        absorber_pattern(3, "xi_even")


def test_glue_respects_contract():
    host = complete_graph(60)
    e1 = End(tuple(range(40, 42)), NEEDS_FULL)
    e2 = End(tuple(range(50, 52)), NEEDS_FULL)
    g = glue(host, 4, e1, e2, range(0, 30), 2)
    assert embedding_contract(g, 4, [e1, e2]) == []
    assert not g.vertices() & set(range(30, 40))


def test_toy_filter_by_kind():
    names = [res.name for res in toy_assemblies(3, ["xi_"])]
    assert names and all(n.startswith("xi_") for n in names)
