import pytest

from spanreg.blowup import recognize_path_blowup
from spanreg.chain import FULL, NEEDS_FULL, PM, end_deficit, fill_column_path, internal_links, tuple_size
from spanreg.errors import DomainError, Infeasible
from spanreg.graph import Graph, complete_graph


def test_tuple_size_and_deficits():
    assert [tuple_size(r) for r in (2, 3, 4, 5)] == [1, 2, 2, 3]
    assert end_deficit(4, NEEDS_FULL) == 2


def test_internal_links_alternate_only_when_half():
    assert internal_links(FULL, 4, False) == [FULL] * 4
    assert internal_links(FULL, 4, True) == [FULL, PM, FULL, PM]


@pytest.mark.parametrize("s,half", [(2, False), (2, True), (3, True)])
def test_fill_covers_pool_with_a_column_path(s, half):
    host = complete_graph(30)
    pool = list(range(4 * s))
    res = fill_column_path(host, pool, s, half=half)
    assert sorted(v for c in res.columns for v in c) == pool
    sub = Graph(30, res.edges)
    if not half:
        assert recognize_path_blowup(sub, res.columns)


def test_fill_rejects_bad_pool_and_reports_infeasible():
    with pytest.raises(DomainError):
        fill_column_path(complete_graph(10), range(5), 2)
    with pytest.raises(Infeasible):
        fill_column_path(Graph(8), range(8), 2, restarts=3)
