"""Bookkeeping shared by the solvers: collected edges, used vertices, stage log,
and the final covering step that closes a chain over whatever is left."""

from __future__ import annotations

from typing import Iterable, Sequence

from .chain import FULL, NEEDS_FULL, NEEDS_PM, End, fill_column_path, link_for_tag, tuple_size
from .errors import Infeasible, StageFailure
from .gadgets import GadgetEmbedding
from .graph import Edge, Graph, norm_edge
from .regularity import EMBED_SIDE_CAP, RegularPair, embed_spanning_path_blowup


class Assembly:
    def __init__(self, host: Graph, r: int) -> None:
        self.host = host
        self.r = r
        self.s = tuple_size(r)
        self.edges: set[Edge] = set()
        self.used: set[int] = set()
        self.log: list[dict] = []

    def take(self, piece: GadgetEmbedding | None = None, edges: Iterable[Edge] = (),
             vertices: Iterable[int] = (), stage: str = "", **note) -> None:
        if piece is not None:
            edges = list(edges) + list(piece.edges)
            vertices = list(vertices) + list(piece.vertices())
            note.setdefault("kind", piece.kind)
        edges = [norm_edge(*e) for e in edges]
        clash = self.edges.intersection(edges)
        if clash:
            raise StageFailure(stage or "assembly", "an edge was chosen twice",
                               {"edges": sorted(clash)})
        self.edges.update(edges)
        for u, v in edges:
            self.used.update((u, v))
        self.used.update(vertices)
        if stage:
            self.log.append({"stage": stage, **note})

    def free(self, pool: Iterable[int]) -> list[int]:
        return sorted(set(pool) - self.used)


def _tag_after(r: int, link: str) -> str:
    if r % 2 == 0:
        return NEEDS_FULL
    return NEEDS_PM if link == FULL else NEEDS_FULL


def close_chain(host: Graph, r: int, start: End, end: End, pool: Sequence[int],
                split: tuple[Sequence[int], Sequence[int]] | None = None, seed: int = 0):
    """Cover ``pool`` by a chain from ``start`` to ``end``; return its edges.

    With ``split = (a, b)`` the columns alternate a, b (a bipartite pair,
    both halves the same size); otherwise the pool is a near-clique and is
    split into two halves here when the column count is even.  Pools larger
    than the embedding cap are tiled: chunks are covered one at a time from
    the live end, and only the last chunk is joined to ``end``.
    """
    s = tuple_size(r)
    half = r % 2 == 1
    pool = sorted(pool)
    if len(pool) % s:
        raise Infeasible("close", f"{len(pool)} leftover vertices not divisible by s={s}")
    if split is None:
        k = len(pool) // s
        if k % 2 == 0 and k:
            # alternate ids so both halves spread over the pool
            a = [pool[i] for i in range(0, len(pool), 2)]
            b = [pool[i] for i in range(1, len(pool), 2)]
            split = (a, b)
    edges: list[Edge] = []
    cur = start
    if split is not None:
        a, b = sorted(split[0]), sorted(split[1])
        if len(a) != len(b):
            raise Infeasible("close", "pair halves differ in size", a=len(a), b=len(b))
        pieces = -(-len(a) // EMBED_SIDE_CAP)
        if pieces > 1:
            a, b = _order_for_tiling(host, a, b, end, s, pieces)
        seg = 0
        while pieces > 1:
            chunk = -(-len(a) // (pieces * s)) * s
            ca, cb = a[:chunk], b[:chunk]
            res = fill_column_path(host, ca + cb, s, start=cur.vertices,
                                   start_link=link_for_tag(cur.tag), half=half,
                                   column_pools=[ca, cb], seed=seed + seg)
            edges.extend(res.edges)
            cur = End(res.columns[-1], _tag_after(r, res.links[-1]))
            a, b = a[chunk:], b[chunk:]
            pieces -= 1
            seg += 1
        if not a:
            res_edges = _direct(host, cur, end)
            return edges + res_edges
        res = embed_spanning_path_blowup(RegularPair(host, a, b, 0), s, half=half,
                                         start=cur.vertices, start_link=link_for_tag(cur.tag),
                                         end=end.vertices, end_link=link_for_tag(end.tag), seed=seed)
        return edges + list(res.edges)
    if not pool:
        return _direct(host, cur, end)
    if len(pool) > EMBED_SIDE_CAP:
        raise Infeasible("close", "odd column count over the cap is not tiled", size=len(pool))
    res = fill_column_path(host, pool, s, start=cur.vertices, start_link=link_for_tag(cur.tag),
                           end=end.vertices, end_link=link_for_tag(end.tag), half=half, seed=seed)
    return edges + list(res.edges)


def _order_for_tiling(host: Graph, a: list[int], b: list[int], end: End, s: int, pieces: int):
    """Order both halves so the last chunk keeps the end tuple's neighbours.

    Chunks are cut from the front; the last column comes from ``b`` and must
    be joinable to ``end``, so b-vertices adjacent to all of ``end`` go to the
    back (up to half the last chunk).  The rest keeps its id order.
    """
    last = len(b) // pieces
    near = [v for v in b if all(host.has_edge(v, u) for u in end.vertices)][: max(s, last // 2)]
    b = [v for v in b if v not in near] + near
    return a, b


def _direct(host: Graph, e1: End, e2: End) -> list[Edge]:
    from .chain import matched_link_edges
    kind = link_for_tag(e1.tag)
    if kind != link_for_tag(e2.tag):
        raise Infeasible("close", "ends need different links and nothing is left between them")
    edges = matched_link_edges(host, e1.vertices, e2.vertices, kind)
    if edges is None:
        raise Infeasible("close", "end tuples are not joinable")
    return edges
