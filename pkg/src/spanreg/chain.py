"""Column chains: the common shape behind every construction.

A chain is a sequence of columns (s-tuples of host vertices).  Consecutive
columns are joined either completely (``FULL``) or completely minus a
perfect matching (``PM``).  With r = 2s every link is FULL and the chain is
an s-blow-up of a path; with r = 2s - 1 links alternate and the chain is an
(s - 1/2)-blow-up.  Gadgets bend this shape locally (extra vertices hung
across a link, cross edges replacing removed pairs) without changing the
degree bookkeeping at their two live ends.

``fill_column_path`` is the exact backtracking embedder that covers a vertex
pool with such a chain between two prescribed end tuples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, Infeasible
from .graph import Edge, Graph, bits, iter_bits, norm_edge, popcount

FULL = "full"
PM = "pm"

NEEDS_FULL = "needs_full_join"
NEEDS_PM = "needs_join_minus_matching"


def tuple_size(r: int) -> int:
    return (r + 1) // 2


def link_for_tag(tag: str) -> str:
    return FULL if tag == NEEDS_FULL else PM


def tag_for_missing(r: int, link_used: str) -> str:
    """Tag of a tuple whose only chain link so far is ``link_used``."""
    if r % 2 == 0:
        return NEEDS_FULL
    return NEEDS_PM if link_used == FULL else NEEDS_FULL


def other(link: str) -> str:
    return PM if link == FULL else FULL


def end_deficit(r: int, tag: str) -> int:
    """Degree still missing at an end-tuple vertex with this tag."""
    s = tuple_size(r)
    return s if tag == NEEDS_FULL else s - 1


@dataclass(frozen=True)
class End:
    vertices: tuple[int, ...]
    tag: str

    def report(self) -> dict:
        return {"vertices": list(self.vertices), "tag": self.tag}


def link_edges(a: Sequence[int], b: Sequence[int], kind: str) -> list[Edge]:
    """Positional link: PM drops the pairs (a[i], b[i])."""
    out = []
    for p, u in enumerate(a):
        for q, v in enumerate(b):
            if kind == PM and p == q:
                continue
            out.append(norm_edge(u, v))
    return out


def matched_link_edges(host: Graph, a: Sequence[int], b: Sequence[int], kind: str) -> list[Edge] | None:
    """Link edges between tuples whose order is free.

    For PM any perfect matching may be dropped; we need every host non-edge
    between ``a`` and ``b`` to lie inside the dropped matching.
    """
    if kind == FULL:
        if all(host.has_edge(u, v) for u in a for v in b):
            return link_edges(a, b, FULL)
        return None
    if len(a) != len(b):
        return None
    missing_a: dict[int, int] = {}
    missing_b: dict[int, int] = {}
    for u in a:
        for v in b:
            if not host.has_edge(u, v):
                if u in missing_a or v in missing_b:
                    return None
                missing_a[u] = v
                missing_b[v] = u
    free_a = [u for u in a if u not in missing_a]
    free_b = [v for v in b if v not in missing_b]
    pairs = dict(missing_a)
    pairs.update(zip(free_a, free_b))
    return [norm_edge(u, v) for u in a for v in b if pairs[u] != v]


class PathStructure:
    """Growing r-regular path-like partial subgraph with two live ends.

    ``edges`` holds every chosen host edge, ``used`` every covered vertex.
    Interior vertices have degree exactly r; end vertices miss what their
    tag promises.
    """

    def __init__(self, r: int, edges: Iterable[Edge] = (), ends: Sequence[End] = (),
                 segments: Sequence[object] = ()) -> None:
        self.r = r
        self.edges: set[Edge] = set(norm_edge(*e) for e in edges)
        self.ends: list[End] = list(ends)
        self.segments: list[object] = list(segments)
        self.used: set[int] = set()
        for u, v in self.edges:
            self.used.update((u, v))
        for e in self.ends:
            self.used.update(e.vertices)

    def copy(self) -> "PathStructure":
        ps = PathStructure(self.r, self.edges, self.ends, self.segments)
        ps.used = set(self.used)
        return ps

    def add(self, edges: Iterable[Edge], vertices: Iterable[int] = ()) -> None:
        for e in edges:
            e = norm_edge(*e)
            self.edges.add(e)
            self.used.update(e)
        self.used.update(vertices)

    def degrees(self) -> dict[int, int]:
        deg = {v: 0 for v in self.used}
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def audit(self) -> list[str]:
        """Violations of the degree contract; empty when sound."""
        deg = self.degrees()
        problems = []
        expected = {v: self.r for v in self.used}
        for end in self.ends:
            for v in end.vertices:
                expected[v] -= end_deficit(self.r, end.tag)
        for v in sorted(self.used):
            if deg.get(v, 0) != expected[v]:
                problems.append(f"vertex {v}: degree {deg.get(v, 0)}, expected {expected[v]}")
        return problems

    def report(self) -> dict:
        return {"r": self.r, "edges": sorted(list(e) for e in self.edges),
                "ends": [e.report() for e in self.ends], "used": sorted(self.used)}


def internal_links(first: str, count: int, half: bool) -> list[str]:
    """Link kinds for ``count`` consecutive links starting with ``first``."""
    kinds = []
    kind = first
    for _ in range(count):
        kinds.append(kind)
        kind = other(kind) if half else FULL
    return kinds


@dataclass
class FillResult:
    columns: list[tuple[int, ...]]
    edges: list[Edge]
    nodes: int = 0
    links: list[str] = field(default_factory=list)


def fill_column_path(host: Graph, pool: Iterable[int], s: int, *,
                     start: Sequence[int] | None = None, start_link: str = FULL,
                     end: Sequence[int] | None = None, end_link: str = FULL,
                     half: bool = False,
                     column_pools: Sequence[Iterable[int]] | None = None,
                     first_constraint: Iterable[int] | None = None,
                     last_constraint: Iterable[int] | None = None,
                     first_link: str | None = None,
                     budget: int = 3000, seed: int = 0, restarts: int = 200) -> FillResult:
    """Cover ``pool`` exactly with a chain of s-columns.

    The chain runs from the tuple ``start`` (if given; joined by a
    ``start_link`` link) to the tuple ``end`` (joined by ``end_link``).  With
    ``half`` the internal links alternate; otherwise they are all FULL.
    ``column_pools[i % len]`` restricts column i (used for bipartite pairs).
    Many short randomised attempts beat one long one here (heavy-tailed
    search); the per-attempt budget grows slowly with the attempt number.
    Raises ``Infeasible`` with the deepest frontier on failure.
    """
    pool = sorted(set(pool))
    if len(pool) % s:
        raise DomainError(f"pool of {len(pool)} vertices is not divisible by s={s}")
    k = len(pool) // s
    if k == 0:
        if start is not None and end is not None:
            if start_link != end_link and half:
                raise Infeasible("fill", "empty fill with mismatched end links")
            edges = matched_link_edges(host, start, end, start_link)
            if edges is None:
                raise Infeasible("fill", "end tuples not joinable", start=list(start), end=list(end))
            return FillResult([], edges, 0, [start_link])
        return FillResult([], [], 0, [])
    # kinds[i] joins column i-1 (or the start tuple) to column i; kinds[k] joins the end
    if start is not None:
        kinds: list[str | None] = list(internal_links(start_link, k + (1 if end is not None else 0), half))
    else:
        if first_link is not None:
            base = first_link
        elif end is not None and half:
            base = end_link if (k - 1) % 2 == 0 else other(end_link)
        else:
            base = end_link if end is not None else FULL
        kinds = [None] + internal_links(base, k - 1 + (1 if end is not None else 0), half)
    if end is not None and kinds[-1] != end_link:
        raise Infeasible("fill", "link parity cannot match the end tag",
                         columns=k, start_link=start_link, end_link=end_link)
    pool_mask = bits(pool)
    col_masks = None
    if column_pools is not None:
        col_masks = [bits(p) & pool_mask for p in column_pools]
    first_mask = bits(first_constraint) if first_constraint is not None else None
    last_mask = bits(last_constraint) if last_constraint is not None else None
    end_t = tuple(end) if end is not None else None
    best_depth = [0]
    nodes = [0]
    adj = host.mask

    def column_candidates(prev: tuple[int, ...] | None, kind: str | None, avail: int,
                          idx: int, rng: random.Random):
        allowed = avail
        if col_masks is not None:
            allowed &= col_masks[idx % len(col_masks)]
        if idx == 0 and first_mask is not None:
            allowed &= first_mask
        if idx == k - 1 and last_mask is not None:
            allowed &= last_mask
        if idx == k - 1 and end_t is not None and end_link == FULL:
            for v in end_t:
                allowed &= adj[v]
        if prev is None:
            pos_masks = [allowed] * s
        elif kind == FULL:
            m = allowed
            for v in prev:
                m &= adj[v]
            pos_masks = [m] * s
        else:
            pos_masks = []
            for p in range(s):
                m = allowed
                for q, v in enumerate(prev):
                    if q != p:
                        m &= adj[v]
                pos_masks.append(m)
        chosen: list[int] = []

        def rec(p: int, used: int):
            if p == s:
                yield tuple(chosen)
                return
            m = pos_masks[p] & ~used
            if kind != PM or prev is None:
                # unordered positions: enforce increasing ids to avoid repeats
                if chosen:
                    m &= ~((1 << (chosen[-1] + 1)) - 1)
            # the column's own vertices need not be adjacent to each other
            cands = list(iter_bits(m))
            rng.shuffle(cands)
            # prefer vertices with few options left (hard vertices first)
            cands.sort(key=lambda v: popcount(adj[v] & avail))
            for v in cands:
                chosen.append(v)
                yield from rec(p + 1, used | (1 << v))
                chosen.pop()

        yield from rec(0, 0)

    def feasible(avail: int, frontier: tuple[int, ...]) -> bool:
        # every uncovered vertex must still see enough of what is left
        reach = avail | bits(frontier) | (bits(end_t) if end_t else 0)
        if end_t is not None:
            need = 2 * s - 1 if half else 2 * s
        else:
            need = s - 1 if half else s
        for v in iter_bits(avail):
            if popcount(adj[v] & reach) < min(need, popcount(reach) - 1):
                return False
        return True

    for attempt in range(restarts):
        rng = random.Random(seed * 1000003 + attempt)
        columns: list[tuple[int, ...]] = []
        nodes_this = [0]

        def search(avail: int) -> bool:
            idx = len(columns)
            if idx == k:
                return True
            nodes[0] += 1
            nodes_this[0] += 1
            if nodes_this[0] > budget * (1 + attempt // 25):
                raise _Budget()
            prev = columns[-1] if columns else (tuple(start) if start is not None else None)
            kind = kinds[idx] if idx < len(kinds) else None
            for col in column_candidates(prev, kind, avail, idx, rng):
                if idx == k - 1 and end_t is not None and end_link == PM:
                    if matched_link_edges(host, col, end_t, PM) is None:
                        continue
                rest = avail & ~bits(col)
                if rest and not feasible(rest, col):
                    continue
                columns.append(col)
                best_depth[0] = max(best_depth[0], len(columns))
                if search(rest):
                    return True
                columns.pop()
            return False

        try:
            ok = search(pool_mask)
        except _Budget:
            ok = False
        if ok:
            edges: list[Edge] = []
            used_kinds = []
            if start is not None:
                edges.extend(_join(host, tuple(start), columns[0], kinds[0]))
                used_kinds.append(kinds[0])
            for i in range(k - 1):
                kind = kinds[i + 1]
                edges.extend(link_edges(columns[i], columns[i + 1], kind))
                used_kinds.append(kind)
            if end_t is not None:
                tail = matched_link_edges(host, columns[-1], end_t, end_link)
                assert tail is not None
                edges.extend(tail)
                used_kinds.append(end_link)
            return FillResult(columns, edges, nodes[0], used_kinds)
    raise Infeasible("fill", "exhausted search", deepest_frontier=best_depth[0], columns=k,
                     nodes=nodes[0])


def _join(host: Graph, a: tuple[int, ...], b: tuple[int, ...], kind: str) -> list[Edge]:
    edges = link_edges(a, b, kind)
    for u, v in edges:
        if not host.has_edge(u, v):
            raise Infeasible("fill", f"missing edge {(u, v)}")
    return edges


class _Budget(Exception):
    pass
