"""Simple undirected graphs on vertices ``0..n-1``.

Adjacency is kept twice: as frozensets for iteration and as integer
bitmasks for fast common-neighbourhood queries.  Graphs are immutable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

Edge = tuple[int, int]
VertexSet = tuple[int, ...]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def vset(vertices: Iterable[int]) -> VertexSet:
    """Sorted, duplicate-free tuple of vertex ids."""
    return tuple(sorted(set(vertices)))


def bits(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


class Graph:
    __slots__ = ("n", "edges", "adj", "mask", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()) -> None:
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        es = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise DomainError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge {(u, v)} out of range for n={n}")
            es.add(norm_edge(u, v))
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in es:
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.edges: frozenset[Edge] = frozenset(es)
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in adj)
        self.mask: tuple[int, ...] = tuple(bits(a) for a in adj)
        self._hash = None

    # -- basic queries -------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        return (self.mask[u] >> v) & 1 == 1

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbours_in(self, v: int, s: Iterable[int]) -> int:
        return popcount(self.mask[v] & bits(s))

    def edge_subgraph(self, edges: Iterable[Sequence[int]]) -> "Graph":
        return Graph(self.n, edges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    # -- serialisation -------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), data.get("edges", []))

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def to_dot(self, name: str = "G", labels: dict[int, str] | None = None) -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.n):
            if labels and v in labels:
                lines.append(f'  {v} [label="{labels[v]}"];')
            else:
                lines.append(f"  {v};")
        lines.extend(f"  {u} -- {v};" for u, v in self.sorted_edges())
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- constructors used everywhere (tests, templates, oracles) ---------------
def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def gnp(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi graph; ``rng`` is a ``random.Random``."""
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p))


# -- set / degree primitives --------------------------------------------
def _check_ids(g: Graph, s: Iterable[int]) -> None:
    for v in s:
        if not 0 <= v < g.n:
            raise DomainError(f"vertex {v} out of range for n={g.n}")


def cross_edges(g: Graph, a: Iterable[int], b: Iterable[int]) -> int:
    """Edges with one endpoint in ``a`` and the other in ``b`` (each counted once)."""
    a_set, b_set = set(a), set(b)
    b_mask = bits(b_set)
    both = a_set & b_set
    total = 0
    for u in a_set:
        total += popcount(g.mask[u] & b_mask)
    # an edge with both endpoints in a∩b was seen from each endpoint
    both_mask = bits(both)
    total -= sum(popcount(g.mask[u] & both_mask) for u in both) // 2
    return total


def density(g: Graph, a: Sequence[int], b: Sequence[int]) -> Fraction:
    if not a or not b:
        raise DomainError("density of an empty set is undefined")
    _check_ids(g, a)
    _check_ids(g, b)
    a_set, b_set = set(a), set(b)
    return Fraction(cross_edges(g, a_set, b_set), len(a_set) * len(b_set))


def min_degree(g: Graph) -> int:
    return min(g.degrees()) if g.n else 0


def max_degree(g: Graph) -> int:
    return max(g.degrees()) if g.n else 0


def common_neighbourhood(g: Graph, s: Iterable[int]) -> VertexSet:
    s = list(s)
    if not s:
        raise DomainError("common neighbourhood of an empty set")
    _check_ids(g, s)
    mask = (1 << g.n) - 1
    for v in s:
        mask &= g.mask[v]
    mask &= ~bits(s)
    return tuple(iter_bits(mask))


def common_mask(g: Graph, s: Iterable[int], within: int | None = None) -> int:
    mask = (1 << g.n) - 1 if within is None else within
    for v in s:
        mask &= g.mask[v]
    return mask


def induced(g: Graph, s: Iterable[int]) -> tuple[Graph, VertexSet]:
    """Subgraph induced on ``s`` relabelled by sorted order, plus the index map."""
    order = vset(s)
    _check_ids(g, order)
    pos = {v: i for i, v in enumerate(order)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    return Graph(len(order), edges), order


def is_connected(g: Graph, removed: int = 0) -> bool:
    alive = ((1 << g.n) - 1) & ~removed
    if not alive:
        return True
    start = (alive & -alive).bit_length() - 1
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.mask[v]
        nxt &= alive & ~seen
        seen |= nxt
        frontier = nxt
    return seen == alive
