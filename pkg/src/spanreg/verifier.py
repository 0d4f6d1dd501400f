"""Checks for the conclusion we care about: a spanning, r-regular, r-connected subgraph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError
from .graph import Edge, Graph, min_degree, norm_edge


def is_r_regular(g: Graph, r: int) -> bool:
    return all(d == r for d in g.degrees())


class _SplitNetwork:
    """Unit-capacity vertex-split network: v_in = 2v, v_out = 2v + 1."""

    def __init__(self, g: Graph) -> None:
        self.g = g
        size = 2 * g.n
        self.head: list[int] = []
        self.cap: list[int] = []
        self.out: list[list[int]] = [[] for _ in range(size)]
        for v in range(g.n):
            self._arc(2 * v, 2 * v + 1, 1)
        for u, v in g.edges:
            self._arc(2 * u + 1, 2 * v, 1)
            self._arc(2 * v + 1, 2 * u, 1)
        self.base_cap = list(self.cap)

    def _arc(self, a: int, b: int, c: int) -> None:
        self.out[a].append(len(self.head))
        self.head.append(b)
        self.cap.append(c)
        self.out[b].append(len(self.head))
        self.head.append(a)
        self.cap.append(0)

    def local_connectivity(self, s: int, t: int, bound: int | None = None) -> int:
        """Internally disjoint s-t paths (s, t non-adjacent), stopping at ``bound``."""
        cap = list(self.base_cap)
        src, sink = 2 * s + 1, 2 * t
        flow = 0
        head, out = self.head, self.out
        while bound is None or flow < bound:
            parent = {src: -1}
            queue = deque([src])
            found = False
            while queue and not found:
                a = queue.popleft()
                for arc in out[a]:
                    if cap[arc] > 0:
                        b = head[arc]
                        if b not in parent:
                            parent[b] = arc
                            if b == sink:
                                found = True
                                break
                            queue.append(b)
            if not found:
                break
            node = sink
            while node != src:
                arc = parent[node]
                cap[arc] -= 1
                cap[arc ^ 1] += 1
                node = head[arc ^ 1]
            flow += 1
        return flow


def vertex_connectivity(g: Graph, bound: int | None = None) -> int:
    """Vertex connectivity via max-flow (Esfahanian-Hakimi pair selection).

    With ``bound`` set the result is ``min(kappa, bound)``, which is all a
    "kappa >= r" check needs and is much cheaper on large graphs.
    """
    n = g.n
    if n < 2:
        raise DomainError("vertex connectivity needs at least two vertices")
    degrees = g.degrees()
    if all(d == n - 1 for d in degrees):
        return n - 1 if bound is None else min(n - 1, bound)
    best = min(degrees)
    if bound is not None:
        best = min(best, bound)
    if best == 0:
        return 0
    net = _SplitNetwork(g)
    s = degrees.index(min(degrees))
    for t in range(n):
        if t != s and not g.has_edge(s, t):
            best = min(best, net.local_connectivity(s, t, best))
            if best == 0:
                return 0
    nbrs = sorted(g.adj[s])
    for i, x in enumerate(nbrs):
        for y in nbrs[i + 1:]:
            if not g.has_edge(x, y):
                best = min(best, net.local_connectivity(x, y, best))
    return best


@dataclass
class Certificate:
    host: Graph
    sub_edges: frozenset[Edge]
    r: int
    is_subgraph: bool = False
    is_spanning: bool = False
    is_r_regular: bool = False
    connectivity_lower_bound_met: bool = False
    connectivity: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.is_subgraph and self.is_spanning and self.is_r_regular
                and self.connectivity_lower_bound_met)

    def subgraph(self) -> Graph:
        return Graph(self.host.n, self.sub_edges)

    def report(self) -> dict:
        return {
            "r": self.r,
            "n": self.host.n,
            "ok": self.ok,
            "checks": {
                "is_subgraph": self.is_subgraph,
                "is_spanning": self.is_spanning,
                "is_r_regular": self.is_r_regular,
                "connectivity_lower_bound_met": self.connectivity_lower_bound_met,
            },
            "connectivity": self.connectivity,
            "edges": [list(e) for e in sorted(self.sub_edges)],
            "meta": self.meta,
        }


def verify_certificate(host: Graph, sub_edges: Iterable[Sequence[int]], r: int,
                       exact_connectivity: bool = False) -> Certificate:
    """Re-derive every check from scratch.

    The connectivity value is exact when ``exact_connectivity`` is set or the
    host is small; otherwise it is computed only up to ``r`` (enough to decide
    the check) and reported as that lower bound.
    """
    edges = frozenset(norm_edge(int(e[0]), int(e[1])) for e in sub_edges)
    cert = Certificate(host=host, sub_edges=edges, r=r)
    cert.is_subgraph = all(u != v and 0 <= u < host.n and 0 <= v < host.n and host.has_edge(u, v)
                           for u, v in edges)
    if not cert.is_subgraph:
        return cert
    sub = Graph(host.n, edges)
    degrees = sub.degrees()
    cert.is_spanning = host.n > 0 and (r == 0 or all(d >= 1 for d in degrees))
    cert.is_r_regular = is_r_regular(sub, r)
    if host.n < 2:
        cert.connectivity_lower_bound_met = r <= 0
        return cert
    if min_degree(sub) < r:
        # Whitney: kappa <= delta, so no flow is needed
        cert.connectivity_lower_bound_met = False
        return cert
    exact = exact_connectivity or host.n <= 40
    cert.connectivity = vertex_connectivity(sub, bound=None if exact else r)
    cert.connectivity_lower_bound_met = cert.connectivity >= r
    return cert
