"""Small-scale ground truth: exhaustive searches and the two lower-bound examples."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError
from .graph import Edge, Graph, bits, iter_bits
from .verifier import Certificate, vertex_connectivity, verify_certificate

FOUND, NONE, UNKNOWN = "found", "none", "unknown"


@dataclass
class OracleResult:
    status: str
    certificate: Certificate | None = None
    edges: list[Edge] | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def report(self) -> dict:
        out = {"status": self.status, "nodes": self.nodes}
        if self.certificate is not None:
            out["certificate"] = self.certificate.report()
        elif self.edges is not None:
            out["edges"] = [list(e) for e in self.edges]
        return out


class _Budget(Exception):
    pass


def brute_force_spanning(g: Graph, r: int, budget: int = 2_000_000) -> OracleResult:
    """Exhaustive search for a spanning r-regular subgraph with kappa >= r.

    Edges are decided in a fixed order (smaller endpoint degree first),
    include before exclude, so the first hit is the lexicographically first
    solution in that order.  Degree bounds are propagated (a vertex that can
    only just reach r takes all its open edges; a full vertex drops them),
    and whenever an edge is dropped the graph of chosen plus open edges must
    still be r-connected, since kappa only goes down when edges go.
    """
    n = g.n
    if r < 1:
        raise DomainError("r must be positive")
    if (n * r) % 2:
        raise DomainError("n*r is odd: no r-regular graph on n vertices")
    if n <= r:
        return OracleResult(NONE)
    deg = g.degrees()
    order = sorted(g.sorted_edges(), key=lambda e: (min(deg[e[0]], deg[e[1]]), e))
    m = len(order)
    state = [0] * m                  # 0 open, 1 chosen, -1 dropped
    chosen = [0] * n
    avail = deg[:]                   # open edges per vertex
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(order):
        inc[u].append(i)
        inc[v].append(i)
    upper = [g.mask[v] for v in range(n)]    # chosen + open neighbours
    nodes = [0]

    def set_edge(i: int, val: int, trail: list[int]) -> bool:
        u, v = order[i]
        state[i] = val
        trail.append(i)
        avail[u] -= 1
        avail[v] -= 1
        if val == 1:
            chosen[u] += 1
            chosen[v] += 1
            return chosen[u] <= r and chosen[v] <= r
        upper[u] &= ~(1 << v)
        upper[v] &= ~(1 << u)
        return chosen[u] + avail[u] >= r and chosen[v] + avail[v] >= r

    def undo(trail: list[int]) -> None:
        for i in reversed(trail):
            u, v = order[i]
            avail[u] += 1
            avail[v] += 1
            if state[i] == 1:
                chosen[u] -= 1
                chosen[v] -= 1
            else:
                upper[u] |= 1 << v
                upper[v] |= 1 << u
            state[i] = 0
        trail.clear()

    def propagate(trail: list[int], queue: list[int]) -> bool:
        while queue:
            x = queue.pop()
            if chosen[x] == r and avail[x]:
                val = -1
            elif chosen[x] + avail[x] == r and avail[x]:
                val = 1
            else:
                continue
            for i in inc[x]:
                if state[i] == 0:
                    if not set_edge(i, val, trail):
                        return False
                    queue.extend(order[i])
        return True

    def upper_connected() -> bool:
        edges = [(u, v) for u in range(n) for v in iter_bits(upper[u]) if u < v]
        return vertex_connectivity(Graph(n, edges), bound=r) >= r

    found: list[frozenset] = []

    def rec(pos: int) -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget
        while pos < m and state[pos] != 0:
            pos += 1
        if pos == m:
            sol = frozenset(order[i] for i in range(m) if state[i] == 1)
            if all(c == r for c in chosen):
                sub = Graph(n, sol)
                if vertex_connectivity(sub, bound=r) >= r:
                    found.append(sol)
                    return True
            return False
        for val in (1, -1):
            trail: list[int] = []
            ok = set_edge(pos, val, trail) and propagate(trail, list(order[pos]))
            if ok and val == -1:
                ok = upper_connected()
            if ok and rec(pos + 1):
                return True
            undo(trail)
        return False

    try:
        if any(d < r for d in deg) or vertex_connectivity(g, bound=r) < r:
            return OracleResult(NONE, nodes=1)
        trail: list[int] = []
        if propagate(trail, list(range(n))):
            hit = rec(0)
        else:
            hit = False
    except _Budget:
        return OracleResult(UNKNOWN, nodes=nodes[0])
    if not hit:
        return OracleResult(NONE, nodes=nodes[0])
    cert = verify_certificate(g, found[0], r, exact_connectivity=True)
    cert.meta["solver"] = "oracle"
    return OracleResult(FOUND, cert, sorted(found[0]), nodes[0])


def find_hamilton_cycle(g: Graph, budget: int = 2_000_000) -> OracleResult:
    """r = 2 special case: a spanning 2-regular 2-connected graph is a Hamilton cycle."""
    return brute_force_spanning(g, 2, budget)


# ------------------------------------------------------------ examples
def build_tightness_example(n: int, r: int, slack: int = 0) -> Graph:
    """Two cliques of size (n+r)/2 sharing r - slack vertices.

    slack=0 has exactly n vertices and minimum degree (n+r-2)/2; slack=1
    keeps the clique size and shares r-1 vertices, so it has n+1 vertices
    and a cut of size r-1.
    """
    if slack not in (0, 1):
        raise DomainError("slack is 0 or 1")
    if (n + r) % 2:
        raise DomainError(f"n+r must be even, got n={n}, r={r}")
    if n < 2 * r + 4:
        raise DomainError("need n >= 2r+4")
    size = (n + r) // 2
    shared = r - slack
    first = list(range(size))
    second = list(range(size - shared, 2 * size - shared))
    edges = [e for part in (first, second) for e in itertools.combinations(part, 2)]
    return Graph(2 * size - shared, set(edges))


def build_divisibility_example(n: int) -> Graph:
    """Two disjoint K_{n/2-2} plus four vertices joined to all of them (not to each other)."""
    if n % 2 or n % 4 == 0 or n < 10:
        raise DomainError("need n even, n not divisible by 4, n >= 10")
    h = n // 2 - 2
    edges = list(itertools.combinations(range(h), 2))
    edges += list(itertools.combinations(range(h, 2 * h), 2))
    edges += [(x, v) for x in range(2 * h, n) for v in range(2 * h)]
    return Graph(n, edges)


def search_spanning_blowup_cycle(g: Graph, t: int, budget: int = 5_000_000) -> OracleResult:
    """Look for a spanning C_k(t), k = n/t: blocks B_1..B_k of size t, consecutive blocks complete.

    Vertex 0 is pinned to B_1 (removes rotations) and min(B_2) < min(B_k)
    (removes the reflection).
    """
    n = g.n
    if t < 1 or n % t:
        raise DomainError(f"t={t} does not divide n={n}")
    k = n // t
    if k < 3:
        raise DomainError("a cycle needs k >= 3 blocks")
    full = (1 << n) - 1
    nodes = [0]
    blocks: list[tuple[int, ...]] = []

    def common(block) -> int:
        m = full
        for v in block:
            m &= g.mask[v]
        return m

    def rec(used: int) -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget
        rest = full & ~used
        prev = common(blocks[-1])
        if len(blocks) == k - 1:
            # the last block is whatever is left
            if rest & ~(prev & common(blocks[0])) or min(iter_bits(rest)) < min(blocks[1]):
                return False
            blocks.append(tuple(iter_bits(rest)))
            return True
        for blk in itertools.combinations(list(iter_bits(prev & rest)), t):
            blocks.append(blk)
            if rec(used | bits(blk)):
                return True
            blocks.pop()
        return False

    try:
        for others in itertools.combinations(range(1, n), t - 1):
            blocks[:] = [(0, *others)]
            if rec(bits(blocks[0])):
                break
        else:
            return OracleResult(NONE, nodes=nodes[0])
    except _Budget:
        return OracleResult(UNKNOWN, nodes=nodes[0])
    edges = set()
    for i in range(k):
        for x in blocks[i]:
            for y in blocks[(i + 1) % k]:
                edges.add((min(x, y), max(x, y)))
    return OracleResult(FOUND, None, sorted(edges), nodes[0])
