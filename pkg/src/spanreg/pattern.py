"""Embedding small labelled patterns into a host graph.

A pattern is a handful of named roles plus the edges between them.  Each
role draws its vertex from a named pool; some roles may be pinned.  The
search is plain backtracking: the next role is the one with most assigned
neighbours (ties: fewest candidates), candidates are tried lowest id first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import Infeasible
from .graph import Edge, Graph, bits, iter_bits, norm_edge, popcount


@dataclass
class Pattern:
    kind: str
    roles: list[str] = field(default_factory=list)
    edges: list[tuple[str, str]] = field(default_factory=list)
    pool_of: dict[str, str] = field(default_factory=dict)
    ends: list[tuple[list[str], str]] = field(default_factory=list)

    def add_role(self, name: str, pool: str) -> str:
        if name in self.pool_of:
            raise ValueError(f"duplicate role {name}")
        self.roles.append(name)
        self.pool_of[name] = pool
        return name

    def add_column(self, prefix: str, size: int, pool: str) -> list[str]:
        return [self.add_role(f"{prefix}{j}", pool) for j in range(1, size + 1)]

    def connect(self, a: str, b: str) -> None:
        self.edges.append((a, b))

    def join(self, xs: list[str], ys: list[str], removed: Iterable[tuple[str, str]] = ()) -> None:
        drop = {frozenset(p) for p in removed}
        for x in xs:
            for y in ys:
                if frozenset((x, y)) not in drop:
                    self.connect(x, y)

    def join_pm(self, xs: list[str], ys: list[str]) -> None:
        self.join(xs, ys, zip(xs, ys))

    def degrees(self) -> dict[str, int]:
        deg = {r: 0 for r in self.roles}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def embed_pattern(host: Graph, pattern: Pattern, pools: dict[str, Iterable[int] | int],
                  fixed: dict[str, int] | None = None, forbidden: Iterable[int] = (),
                  budget: int = 200_000) -> dict[str, int]:
    """Map every role to a distinct host vertex so that all pattern edges exist."""
    fixed = dict(fixed or {})
    pool_masks = {k: (v if isinstance(v, int) else bits(v)) for k, v in pools.items()}
    nbrs: dict[str, list[str]] = {r: [] for r in pattern.roles}
    for a, b in pattern.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    assign: dict[str, int] = {}
    used = bits(forbidden)
    for role, v in fixed.items():
        if role not in nbrs:
            raise Infeasible(pattern.kind, f"unknown pinned role {role}")
        if (used >> v) & 1:
            raise Infeasible(pattern.kind, f"pinned vertex {v} reused", role=role)
        assign[role] = v
        used |= 1 << v
    for a, b in pattern.edges:
        if a in assign and b in assign and not host.has_edge(assign[a], assign[b]):
            raise Infeasible(pattern.kind, f"pinned roles {a},{b} are not adjacent",
                             role=f"{a}-{b}")
    free = [r for r in pattern.roles if r not in assign]
    nodes = [0]
    deepest: list = [None, -1]

    def candidates(role: str, used_mask: int) -> int:
        pool = pattern.pool_of[role]
        if pool not in pool_masks:
            raise Infeasible(pattern.kind, f"no pool {pool!r} supplied", role=role)
        mask = pool_masks[pool] & ~used_mask
        for nb in nbrs[role]:
            if nb in assign:
                mask &= host.mask[assign[nb]]
        return mask

    def pick(remaining: list[str], used_mask: int):
        best = None
        for role in remaining:
            placed = sum(1 for nb in nbrs[role] if nb in assign)
            cmask = candidates(role, used_mask)
            key = (-placed, popcount(cmask))
            if best is None or key < best[0]:
                best = (key, role, cmask)
        return best

    def rec(remaining: list[str], used_mask: int) -> bool:
        if not remaining:
            return True
        nodes[0] += 1
        if nodes[0] > budget:
            return False
        _, role, cmask = pick(remaining, used_mask)
        if not cmask:
            placed = len(assign)
            if placed > deepest[1]:
                deepest[0], deepest[1] = role, placed
            return False
        rest = [r for r in remaining if r != role]
        for v in iter_bits(cmask):
            assign[role] = v
            if rec(rest, used_mask | (1 << v)):
                return True
            del assign[role]
        return False

    if not rec(free, used):
        raise Infeasible(pattern.kind, "no embedding found",
                         stuck_role=deepest[0], placed=deepest[1], nodes=nodes[0])
    return assign


def pattern_edges(pattern: Pattern, vmap: dict[str, int]) -> list[Edge]:
    return sorted({norm_edge(vmap[a], vmap[b]) for a, b in pattern.edges})
