"""Blow-ups of paths and cycles, full and half.

Base vertex ``i`` owns the consecutive block ``i*t .. i*t+t-1``.  In a half
blow-up the reduced links lose the identity matching (position ``j`` in one
block to position ``j`` in the next).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import DomainError
from .graph import Graph


@dataclass(frozen=True)
class BlowupSpec:
    base: Literal["cycle", "path"]
    k: int
    t: int
    half: bool = False

    def validate(self) -> None:
        if self.base not in ("cycle", "path"):
            raise DomainError(f"unknown base {self.base!r}")
        if self.t < 1:
            raise DomainError("blow-up factor t must be positive")
        if self.base == "cycle" and self.k < 3:
            raise DomainError("cycle base needs k >= 3")
        if self.base == "path" and self.k < 1:
            raise DomainError("path base needs k >= 1")
        if self.half and self.base == "cycle" and self.k % 2:
            raise DomainError("half blow-up of a cycle needs even k")

    @property
    def n(self) -> int:
        return self.k * self.t

    def links(self) -> list[tuple[int, int, bool]]:
        """Base edges as ``(i, j, reduced)``; reduced links miss a perfect matching."""
        pairs = [(i, i + 1) for i in range(self.k - 1)]
        if self.base == "cycle":
            pairs.append((self.k - 1, 0))
        # every other edge is reduced, starting with the first
        return [(i, j, self.half and idx % 2 == 0) for idx, (i, j) in enumerate(pairs)]

    def block(self, i: int) -> range:
        return range(i * self.t, (i + 1) * self.t)


def build_blowup(spec: BlowupSpec) -> Graph:
    spec.validate()
    t = spec.t
    edges = []
    for i, j, reduced in spec.links():
        for p in range(t):
            for q in range(t):
                if reduced and p == q:
                    continue
                edges.append((i * t + p, j * t + q))
    return Graph(spec.n, edges)


def blowup_degree_profile(spec: BlowupSpec) -> dict[int, int]:
    """Expected degree of every vertex in each base block, keyed by block index."""
    spec.validate()
    per_block = {i: 0 for i in range(spec.k)}
    for i, j, reduced in spec.links():
        contribution = spec.t - 1 if reduced else spec.t
        per_block[i] += contribution
        per_block[j] += contribution
    return per_block


def recognize_path_blowup(g: Graph, columns: list[tuple[int, ...]], half: bool = False,
                          first_reduced: bool = True) -> bool:
    """True iff the edges of ``g`` are exactly those of the column path blow-up.

    Columns are given in path order; position ``j`` of neighbouring columns
    is the removed matching on reduced links.
    """
    expected = set()
    for idx in range(len(columns) - 1):
        a, b = columns[idx], columns[idx + 1]
        reduced = half and (idx % 2 == 0) == first_reduced
        for p, u in enumerate(a):
            for q, v in enumerate(b):
                if reduced and p == q:
                    continue
                expected.add((min(u, v), max(u, v)))
    return expected == set(g.edges)
