"""Closed-up toy assemblies: each gadget is embedded in a complete host and
its free ends are joined by a column chain, so the result must be
r-regular and r-connected on the vertices it uses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .chain import (NEEDS_FULL, NEEDS_PM, End, end_deficit, fill_column_path, internal_links, link_for_tag,
                    tuple_size)
from .errors import DomainError, Infeasible
from .gadgets import (GadgetEmbedding, absorb_exceptional_vertex, build_absorber, build_bridge,
                      extend_with_K1r, extend_with_star_pair, glue)
from .graph import Graph, complete_graph
from .verifier import Certificate, verify_certificate

HOST_SIZE = 80
_SPLIT = 40          # vertices < 40 form side A, the rest side B


@dataclass
class ToyResult:
    name: str
    r: int
    embedding: GadgetEmbedding
    certificate: Certificate | None
    contract: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        closed = self.certificate is None or self.certificate.ok
        return closed and not self.contract

    def report(self) -> dict:
        return {"name": self.name, "r": self.r, "ok": self.ok,
                "connectivity": self.certificate.connectivity if self.certificate else None,
                "contract_violations": self.contract,
                "ends": [[list(e.vertices), e.tag] for e in self.embedding.ends],
                "edges": len(self.embedding.edges)}


def _flip(r: int, e: End) -> End:
    # the tag a chain arriving at an end must satisfy
    if r % 2 == 0:
        return e
    return End(e.vertices, NEEDS_PM if e.tag == NEEDS_FULL else NEEDS_FULL)


def _closing_pool(free: list[int], r: int, e1: End, e2: End, s: int) -> list[int]:
    # smallest column count >= 2 whose link parity fits both ends
    for c in range(2, 8):
        kinds = internal_links(link_for_tag(e1.tag), c + 1, r % 2 == 1)
        if kinds[-1] == link_for_tag(e2.tag):
            return free[:c * s]
    raise Infeasible("toy", "no closing column count")


def _close_up(host: Graph, r: int, name: str, piece: GadgetEmbedding, pairs, used) -> ToyResult:
    s = tuple_size(r)
    edges = set(piece.edges)
    used = set(used)
    side_a = set(range(_SPLIT))
    side_b = set(range(_SPLIT, host.n))
    for e1, e2 in pairs:
        # close on the side away from e1 so the chain cannot reuse gadget vertices
        other = side_a if min(e1.vertices) >= _SPLIT else side_b
        free = sorted(set(range(host.n)) - used - other)
        pool = _closing_pool(free, r, e1, e2, s)
        res = fill_column_path(host, pool, s, start=e1.vertices, start_link=link_for_tag(e1.tag),
                               end=e2.vertices, end_link=link_for_tag(e2.tag), half=r % 2 == 1)
        edges |= set(res.edges)
        used |= set(pool)
    order = sorted(used | {v for e in edges for v in e})
    idx = {v: i for i, v in enumerate(order)}
    g = Graph(len(order), [(idx[u], idx[v]) for u, v in edges])
    cert = verify_certificate(g, g.edges, r, exact_connectivity=True)
    cert.meta["toy"] = name
    return ToyResult(name, r, piece, cert)


def toy_assemblies(r: int, kinds: list[str] | None = None) -> list[ToyResult]:
    """Every gadget kind for this r, each closed into a small r-regular graph."""
    if r < 2:
        raise DomainError("r must be at least 2")
    s = tuple_size(r)
    host = complete_graph(HOST_SIZE)
    a_side = set(range(_SPLIT))
    b_side = set(range(_SPLIT, HOST_SIZE))
    odd = r % 2 == 1
    out: list[ToyResult] = []

    def want(name: str) -> bool:
        return kinds is None or any(name.startswith(k) for k in kinds)

    def anchored(vertices) -> End:
        return End(tuple(vertices), NEEDS_PM if odd else NEEDS_FULL)

    # a lone bridge only carries 2k cross edges, so the toy uses all s pairs;
    # the type-2 odd bridge has one cross edge and is only contract-checked
    for variant in (["odd1", "odd2"] if odd else ["even"]):
        name = f"bridge_{variant}"
        if not want(name):
            continue
        cross = [(i, _SPLIT + i) for i in range(1 if variant == "odd2" else 2 * s)]
        g = build_bridge(host, r, cross, a_side, b_side, variant)
        if variant == "odd2":
            out.append(ToyResult(name, r, g, None, embedding_contract(g, r)))
            continue
        e = g.ends
        res = _close_up(host, r, name, g, [(e[1], e[0]), (e[3], e[2])], g.vertices())
        res.contract = embedding_contract(g, r)
        out.append(res)

    for kind in (["xi_odd", "xi_prime_odd"] if odd else ["xi_even", "xi_prime_even"]):
        if not want(kind):
            continue
        targets = [0, 1] if kind == "xi_prime_odd" else [0]
        g = build_absorber(host, r, kind, targets, range(2, _SPLIT))
        res = _close_up(host, r, kind, g, [(g.ends[1], g.ends[0])], g.vertices())
        res.contract = embedding_contract(g, r)
        out.append(res)

    tags = [NEEDS_FULL, NEEDS_PM] if odd else [NEEDS_FULL]
    endgame = "endgame_odd" if odd else "endgame_even"
    for tag in tags:
        for mode in ("interior", "balance", endgame):
            name = f"{mode}/{tag}"
            if not want(mode):
                continue
            u = End(tuple(range(_SPLIT, _SPLIT + s)), tag)
            vs = {"interior": [0], "balance": [], "endgame_even": [0], "endgame_odd": [0, 1]}[mode]
            g = absorb_exceptional_vertex(host, r, mode, u, vs, range(_SPLIT + s, HOST_SIZE),
                                          range(2, _SPLIT), range(2, _SPLIT), ledger={"surplus": s})
            res = _close_up(host, r, name, g, [(g.ends[0], _flip(r, u))], g.vertices() | set(u.vertices))
            res.contract = embedding_contract(g, r, [u])
            out.append(res)

    u = anchored(range(_SPLIT, _SPLIT + s))
    if want("star_pair"):
        stars = [(50, list(range(51, 51 + s))), (60, list(range(61, 61 + s)))]
        g = extend_with_star_pair(host, r, u, stars, range(0, _SPLIT))
        res = _close_up(host, r, "star_pair", g, [(g.ends[0], _flip(r, u))], g.vertices() | set(u.vertices))
        res.contract = embedding_contract(g, r, [u])
        out.append(res)
    if want("k1r"):
        g = extend_with_K1r(host, r, u, 50, range(51, 51 + r), range(0, _SPLIT), range(60, HOST_SIZE))
        res = _close_up(host, r, "k1r", g, [(g.ends[0], _flip(r, u))], g.vertices() | set(u.vertices))
        res.contract = embedding_contract(g, r, [u])
        out.append(res)

    if want("glue"):
        for t1 in tags:
            for t2 in tags:
                for cols in (0, 1, 2, 3):
                    e1 = End(tuple(range(_SPLIT, _SPLIT + s)), t1)
                    e2 = End(tuple(range(60, 60 + s)), t2)
                    try:
                        g = glue(host, r, e1, e2, range(0, _SPLIT), cols)
                    except (DomainError, Infeasible):
                        continue      # this column count cannot join these tags
                    used = g.vertices() | set(e1.vertices) | set(e2.vertices)
                    res = _close_up(host, r, f"glue{cols}/{t1}/{t2}", g, [(_flip(r, e2), _flip(r, e1))], used)
                    res.contract = embedding_contract(g, r, [e1, e2])
                    out.append(res)
    return out


def embedding_contract(piece: GadgetEmbedding, r: int, starts: Sequence[End] = ()) -> list[str]:
    """Degree contract read off an embedding: r at interior vertices, r minus
    the tag's deficit at new ends, exactly the deficit at old ends."""
    deg: dict[int, int] = {}
    for u, v in piece.edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    want = {v: r for v in piece.vertices()}
    for start in starts:
        for v in start.vertices:
            want[v] = end_deficit(r, start.tag)
    for e in piece.ends:
        for v in e.vertices:
            want[v] -= end_deficit(r, e.tag)
    return [f"vertex {v}: degree {deg.get(v, 0)} != {w}" for v, w in sorted(want.items())
            if deg.get(v, 0) != w]
