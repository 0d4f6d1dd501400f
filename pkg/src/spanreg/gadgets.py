"""Local gadgets: bridges, absorbers, gluing pieces and chain extensions.

Every gadget is a small pattern of columns (s-tuples) joined FULL or PM,
with a few extra vertices hung across links.  Embedding a gadget yields its
edges plus up to a handful of live end tuples, each tagged with the link it
still needs.  Inside a gadget every vertex already has degree r except the
end tuples, which miss exactly what their tag says.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .chain import (FULL, NEEDS_FULL, NEEDS_PM, PM, End, end_deficit, link_for_tag,
                    matched_link_edges, other, tuple_size)
from .errors import DomainError, Infeasible
from .graph import Edge, Graph, bits, iter_bits
from .pattern import Pattern, embed_pattern, pattern_edges


@dataclass
class GadgetEmbedding:
    kind: str
    vertex_map: dict[str, int]
    edges: list[Edge]
    consumed: dict[str, list[int]]
    ends: list[End] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def vertices(self) -> set[int]:
        return set(self.vertex_map.values())

    def report(self) -> dict:
        return {"kind": self.kind, "vertex_map": dict(sorted(self.vertex_map.items())),
                "edges": [list(e) for e in self.edges],
                "consumed": {k: sorted(v) for k, v in self.consumed.items()},
                "ends": [e.report() for e in self.ends], "info": self.info}


def _check_r(r: int) -> int:
    if r < 2:
        raise DomainError("gadgets need r >= 2")
    return tuple_size(r)


def _tag_after(r: int, link: str) -> str:
    """Tag of a column whose only link so far has kind ``link``."""
    if r % 2 == 0:
        return NEEDS_FULL
    return NEEDS_PM if link == FULL else NEEDS_FULL


def _link(p: Pattern, a: list[str], b: list[str], kind: str) -> None:
    if kind == FULL:
        p.join(a, b)
    else:
        p.join_pm(a, b)


def _realise(host: Graph, p: Pattern, pools: dict, fixed: dict | None = None,
             forbidden: Iterable[int] = (), budget: int = 200_000, info: dict | None = None) -> GadgetEmbedding:
    vmap = embed_pattern(host, p, pools, fixed=fixed, forbidden=forbidden, budget=budget)
    consumed: dict[str, list[int]] = {}
    for role in p.roles:
        if fixed and role in fixed:
            continue
        consumed.setdefault(p.pool_of[role], []).append(vmap[role])
    ends = [End(tuple(vmap[x] for x in roles), tag) for roles, tag in p.ends]
    return GadgetEmbedding(p.kind, vmap, pattern_edges(p, vmap), consumed, ends, info or {})


def check_pattern_contract(p: Pattern, r: int, start_tag: str | None = None) -> list[str]:
    """Degree contract of a pattern: r everywhere except end roles.

    Roles in pool ``E`` are the old end an extension starts from; they
    must receive exactly the deficit of ``start_tag``.
    """
    deg = p.degrees()
    want = {x: r for x in p.roles}
    for x in p.roles:
        if p.pool_of[x] == "E":
            want[x] = end_deficit(r, start_tag or NEEDS_FULL)
    for roles, tag in p.ends:
        for x in roles:
            want[x] -= end_deficit(r, tag)
    return [f"{x}: {deg[x]} != {want[x]}" for x in p.roles if deg[x] != want[x]]


# ---------------------------------------------------------------- bridges
def bridge_pattern(r: int, pairs: int, variant: str = "auto") -> Pattern:
    """Side-to-side connector.

    ``variant`` is ``even``/``odd1`` (A1 A2 A3 A4 per side with ``pairs``
    removed A2-A3 pairs, each compensated by two cross edges) or ``odd2``
    (one cross edge, the removed pairs compensated by an extra vertex).
    ``bare`` (even r, pairs = s) keeps only A2 and A3: their ends are the
    cross-edge columns themselves, and they must not be joined directly.
    Roles ``xa{i}``/``xb{i}`` are the cross-edge endpoints, ``xa{i}``-``xb{i}``.
    """
    s = _check_r(r)
    if variant == "auto":
        variant = "even" if r % 2 == 0 else "odd1"
    if variant in ("even", "bare") and r % 2:
        raise DomainError("even bridge needs even r")
    if variant == "bare" and pairs != s:
        raise DomainError("a bare bridge removes all s pairs")
    if variant in ("odd1", "odd2") and r % 2 == 0:
        raise DomainError("odd bridges need odd r")
    p = Pattern(f"bridge_{variant}")
    outer = FULL if variant in ("even", "bare") else PM
    for side, pool in (("a", "A"), ("b", "B")):
        if variant != "bare":
            c1 = p.add_column(f"{side}1_", s, pool)
            c4 = p.add_column(f"{side}4_", s, pool)
        if variant == "odd2":
            c2 = p.add_column(f"{side}2_", s, pool)
            c3 = p.add_column(f"{side}3_", s, pool)
            x = p.add_role(f"x{side}1", pool)
            # drop (c2[j], c3[s+1-j]) for j = 2..s: a reversal on positions 2..s
            removed = [(c2[j], c3[s - j]) for j in range(1, s)]
            p.join(c2, c3, removed)
            for j in range(1, s):
                p.connect(x, c2[j])
                p.connect(x, c3[j])
        else:
            if not 1 <= pairs <= s:
                raise DomainError(f"bridge takes 1..{s} removed pairs, got {pairs}")
            c2 = p.add_column(f"{side}2_", s - pairs, pool)
            c3 = p.add_column(f"{side}3_", s - pairs, pool)
            xs2 = [p.add_role(f"x{side}{2 * i + 1}", pool) for i in range(pairs)]
            xs3 = [p.add_role(f"x{side}{2 * i + 2}", pool) for i in range(pairs)]
            c2, c3 = c2 + xs2, c3 + xs3
            p.join(c2, c3, list(zip(xs2, xs3)))
        if variant == "bare":
            p.ends.append((c2, NEEDS_FULL))
            p.ends.append((c3, NEEDS_FULL))
            continue
        _link(p, c1, c2, outer)
        _link(p, c3, c4, outer)
        tag = _tag_after(r, outer)
        p.ends.append((c1, tag))
        p.ends.append((c4, tag))
    count = 1 if variant == "odd2" else 2 * pairs
    for i in range(1, count + 1):
        p.connect(f"xa{i}", f"xb{i}")
    return p


def find_cross_matching(host: Graph, side_a: Iterable[int], side_b: Iterable[int], count: int,
                        forbidden: Iterable[int] = ()) -> list[Edge]:
    """``count`` disjoint A-B edges (exact bipartite matching by augmenting paths)."""
    bad = bits(forbidden)
    a_list = [v for v in sorted(set(side_a)) if not (bad >> v) & 1]
    b_mask = bits(side_b) & ~bad
    match_b: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for v in iter_bits(host.mask[u] & b_mask):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_b or augment(match_b[v], seen):
                match_b[v] = u
                return True
        return False

    for u in a_list:
        augment(u, set())
        if len(match_b) >= count:
            break
    if len(match_b) < count:
        raise Infeasible("cross_matching", f"only {len(match_b)} disjoint cross edges, need {count}",
                         found=len(match_b), needed=count)
    pairs = sorted((u, v) for v, u in match_b.items())
    return pairs[:count]


def build_bridge(host: Graph, r: int, cross: Sequence[Edge], pool_a: Iterable[int],
                 pool_b: Iterable[int], variant: str = "auto", forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    """Embed a bridge around the given cross edges (a in A, b in B)."""
    if variant == "odd2":
        if len(cross) != 1:
            raise DomainError("odd2 bridge uses exactly one cross edge")
        pairs = 0
    else:
        if len(cross) % 2 or not cross:
            raise DomainError("bridges use an even, positive number of cross edges")
        pairs = len(cross) // 2
    p = bridge_pattern(r, pairs, variant)
    fixed = {}
    for i, (a, b) in enumerate(cross, start=1):
        if not host.has_edge(a, b):
            raise Infeasible(p.kind, f"{(a, b)} is not a host edge")
        fixed[f"xa{i}"] = a
        fixed[f"xb{i}"] = b
    return _realise(host, p, {"A": pool_a, "B": pool_b}, fixed, forbidden,
                    info={"cross": [list(e) for e in cross]})


def build_bridge_even(host, r, cross, pool_a, pool_b, forbidden=()):
    if r % 2:
        raise DomainError("build_bridge_even needs even r")
    return build_bridge(host, r, cross, pool_a, pool_b, "even", forbidden)


def build_bridge_odd(host, r, cross, pool_a, pool_b, variant=1, forbidden=()):
    if r % 2 == 0:
        raise DomainError("build_bridge_odd needs odd r")
    return build_bridge(host, r, cross, pool_a, pool_b, "odd1" if variant == 1 else "odd2", forbidden)


# ------------------------------------------------------------- absorbers
ABSORBER_KINDS = ("xi_even", "xi_prime_even", "xi_odd", "xi_prime_odd")


def absorber_pattern(r: int, kind: str) -> Pattern:
    s = _check_r(r)
    even = r % 2 == 0
    if kind in ("xi_even", "xi_prime_even") and not even:
        raise DomainError(f"{kind} needs even r")
    if kind in ("xi_odd", "xi_prime_odd") and even:
        raise DomainError(f"{kind} needs odd r")
    p = Pattern(kind)
    if kind == "xi_prime_odd":
        f1 = p.add_column("f", s, "P")
        f2 = p.add_column("g", s, "P")
        u1 = p.add_role("u1", "T")
        u2 = p.add_role("u2", "T")
        # zigzag: f_i misses g_{i+1} and g_i misses f_{i+1}
        removed = [(f1[i], f2[i + 1]) for i in range(s - 1)] + [(f2[i], f1[i + 1]) for i in range(s - 1)]
        p.join(f1, f2, removed)
        for col in (f1, f2):
            for j in range(s - 1):
                p.connect(u1, col[j])
                p.connect(u2, col[j + 1])
        p.connect(u1, u2)
        p.ends = [(f1, NEEDS_PM), (f2, NEEDS_PM)]
        return p
    head: list[list[str]] = []
    if kind in ("xi_prime_even", "xi_odd"):
        e0 = p.add_column("e", s, "P")
        head = [e0]
    d1 = p.add_column("d", s, "P")
    mid = p.add_column("m", s - 1, "P") + [p.add_role("u", "T")]
    d2 = p.add_column("h", s, "P")
    p.join(d1, mid)
    if kind == "xi_odd":
        p.join_pm(mid, d2)
    else:
        p.join(mid, d2)
    if head:
        p.join_pm(head[0], d1)
    if kind == "xi_prime_even":
        extra = p.add_role("x", "P")
        for v in head[0] + d1:
            p.connect(extra, v)
    first = head[0] if head else d1
    p.ends = [(first, NEEDS_FULL), (d2, NEEDS_FULL)]
    return p


def build_absorber(host: Graph, r: int, kind: str, targets: Sequence[int], pool: Iterable[int],
                   forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    """Absorb ``targets`` (one vertex, two for ``xi_prime_odd``) into a chain piece."""
    if kind not in ABSORBER_KINDS:
        raise DomainError(f"unknown absorber {kind!r}")
    p = absorber_pattern(r, kind)
    want = 2 if kind == "xi_prime_odd" else 1
    if len(targets) != want:
        raise DomainError(f"{kind} absorbs {want} target(s)")
    pool_set = set(pool) - set(targets)
    fixed = {"u1": targets[0], "u2": targets[1]} if want == 2 else {"u": targets[0]}
    return _realise(host, p, {"P": pool_set, "T": targets}, fixed, forbidden,
                    info={"targets": list(targets)})


# ---------------------------------------------------------------- gluing
def glue_pattern(r: int, tag1: str, tag2: str, columns: int) -> Pattern:
    s = _check_r(r)
    p = Pattern(f"glue{columns}")
    e1 = p.add_column("s", s, "E1")
    e2 = p.add_column("t", s, "E2")
    cols = [p.add_column(f"c{i}_", s, "P") for i in range(columns)]
    chain = [e1] + cols + [e2]
    kind = link_for_tag(tag1)
    for i in range(len(chain) - 1):
        _link(p, chain[i], chain[i + 1], kind)
        if r % 2:
            kind = other(kind)
    last = link_for_tag(tag2)
    used_last = kind if r % 2 == 0 else other(kind)
    if used_last != last:
        raise DomainError("column count does not fit the two end tags")
    return p


def glue_columns_needed(r: int, tag1: str, tag2: str, prefer: int = 2) -> int:
    """Smallest column count >= 0 with the right parity, nearest to ``prefer``."""
    if r % 2 == 0:
        return prefer
    same = tag1 == tag2
    want_even = same
    if (prefer % 2 == 0) == want_even:
        return prefer
    return prefer - 1 if prefer > 0 else prefer + 1


def glue(host: Graph, r: int, end1: End, end2: End, pool: Iterable[int], columns: int = 2,
         forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    """Join two live ends through ``columns`` fresh columns taken from ``pool``."""
    s = _check_r(r)
    if len(end1.vertices) != s or len(end2.vertices) != s:
        raise DomainError("end tuples must have size s")
    if columns == 0:
        kind = link_for_tag(end1.tag)
        if kind != link_for_tag(end2.tag):
            raise Infeasible("glue0", "direct join needs equal tags")
        edges = matched_link_edges(host, end1.vertices, end2.vertices, kind)
        if edges is None:
            raise Infeasible("glue0", "end tuples are not joinable directly")
        return GadgetEmbedding("glue0", {}, sorted(edges), {}, [])
    try:
        p = glue_pattern(r, end1.tag, end2.tag, columns)
    except DomainError as exc:
        raise Infeasible("glue", str(exc), columns=columns, tags=[end1.tag, end2.tag])
    fixed = {f"s{j + 1}": v for j, v in enumerate(end1.vertices)}
    fixed.update({f"t{j + 1}": v for j, v in enumerate(end2.vertices)})
    return _realise(host, p, {"P": set(pool), "E1": end1.vertices, "E2": end2.vertices}, fixed, forbidden)


def glue_GE(host: Graph, r: int, end1: End, end2: End, pool: Iterable[int],
            forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    """Even gluing: two fresh columns, all links full."""
    if r % 2:
        raise DomainError("glue_GE needs even r")
    g = glue(host, r, end1, end2, pool, 2, forbidden)
    g.kind = "GE"
    return g


def glue_GO(host: Graph, r: int, end1: End, end2: End, pool: Iterable[int], mode: str,
            forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    """Odd gluing of two equally tagged ends: ``deficit`` (full, pm, full) or ``surplus`` (pm, full, pm)."""
    if r % 2 == 0:
        raise DomainError("glue_GO needs odd r")
    want = {"deficit": NEEDS_FULL, "surplus": NEEDS_PM}.get(mode)
    if want is None:
        raise DomainError(f"unknown GO mode {mode!r}")
    if end1.tag != want or end2.tag != want:
        raise Infeasible("GO", f"mode {mode} needs both ends tagged {want}",
                         tags=[end1.tag, end2.tag])
    g = glue(host, r, end1, end2, pool, 2, forbidden)
    g.kind = f"GO_{mode}"
    return g


# ------------------------------------------------------------ extensions
def _start_end(p: Pattern, s: int, end: End) -> tuple[list[str], dict]:
    col = p.add_column("u", s, "E")
    return col, {f"u{j + 1}": v for j, v in enumerate(end.vertices)}


def star_pair_pattern(r: int, tag: str) -> Pattern:
    """Extension from an end in B through two stars inside B (net +2 on B)."""
    s = _check_r(r)
    p = Pattern("star_pair")
    u = p.add_column("u", s, "E")
    a1 = p.add_column("a", s, "A")
    b2 = p.add_column("l", s, "L1")
    a2 = p.add_column("p", s, "A")
    b3 = p.add_column("k", s, "L2")
    c1 = p.add_role("c1", "C1")
    c2 = p.add_role("c2", "C2")
    if r % 2 == 0:
        if tag != NEEDS_FULL:
            raise DomainError("even chains only carry full tags")
        p.join(u, a1)
        p.join_pm(a1, b2)
        for v in a1 + b2:
            p.connect(c1, v)
        p.join(b2, a2)
        p.join_pm(a2, b3)
        for v in a2 + b3:
            p.connect(c2, v)
        p.ends = [(b3, NEEDS_FULL)]
    else:
        if tag != NEEDS_PM:
            raise DomainError("odd star-pair extension starts from a pm-tagged end")
        p.join_pm(u, a1)
        p.join_pm(a1, b2)
        for v in a1 + b2[:s - 1]:
            p.connect(c1, v)
        p.join(b2, a2, [(b2[j], a2[j]) for j in range(s - 1)])
        p.join_pm(a2, b3)
        for v in a2[:s - 1] + b3:
            p.connect(c2, v)
        p.ends = [(b3, NEEDS_PM)]
    return p


def extend_with_star_pair(host: Graph, r: int, end: End, stars: Sequence[tuple[int, Sequence[int]]],
                          pool_a: Iterable[int], forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    """``stars`` is two (centre, leaves) pairs with at least s leaves each (leaves in B)."""
    s = _check_r(r)
    if len(stars) != 2:
        raise DomainError("a star pair is two stars")
    p = star_pair_pattern(r, end.tag)
    fixed = {f"u{j + 1}": v for j, v in enumerate(end.vertices)}
    fixed["c1"], fixed["c2"] = stars[0][0], stars[1][0]
    pools = {"E": end.vertices, "A": set(pool_a), "C1": [stars[0][0]], "C2": [stars[1][0]],
             "L1": list(stars[0][1]), "L2": list(stars[1][1])}
    if len(stars[0][1]) < s or len(stars[1][1]) < s:
        raise Infeasible("star_pair", f"stars need at least {s} leaves")
    return _realise(host, p, pools, fixed, forbidden)


def k1r_pattern(r: int, tag: str) -> Pattern:
    """Extension from an end in B through a star K_{1,r} centred in B (net +2 on B)."""
    s = _check_r(r)
    p = Pattern("k1r")
    u = p.add_column("u", s, "E")
    a1 = p.add_column("a", s, "A")
    c = p.add_role("c", "C")
    mid = [c] + p.add_column("p", s - 1, "A")
    b3 = p.add_column("k", s, "L")
    if r % 2 == 0:
        if tag != NEEDS_FULL:
            raise DomainError("even chains only carry full tags")
        b2 = p.add_column("l", s, "L")
        p.join(u, a1)
        p.join(a1, b2)
        p.join(b2, mid)
        p.join(mid, b3)
        p.ends = [(b3, NEEDS_FULL)]
    else:
        if tag != NEEDS_PM:
            raise DomainError("odd star extension starts from a pm-tagged end")
        w = p.add_role("w", "B")
        b2 = [w] + p.add_column("l", s - 1, "L")
        p.join_pm(u, a1)
        p.join(a1, b2)
        p.join_pm(b2, mid)
        p.join(mid, b3)
        p.ends = [(b3, NEEDS_PM)]
    return p


def extend_with_K1r(host: Graph, r: int, end: End, centre: int, leaves: Sequence[int],
                    pool_a: Iterable[int], pool_b: Iterable[int] = (),
                    forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    p = k1r_pattern(r, end.tag)
    fixed = {f"u{j + 1}": v for j, v in enumerate(end.vertices)}
    fixed["c"] = centre
    leaf_set = set(leaves) & set(host.adj[centre])
    if len(leaf_set) < r:
        raise Infeasible("k1r", f"centre {centre} has only {len(leaf_set)} usable leaves, needs {r}")
    pools = {"E": end.vertices, "A": set(pool_a), "C": [centre], "L": leaf_set,
             "B": set(pool_b) - leaf_set}
    return _realise(host, p, pools, fixed, forbidden)


# ------------------------------------------------ exceptional vertices
ABSORB_MODES = ("interior", "balance", "endgame_even", "endgame_odd")


def absorb_pattern(r: int, mode: str, tag: str) -> Pattern:
    """Chain extensions from an end in cluster S (pool "S"); "Q" is the partner cluster."""
    s = _check_r(r)
    p = Pattern(f"absorb_{mode}")
    u = p.add_column("u", s, "E")
    kind = link_for_tag(tag)

    def step(prev, col):
        nonlocal kind
        _link(p, prev, col, kind)
        if r % 2:
            kind = other(kind)
        return col

    if mode == "interior":
        q1 = step(u, p.add_column("q", s, "Q"))
        s1 = step(q1, p.add_column("a", s, "S"))
        mid = step(s1, [p.add_role("v", "V")] + p.add_column("m", s - 1, "Q"))
        last = step(mid, p.add_column("b", s, "S"))
    elif mode == "balance":
        q1 = step(u, p.add_column("q", s, "R"))
        last = step(q1, p.add_column("b", s, "S"))
    elif mode == "endgame_even":
        if r % 2:
            raise DomainError("endgame_even needs even r")
        q1 = step(u, p.add_column("q", s, "Q"))
        last = p.add_column("b", s, "S")
        p.join_pm(q1, last)
        v = p.add_role("v", "V")
        for x in q1 + last:
            p.connect(v, x)
        return _end_with(p, last, NEEDS_FULL)
    elif mode == "endgame_odd":
        if r % 2 == 0:
            raise DomainError("endgame_odd needs odd r")
        # the zigzag link counts as full once v1, v2 are attached, so it must
        # follow a PM link: u -pm- Q =zz= S  or  u -full- Q -pm- S =zz= Q -pm- S
        if tag == NEEDS_PM:
            left = p.add_column("q", s, "Q")
            p.join_pm(u, left)
            right = p.add_column("b", s, "S")
            tail = None
        else:
            q0 = p.add_column("q0_", s, "Q")
            p.join(u, q0)
            left = p.add_column("a", s, "S")
            p.join_pm(q0, left)
            right = p.add_column("q", s, "Q")
            tail = p.add_column("b", s, "S")
            p.join_pm(right, tail)
        removed = [(left[i], right[i + 1]) for i in range(s - 1)] + [(right[i], left[i + 1]) for i in range(s - 1)]
        p.join(left, right, removed)
        v1, v2 = p.add_role("v1", "V"), p.add_role("v2", "V")
        for col in (left, right):
            for j in range(s - 1):
                p.connect(v1, col[j])
                p.connect(v2, col[j + 1])
        p.connect(v1, v2)
        if tail is None:
            return _end_with(p, right, NEEDS_PM)
        return _end_with(p, tail, NEEDS_FULL)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return _end_with(p, last, _tag_after(r, other(kind) if r % 2 else FULL))


def _end_with(p: Pattern, col: list[str], tag: str) -> Pattern:
    p.ends = [(col, tag)]
    return p


def absorb_exceptional_vertex(host: Graph, r: int, mode: str, end: End, vertices: Sequence[int],
                              pool_same: Iterable[int], pool_partner: Iterable[int],
                              pool_surplus: Iterable[int] = (), ledger: dict | None = None,
                              forbidden: Iterable[int] = ()) -> GadgetEmbedding:
    """Extend a chain from ``end`` (lying in the ``pool_same`` cluster) so it swallows ``vertices``.

    ``interior`` puts one vertex inside a partner-side column (cluster
    balance shifts by one); ``balance`` routes one column of a surplus
    cluster through the end (``ledger`` must show that surplus); the two
    endgame modes keep the balance and swallow one (even r) or an adjacent
    pair (odd r) of leftovers.
    """
    if mode not in ABSORB_MODES:
        raise DomainError(f"unknown absorb mode {mode!r}")
    s = _check_r(r)
    if mode == "balance":
        surplus = (ledger or {}).get("surplus", 0)
        if surplus < s:
            raise Infeasible("balance", "precondition: no surplus of s in the source cluster",
                             surplus=surplus, needed=s)
        if vertices:
            raise DomainError("balance mode moves a column, it takes no vertices")
    elif mode == "endgame_odd":
        if len(vertices) != 2:
            raise DomainError("endgame_odd swallows exactly two vertices")
        if not host.has_edge(vertices[0], vertices[1]):
            raise Infeasible("endgame_odd", "the two leftovers must be adjacent",
                             vertices=list(vertices))
    elif len(vertices) != 1:
        raise DomainError(f"{mode} swallows exactly one vertex")
    p = absorb_pattern(r, mode, end.tag)
    fixed = {f"u{j + 1}": v for j, v in enumerate(end.vertices)}
    if mode == "endgame_odd":
        fixed["v1"], fixed["v2"] = vertices
    elif mode != "balance":
        fixed["v"] = vertices[0]
    pools = {"E": end.vertices, "S": set(pool_same), "Q": set(pool_partner),
             "R": set(pool_surplus), "V": list(vertices)}
    return _realise(host, p, pools, fixed, forbidden)
