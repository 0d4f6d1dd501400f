"""The two extremal cases.

Case one: two near-cliques A, B and a small remainder C.  Each side becomes
one cyclic chain; bridges carry the r cross edges, absorbers swallow C and
fix divisibility, and the rest of each side is covered exactly.

Case two: A is almost independent and |A| + m = n/2 = |B| - m.  One chain
alternates between the sides; stars inside B eat the 2m surplus vertices
of B, and the rest is covered as a bipartite pair.
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .assembly import Assembly, close_chain
from .chain import FULL, NEEDS_FULL, NEEDS_PM, PM, End, link_edges, tuple_size
from .errors import DomainError, Infeasible, StageFailure
from .gadgets import (absorber_pattern, bridge_pattern, build_absorber, build_bridge, extend_with_K1r,
                      extend_with_star_pair, find_cross_matching, glue, _realise)
from .graph import Graph, VertexSet, bits, induced, iter_bits, min_degree, max_degree, popcount, vset
from .pattern import Pattern
from .verifier import Certificate, verify_certificate


@dataclass
class ExtremalDecomposition:
    case: str
    a: VertexSet
    b: VertexSet
    c: VertexSet = ()
    alpha: Fraction = Fraction(1, 10)
    m: int = 0

    def validate(self, g: Graph) -> None:
        if self.case not in ("one", "two"):
            raise DomainError(f"unknown case {self.case!r}")
        parts = [set(self.a), set(self.b), set(self.c)]
        if sum(map(len, parts)) != g.n or set().union(*parts) != set(range(g.n)):
            raise DomainError("A, B, C must partition the vertex set")
        if self.case == "two":
            if self.c:
                raise DomainError("case two has no C")
            if g.n % 2 or len(self.b) - len(self.a) != 2 * self.m or self.m < 0:
                raise DomainError("case two needs |A| + m = n/2 = |B| - m with m >= 0")

    @classmethod
    def from_case(cls, case, alpha=Fraction(1, 10)) -> "ExtremalDecomposition":
        if case.kind == "extremal_one":
            return cls("one", case.a, case.b, case.c, alpha)
        if case.kind == "extremal_two":
            a, b = vset(case.a), vset(case.b)
            return cls("two", a, b, (), alpha, (len(b) - len(a)) // 2)
        raise DomainError("not an extremal case")

    def report(self) -> dict:
        return {"case": self.case, "A": list(self.a), "B": list(self.b), "C": list(self.c),
                "alpha": str(self.alpha), "m": self.m}


def _check_theorem_input(g: Graph, r: int) -> None:
    if r < 2:
        raise DomainError("r must be at least 2")
    if (g.n * r) % 2:
        raise DomainError("n*r must be even")
    if 2 * min_degree(g) < g.n + r - 2:
        raise DomainError(f"minimum degree {min_degree(g)} is below (n+r-2)/2")


# -------------------------------------------------------------------- stars
def find_disjoint_stars(g: Graph, m: int, s: int, alpha=None) -> list[tuple[int, tuple[int, ...]]]:
    """2m vertex-disjoint copies of K_{1,s}, by repeatedly taking a residual max-degree vertex."""
    if m == 0:
        return []
    if m < 0 or s < 1:
        raise DomainError("need m >= 0 and s >= 1")
    if min_degree(g) < m + s - 1:
        raise DomainError(f"minimum degree {min_degree(g)} < m+s-1 = {m + s - 1}")
    if alpha is not None:
        alpha = Fraction(alpha)
        if max_degree(g) > 4 * s * alpha * g.n:
            raise DomainError("maximum degree exceeds 4 s alpha n")
        if m > alpha * g.n:
            raise DomainError("m exceeds alpha n")
    alive = (1 << g.n) - 1
    stars: list[tuple[int, tuple[int, ...]]] = []
    while len(stars) < 2 * m:
        best, best_deg = None, -1
        for v in iter_bits(alive):
            d = popcount(g.mask[v] & alive)
            if d > best_deg:
                best, best_deg = v, d
        if best is None or best_deg < s:
            break
        # leaves of low residual degree keep the rich vertices for later centres
        nbrs = sorted(iter_bits(g.mask[best] & alive), key=lambda x: (popcount(g.mask[x] & alive), x))
        leaves = tuple(nbrs[:s])
        stars.append((best, leaves))
        alive &= ~(1 << best) & ~bits(leaves)
    if len(stars) < 2 * m:
        # small graphs fall outside the counting argument: bounded backtracking
        found = _stars_backtrack(g, 2 * m, s, budget=200_000)
        if found is None:
            raise StageFailure("stars", "greedy stalled and backtracking found no family",
                               {"found": [[c, list(l)] for c, l in stars], "needed": 2 * m})
        stars = found
    return stars


def _stars_backtrack(g: Graph, count: int, s: int, budget: int):
    nodes = [0]
    out: list[tuple[int, tuple[int, ...]]] = []

    def rec(alive: int, lowest: int) -> bool:
        if len(out) == count:
            return True
        nodes[0] += 1
        if nodes[0] > budget:
            return False
        for c in iter_bits(alive >> lowest << lowest):
            nbrs = list(iter_bits(g.mask[c] & alive))
            if len(nbrs) < s:
                continue
            for leaves in itertools.combinations(nbrs, s):
                out.append((c, leaves))
                if rec(alive & ~(1 << c) & ~bits(leaves), c + 1):
                    return True
                out.pop()
        return False

    return list(out) if rec((1 << g.n) - 1, 0) else None


def check_star_family(g: Graph, stars, s: int) -> bool:
    """Exhaustive check: disjoint, each a centre adjacent to s distinct leaves."""
    seen = set()
    for centre, leaves in stars:
        if len(set(leaves)) != s or centre in leaves:
            return False
        if not all(g.has_edge(centre, x) for x in leaves):
            return False
        group = {centre, *leaves}
        if seen & group:
            return False
        seen |= group
    return True


# ------------------------------------------------------------- case one
@dataclass
class _Piece:
    """Planner view of a chain piece on one side: end tags and vertices used there."""
    first: str
    last: str
    cost: int


@dataclass
class _SidePlan:
    absorb: list[int] = field(default_factory=list)   # C vertices swallowed here
    pairs: int = 0                                    # xi' absorbers (divisibility)
    remainder: int = 0
    closing_columns: int = 0


def _bridge_specs(r: int, layout: str, odd_variant: str) -> list[tuple[str, int]]:
    """(variant, removed pairs) per bridge."""
    s = tuple_size(r)
    if layout == "bare":
        return [("bare", s)] if r % 2 == 0 else []
    if r % 2 == 0:
        return [("even", 1)] * s if layout == "paper" else [("even", s)]
    if odd_variant == "type1":
        return [("odd1", 1)] * s if layout == "paper" else [("odd1", s)]
    head = [("odd1", 1)] * (s - 1) if layout == "paper" else ([("odd1", s - 1)] if s > 1 else [])
    return head + [("odd2", 0)]


def _cross_needed(specs) -> int:
    return sum(1 if v == "odd2" else 2 * k for v, k in specs)


def _side_pieces(r: int, specs, absorb: int, side: str) -> list[_Piece]:
    pieces = []
    for variant, k in specs:
        p = bridge_pattern(r, k, variant)
        cost = sum(1 for role in p.roles if p.pool_of[role] == side)
        i = 0 if side == "A" else 2
        pieces.append(_Piece(p.ends[i][1], p.ends[i + 1][1], cost))
    kind = "xi_even" if r % 2 == 0 else "xi_odd"
    p = absorber_pattern(r, kind)
    for _ in range(absorb):
        pieces.append(_Piece(p.ends[0][1], p.ends[1][1], sum(1 for x in p.roles if p.pool_of[x] == "P")))
    return pieces


def _prime_piece(r: int) -> _Piece:
    p = absorber_pattern(r, "xi_prime_even" if r % 2 == 0 else "xi_prime_odd")
    return _Piece(p.ends[0][1], p.ends[1][1], len(p.roles))


def _glue_columns(r: int, t1: str, t2: str, layout: str) -> int:
    if r % 2 == 0 or t1 == t2:
        return 2 if layout == "paper" else 0
    return 1


def _plan_side(r: int, size: int, pieces: list[_Piece], layout: str) -> _SidePlan | None:
    """Pick the number of xi' absorbers so the leftover closes the cycle.

    Leftover must split into s-tuples, and for odd r the closing column
    count must be even exactly when the two closing ends carry the same tag.
    Gluing choices change the leftover by whole column pairs, so a plan that
    works here survives fallbacks during embedding.
    """
    s = tuple_size(r)
    prime = _prime_piece(r)
    for p in range(2 * s + 1):
        seq = pieces + [prime] * p
        used = sum(x.cost for x in seq)
        used += s * sum(_glue_columns(r, x.last, y.first, layout) for x, y in zip(seq, seq[1:]))
        rem = size - used
        if rem < 0 or rem % s:
            continue
        k = rem // s
        if k == 0 and len(seq) == 1 and layout == "bare":
            continue    # the two cross-edge columns already share a link
        if r % 2 and (k % 2 == 0) != (seq[-1].last == seq[0].first):
            continue
        return _SidePlan([], p, rem, k)
    return None


def solve_extremal_one(g: Graph, dec: ExtremalDecomposition, r: int, seed: int = 0,
                       layouts: Sequence[str] = ("paper", "compact", "bare")) -> Certificate:
    """Build the spanning structure for two near-cliques; see the module docstring."""
    _check_theorem_input(g, r)
    dec.validate(g)
    if dec.case != "one":
        raise DomainError("solve_extremal_one needs a case-one decomposition")
    s = tuple_size(r)
    A, B, C = list(dec.a), list(dec.b), list(dec.c)
    # C vertices go to the side where they have more neighbours (ties: A) and
    # are absorbed there; alternatively they join a side outright, which is
    # what lets their edges serve as cross edges when A and B see nothing of
    # each other (all paths between the cliques run through C)
    home = {u: "A" if g.neighbours_in(u, A) >= g.neighbours_in(u, B) else "B" for u in C}
    flips = [None] + [u for u in C if min(g.neighbours_in(u, A), g.neighbours_in(u, B)) >= 2 * s]
    configs = []
    for flip in flips:
        h = dict(home)
        if flip is not None:
            h[flip] = "B" if h[flip] == "A" else "A"
        configs.append((("absorb", flip), A, B, [u for u in C if h[u] == "A"], [u for u in C if h[u] == "B"]))
    if C:
        for label, to_a in (("home", [u for u in C if home[u] == "A"]), ("A", C), ("B", [])):
            to_b = [u for u in C if u not in to_a]
            configs.append((("merge", label), sorted(A + to_a), sorted(B + to_b), [], []))
    variants = ["type1"] if r % 2 == 0 else ["type1", "type2"]
    attempts, failures = [], []
    for layout in layouts:
        for odd_variant in variants:
            specs = _bridge_specs(r, layout, odd_variant)
            if not specs:
                continue
            for label, sa, sb, ca, cb in configs:
                pa = _plan_side(r, len(sa), _side_pieces(r, specs, len(ca), "A"), layout)
                pb = _plan_side(r, len(sb), _side_pieces(r, specs, len(cb), "B"), layout)
                if pa is None or pb is None:
                    failures.append({"layout": layout, "variant": odd_variant, "c_mode": list(label),
                                     "stage": "divisibility", "A_plan": pa is not None,
                                     "B_plan": pb is not None})
                    continue
                pa.absorb, pb.absorb = ca, cb
                attempts.append((layout, odd_variant, specs, sa, sb, pa, pb, label))
    if not attempts:
        raise StageFailure("divisibility", "no bridge layout leaves side remainders that close up",
                           {"sizes": [len(A), len(B), len(C)], "r": r, "tried": failures})
    for layout, odd_variant, specs, sa, sb, pa, pb, label in attempts:
        try:
            cert = _build_case_one(g, r, sa, sb, specs, pa, pb, layout, seed)
        except (Infeasible, StageFailure) as exc:
            failures.append({"layout": layout, "variant": odd_variant, "c_mode": list(label),
                             **exc.report()})
            continue
        cert.meta.update({"solver": "extremal_one", "layout": layout, "odd_variant": odd_variant,
                          "c_mode": list(label),
                          "plan": {"A": vars(pa), "B": vars(pb)}, "decomposition": dec.report()})
        return cert
    raise StageFailure("extremal_one", "every layout failed", {"attempts": failures})


def _build_case_one(g: Graph, r: int, A, B, specs, pa: _SidePlan, pb: _SidePlan, layout: str,
                    seed: int) -> Certificate:
    asm = Assembly(g, r)
    side_pool = {"A": set(A), "B": set(B)}
    need = _cross_needed(specs)
    try:
        cross = find_cross_matching(g, A, B, need)
    except Infeasible as exc:
        raise StageFailure("cross_matching", exc.detail, exc.report())
    asm.log.append({"stage": "cross_matching", "edges": [list(e) for e in cross]})
    pieces = {"A": [], "B": []}
    reserved = {v for e in cross for v in e}
    pos = 0
    for variant, k in specs:
        count = 1 if variant == "odd2" else 2 * k
        mine = cross[pos:pos + count]
        pos += count
        others = reserved - {v for e in mine for v in e}
        try:
            br = build_bridge(g, r, mine, asm.free(A), asm.free(B), variant,
                              forbidden=asm.used | others)
        except Infeasible as exc:
            raise StageFailure("bridge", exc.detail, exc.report())
        asm.take(br, stage="bridge", variant=variant, pairs=k)
        pieces["A"].append((br.ends[0], br.ends[1]))
        pieces["B"].append((br.ends[2], br.ends[3]))
    for side, plan in (("A", pa), ("B", pb)):
        pool = side_pool[side]
        kind = "xi_even" if r % 2 == 0 else "xi_odd"
        for u in plan.absorb:
            try:
                ab = build_absorber(g, r, kind, [u], asm.free(pool), forbidden=asm.used)
            except Infeasible as exc:
                raise StageFailure("absorb_C", exc.detail, {"vertex": u, **exc.report()})
            asm.take(ab, stage="absorb_C", vertex=u, side=side)
            pieces[side].append((ab.ends[0], ab.ends[1]))
        prime = "xi_prime_even" if r % 2 == 0 else "xi_prime_odd"
        for _ in range(plan.pairs):
            try:
                ab = _first_absorber(g, r, prime, asm.free(pool), asm.used)
            except Infeasible as exc:
                raise StageFailure("divisibility", exc.detail, exc.report())
            asm.take(ab, stage="divisibility", side=side, targets=ab.info["targets"])
            pieces[side].append((ab.ends[0], ab.ends[1]))
    for side in ("A", "B"):
        pool = side_pool[side]
        chain = pieces[side]
        for (_, last), (first, _) in zip(chain, chain[1:]):
            _glue_flex(asm, g, r, last, first, pool, layout)
        start, end = chain[-1][1], chain[0][0]
        rest = asm.free(pool)
        try:
            edges = close_chain(g, r, start, end, rest, seed=seed)
        except Infeasible as exc:
            raise StageFailure("cover", exc.detail, {"side": side, "leftover": rest, **exc.report()})
        asm.take(edges=edges, vertices=rest, stage="cover", side=side, leftover=len(rest))
    cert = verify_certificate(g, asm.edges, r)
    cert.meta["stages"] = asm.log
    return cert


def _first_absorber(g: Graph, r: int, kind: str, free: list[int], used):
    """Try target vertices lowest id first (an adjacent pair for the odd kind)."""
    last = None
    if kind == "xi_prime_odd":
        options = ([u, v] for u in free for v in free if u < v and g.has_edge(u, v))
    else:
        options = ([u] for u in free)
    for tg in itertools.islice(options, 60):
        try:
            return build_absorber(g, r, kind, tg, set(free) - set(tg), forbidden=used)
        except Infeasible as exc:
            last = exc
    raise last or Infeasible(kind, "no target available")


def _glue_flex(asm: Assembly, g: Graph, r: int, e1: End, e2: End, pool, layout: str) -> None:
    """Glue two ends, falling back to two more columns (keeps the closing parity)."""
    c0 = _glue_columns(r, e1.tag, e2.tag, layout)
    order = [c0, c0 + 2] if c0 != 2 else [2, 0]
    last = None
    ends = set(e1.vertices) | set(e2.vertices)
    for c in order:
        try:
            gl = glue(g, r, e1, e2, asm.free(pool), c, forbidden=asm.used - ends)
        except Infeasible as exc:
            last = exc
            continue
        asm.take(gl, vertices=ends, stage="glue", columns=c)
        return
    raise StageFailure("glue", last.detail if last else "", last.report() if last else {})


# ------------------------------------------------------------- case two
def _route_pattern(r: int, tag: str) -> Pattern:
    """Four columns from an end in B: A, B, A, B; the pinned vertex w sits in column 2 or 3."""
    s = tuple_size(r)
    p = Pattern("route")
    u = p.add_column("u", s, "E")
    cols = [p.add_column(f"c{i}_", s, side) for i, side in enumerate("ABAB")]
    kind = FULL if tag == NEEDS_FULL else PM
    prev = u
    for col in cols:
        if kind == FULL:
            p.join(prev, col)
        else:
            p.join_pm(prev, col)
        if r % 2:
            kind = PM if kind == FULL else FULL
        prev = col
    last_kind = FULL if r % 2 == 0 else (PM if kind == FULL else FULL)
    p.ends = [(cols[-1], NEEDS_FULL if r % 2 == 0 else (NEEDS_PM if last_kind == FULL else NEEDS_FULL))]
    return p


def solve_extremal_two(g: Graph, dec: ExtremalDecomposition, r: int, seed: int = 0) -> Certificate:
    _check_theorem_input(g, r)
    dec.validate(g)
    if dec.case != "two":
        raise DomainError("solve_extremal_two needs a case-two decomposition")
    s = tuple_size(r)
    A, B, m = list(dec.a), list(dec.b), dec.m
    # how many of the 2m surplus B vertices go through K_{1,r} (each uses 2s-1 A vertices)
    need_k1r = (-len(A)) % s
    options = [k for k in range(need_k1r, m + 1, s)]
    if not options:
        raise StageFailure("divisibility", "|A| mod s cannot be repaired with the available surplus",
                           {"A": len(A), "s": s, "m": m})
    gb, order_b = induced(g, B)
    deg_b = {order_b[i]: d for i, d in enumerate(gb.degrees())}
    failures = []
    for m_k1r in options:
        try:
            cert = _build_case_two(g, r, A, B, m, m_k1r, deg_b, seed)
        except (Infeasible, StageFailure) as exc:
            failures.append({"k1r": m_k1r, **exc.report()})
            continue
        cert.meta.update({"solver": "extremal_two", "k1r": m_k1r, "decomposition": dec.report()})
        return cert
    raise StageFailure("extremal_two", "every star split failed", {"attempts": failures})


def _build_case_two(g: Graph, r: int, A, B, m: int, m_k1r: int, deg_b: dict, seed: int) -> Certificate:
    s = tuple_size(r)
    asm = Assembly(g, r)
    Aset, Bset = set(A), set(B)
    # step 1: split the surplus; K_{1,r} centres are the B vertices of highest B-degree
    centres, k1r_leaves, taken = [], {}, set()
    for c in sorted(B, key=lambda v: (-deg_b[v], v)):
        if len(centres) == m_k1r:
            break
        if c in taken:
            continue
        leaves = [x for x in sorted(g.adj[c]) if x in Bset and x not in taken and x != c][:r]
        if len(leaves) == r:
            centres.append(c)
            k1r_leaves[c] = leaves
            taken |= {c, *leaves}
    if len(centres) < m_k1r:
        raise StageFailure("stars", "not enough disjoint K_{1,r} inside B",
                           {"found": centres, "needed": m_k1r})
    rest_b = [v for v in B if v not in taken]
    gs, order = induced(g, rest_b)
    pairs_needed = m - m_k1r
    try:
        raw = find_disjoint_stars(gs, pairs_needed, s) if pairs_needed else []
    except (DomainError, StageFailure) as exc:
        raise StageFailure("stars", str(exc), {"pairs_needed": pairs_needed})
    stars = [(order[c], tuple(order[x] for x in leaves)) for c, leaves in raw]
    asm.log.append({"stage": "stars", "k1r_centres": centres, "stars": [[c, list(l)] for c, l in stars]})
    star_vertices = {v for c, l in stars for v in (c, *l)} | taken
    # step 2: the starting tuples v (in A) and u0 (in B), joined completely
    v_tuple = u_tuple = None
    for cand_v in itertools.combinations(sorted(A), s):
        common = Bset - star_vertices
        for x in cand_v:
            common &= set(g.adj[x])
        if len(common) >= s:
            v_tuple = cand_v
            u_tuple = tuple(sorted(common)[:s])
            break
    if v_tuple is None:
        raise StageFailure("start", "no complete K_{s,s} between A and B")
    tag = NEEDS_FULL if r % 2 == 0 else NEEDS_PM
    asm.take(edges=link_edges(v_tuple, u_tuple, FULL), stage="start", v=list(v_tuple), u=list(u_tuple))
    v_end = End(v_tuple, tag)
    cur = End(u_tuple, tag)
    # stars come in pairs
    for i in range(0, len(stars), 2):
        try:
            piece = extend_with_star_pair(g, r, cur, stars[i:i + 2], asm.free(Aset),
                                          forbidden=asm.used - set(cur.vertices))
        except Infeasible as exc:
            raise StageFailure("star_pair", exc.detail, exc.report())
        asm.take(piece, stage="star_pair")
        cur = piece.ends[0]
    for c in centres:
        leaves = k1r_leaves[c]
        try:
            piece = extend_with_K1r(g, r, cur, c, leaves, asm.free(Aset),
                                    asm.free(Bset - star_vertices), forbidden=asm.used - set(cur.vertices))
        except Infeasible as exc:
            raise StageFailure("k1r", exc.detail, exc.report())
        asm.take(piece, stage="k1r", centre=c)
        cur = piece.ends[0]
    a1, b1 = asm.free(Aset), asm.free(Bset)
    if len(a1) != len(b1):
        raise StageFailure("ledger", "|A1| != |B1| after harvesting", {"A1": len(a1), "B1": len(b1)})
    # step 3: route vertices with low cross degree through short detours
    bad = _low_cross(g, a1, b1)
    for w in bad:
        if w in asm.used:
            continue
        try:
            piece = _route_through(g, r, cur, w, asm.free(Aset), asm.free(Bset), asm.used)
        except Infeasible as exc:
            raise StageFailure("low_degree", exc.detail, {"vertex": w, **exc.report()})
        asm.take(piece, stage="low_degree", vertex=w)
        cur = piece.ends[0]
    a2, b2 = asm.free(Aset), asm.free(Bset)
    if len(a2) != len(b2):
        raise StageFailure("ledger", "|A2| != |B2| before covering", {"A2": len(a2), "B2": len(b2)})
    if len(a2) % s:
        raise StageFailure("divisibility", "|A2| not divisible by s", {"A2": len(a2), "s": s})
    # step 4: cover the pair, from the live end in B back to v in A
    try:
        edges = close_chain(g, r, cur, v_end, a2 + b2, split=(a2, b2), seed=seed)
    except Infeasible as exc:
        raise StageFailure("cover", exc.detail, {"A2": a2, "B2": b2, **exc.report()})
    asm.take(edges=edges, vertices=a2 + b2, stage="cover", leftover=len(a2) * 2)
    cert = verify_certificate(g, asm.edges, r)
    cert.meta["stages"] = asm.log
    return cert


def _low_cross(g: Graph, a1: list[int], b1: list[int]) -> list[int]:
    """Vertices seeing less than half of the other side (the cover step wants a 1/2-dense pair)."""
    am, bm = bits(a1), bits(b1)
    low = [v for v in a1 if 2 * popcount(g.mask[v] & bm) < len(b1)]
    low += [v for v in b1 if 2 * popcount(g.mask[v] & am) < len(a1)]
    return sorted(low)


def _route_through(g: Graph, r: int, cur: End, w: int, free_a, free_b, used):
    p = _route_pattern(r, cur.tag)
    fixed = {f"u{j + 1}": v for j, v in enumerate(cur.vertices)}
    # w takes the first slot of a column on its own side (column 2 for A, 3 for B)
    slot = "c2_1" if w in set(free_a) else "c3_1"
    fixed[slot] = w
    pools = {"E": cur.vertices, "A": set(free_a), "B": set(free_b)}
    return _realise(g, p, pools, fixed, forbidden=set(used) - set(cur.vertices))
