"""Pipeline for hosts far from both extremal profiles.

Steps: regular partition; largest matching of the reduced graph; short
connecting chains Y_i -> X_{i+1} closing the pairs into one cycle; trimming
each pair to a balanced super-regular pair; absorbing the exceptional
vertices in batches; covering each pair by a spanning column chain.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .assembly import Assembly, close_chain
from .chain import (FULL, NEEDS_FULL, NEEDS_PM, PM, End, link_for_tag, matched_link_edges, other,
                    tuple_size)
from .errors import CapabilityError, DomainError, Infeasible, StageFailure
from .gadgets import _realise, absorb_exceptional_vertex
from .graph import Graph, bits, iter_bits, min_degree, popcount
from .pattern import Pattern
from .regularity import Partition, RegularPair, regular_partition, super_regularize
from .verifier import Certificate, verify_certificate


@dataclass
class Constants:
    alpha: float = 0.03
    beta: float = 0.01
    d: float = 0.05
    nu: float = 0.02
    eps: float = 0.01
    # desk-scale partition parameters (separate from the hierarchy above)
    partition_eps: Fraction = Fraction(1, 4)
    partition_d: Fraction = Fraction(3, 10)
    ell: int | None = None       # None: even, about n/60 (clusters near 60)
    retries: int = 3

    @classmethod
    def from_dict(cls, data: dict) -> "Constants":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        for k in ("partition_eps", "partition_d"):
            if k in known:
                known[k] = Fraction(str(known[k]))
        unknown = set(data) - set(known)
        if unknown:
            raise DomainError(f"unknown constants: {sorted(unknown)}")
        return cls(**known)

    def report(self) -> dict:
        out = asdict(self)
        out["partition_eps"] = str(self.partition_eps)
        out["partition_d"] = str(self.partition_d)
        return out


@dataclass
class PipelineState:
    host: Graph
    r: int
    partition: Partition
    constants: Constants
    matching: list[tuple[int, int]] = field(default_factory=list)
    paths: list[dict] = field(default_factory=list)
    exceptional: list[int] = field(default_factory=list)     # V0, still to absorb
    used_w: set[int] = field(default_factory=set)            # W: connections and absorbers
    used_w0: set[int] = field(default_factory=set)           # W0: absorbed exceptional vertices
    ledger: dict[int, int] = field(default_factory=dict)     # pair -> in-flight balance
    pools: dict[int, list[set[int]]] = field(default_factory=dict)   # pair -> [X free, Y free]
    live: dict[int, tuple[End, int]] = field(default_factory=dict)   # pair -> (end, side 0/1)
    closing: dict[int, End] = field(default_factory=dict)             # pair -> y end
    in_flight: int = 0
    seed: int = 0
    trace: list[dict] = field(default_factory=list)
    asm: Assembly | None = None

    @property
    def s(self) -> int:
        return tuple_size(self.r)

    def cluster(self, idx: int) -> list[int]:
        return list(self.partition.clusters[idx])

    def pair_of_cluster(self) -> dict[int, tuple[int, int]]:
        out = {}
        for i, (x, y) in enumerate(self.matching):
            out[x] = (i, 0)
            out[y] = (i, 1)
        return out

    def free_of_cluster(self, idx: int) -> set[int]:
        where = self.pair_of_cluster().get(idx)
        if where is None:
            return set()
        i, side = where
        return self.pools[i][side]

    def take(self, vertices, edges=(), stage="", **note) -> None:
        vertices = set(vertices)
        for pools in self.pools.values():
            pools[0] -= vertices
            pools[1] -= vertices
        self.asm.take(edges=edges, vertices=vertices, stage=stage, **note)

    def check(self) -> None:
        """Every vertex is in exactly one of: a free pool, the assembly, V0."""
        seen: dict[int, str] = {}
        def mark(vs, where):
            for v in vs:
                if v in seen:
                    raise StageFailure("invariant", f"vertex {v} is both {seen[v]} and {where}",
                                       {"vertex": v})
                seen[v] = where
        for i, (xf, yf) in self.pools.items():
            mark(xf, f"X{i}")
            mark(yf, f"Y{i}")
        mark(self.asm.used, "used")
        mark(self.exceptional, "V0")
        if len(seen) != self.host.n:
            missing = sorted(set(range(self.host.n)) - set(seen))
            raise StageFailure("invariant", "vertices lost from bookkeeping", {"missing": missing[:20]})
        if not self.used_w0 <= self.asm.used:
            raise StageFailure("invariant", "W0 not inside the assembly")
        total = sum(self.ledger.values())
        if total != self.in_flight:
            raise StageFailure("invariant", "ledger sum differs from in-flight absorptions",
                               {"ledger": dict(self.ledger), "in_flight": self.in_flight})

    def log(self, stage: str, **info) -> None:
        self.trace.append({"stage": stage, **info})

    def dump(self) -> dict:
        return {"matching": self.matching, "exceptional": sorted(self.exceptional),
                "ledger": dict(self.ledger), "pool_sizes": {i: [len(p[0]), len(p[1])] for i, p in self.pools.items()},
                "W": len(self.used_w), "W0": len(self.used_w0)}


# ---------------------------------------------------------------- step 2
def maximum_matching(g: Graph) -> list[tuple[int, int]]:
    """Exact maximum matching by branch and bound over the lowest unmatched vertex."""
    best: list = [[]]
    cur: list[tuple[int, int]] = []

    def rec(mask: int) -> None:
        if len(cur) + popcount(mask) // 2 <= len(best[0]):
            return
        if mask == 0:
            best[0] = list(cur)
            return
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        nb = g.mask[v] & rest
        while nb:
            low = nb & -nb
            u = low.bit_length() - 1
            cur.append((v, u))
            rec(rest & ~low)
            cur.pop()
            nb ^= low
            if len(best[0]) >= len(cur) + popcount(mask) // 2:
                return      # nothing below can beat the best
        rec(rest)

    rec((1 << g.n) - 1)
    return sorted(best[0])


def build_cluster_matching(partition: Partition, constants: Constants | None = None) -> list[tuple[int, int]]:
    """Largest matching in the reduced graph; fails if it is below (1/2 - beta - 2d) ell."""
    c = constants or Constants()
    red = partition.reduced
    ell = red.n
    bound = (0.5 - c.beta - 2 * c.d) * ell
    matching = maximum_matching(red)
    if len(matching) < bound:
        # clusters missed by a maximum matching are pairwise non-adjacent in R,
        # so their union is a sparse set: an extremality witness
        matched = {x for pair in matching for x in pair}
        sparse = sorted(v for j in range(ell) if j not in matched for v in partition.clusters[j])
        raise StageFailure("cluster_matching", f"matching of {len(matching)} below {bound:.2f}",
                           {"matching": matching, "reduced_min_degree": min_degree(red) if ell else 0,
                            "bound": bound, "extremal_witness": {"kind": "extremal_two", "A": sparse}})
    return matching


# ---------------------------------------------------------------- step 3
def _column_path_pattern(r: int, pools: list[str], first_kind: str) -> Pattern:
    """Columns c0..ck with the given pools, links alternating (odd r) from ``first_kind``."""
    s = tuple_size(r)
    p = Pattern("connect")
    cols = [p.add_column(f"c{i}_", s, pool) for i, pool in enumerate(pools)]
    kind = first_kind
    for a, b in zip(cols, cols[1:]):
        if kind == FULL:
            p.join(a, b)
        else:
            p.join_pm(a, b)
        if r % 2:
            kind = other(kind)
    return p


def _tag_needing(r: int, kind: str) -> str:
    """Tag of an end column whose single link so far has the given kind."""
    if r % 2 == 0:
        return NEEDS_FULL
    return NEEDS_FULL if kind == PM else NEEDS_PM


def _route(state: PipelineState, a: int, b: int, long: bool, load: dict[int, int]):
    """Clusters strictly between a and b: one (three-cluster route) or two."""
    red = state.partition.reduced
    poc = state.pair_of_cluster()
    def score(z):
        # prefer clusters whose partner has been used more (keeps pairs balanced), then bigger pools
        i, side = poc.get(z, (None, None))
        if i is None:
            return (1, 0, z)
        partner = state.matching[i][1 - side]
        return (0, load.get(z, 0) - load.get(partner, 0), -len(state.free_of_cluster(z)), z)
    if not long:
        cands = [z for z in red.adj[a] & red.adj[b] if z not in (a, b)]
        return [[z] for z in sorted(cands, key=score)]
    out = []
    for z1 in sorted(red.adj[a] - {b}, key=score):
        for z2 in sorted(red.adj[z1] & red.adj[b] - {a, z1}, key=score):
            out.append([z1, z2])
    return out


def _well_connected(state: PipelineState, tup, partner: set[int]) -> bool:
    need = max(0.5 * state.constants.d ** state.s * len(partner) + 0, 2 * state.s)
    common = bits(partner)
    for v in tup:
        common &= state.host.mask[v]
    return popcount(common) >= need


def connect_pairs(state: PipelineState) -> PipelineState:
    """Chains Y_i -> X_{i+1} through one or two intermediate clusters."""
    r, s = state.r, state.s
    k = len(state.matching)
    if k < 2:
        raise StageFailure("connect", "need at least two pairs to close a cycle", {"pairs": k})
    # odd r: links alternate around the whole cycle, so the number of
    # connector columns must be even; one long route fixes an odd count
    long_at = k - 1 if (r % 2 and k % 2) else None
    kind = FULL
    load: dict[int, int] = {}
    for i in range(k):
        yi = state.matching[i][1]
        xj = state.matching[(i + 1) % k][0]
        routes = _route(state, yi, xj, i == long_at, load)
        if not routes:
            red = state.partition.reduced
            raise StageFailure("connect", "no route in the reduced graph",
                               {"from": yi, "to": xj, "N_from": sorted(red.adj[yi]),
                                "N_to": sorted(red.adj[xj])})
        last_exc = None
        for mids in routes[:12]:
            clusters = [yi, *mids, xj]
            pools = {f"K{j}": state.free_of_cluster(c) for j, c in enumerate(clusters)}
            p = _column_path_pattern(r, list(pools), kind)
            forbidden = set()
            piece = None
            for _ in range(6):
                try:
                    piece = _realise(state.host, p, pools, forbidden=forbidden | state.asm.used)
                except Infeasible as exc:
                    last_exc = exc
                    piece = None
                    break
                y_t = tuple(piece.vertex_map[f"c0_{j + 1}"] for j in range(s))
                x_t = tuple(piece.vertex_map[f"c{len(clusters) - 1}_{j + 1}"] for j in range(s))
                i2 = (i + 1) % k
                ok_y = _well_connected(state, y_t, state.pools[i][0])
                ok_x = _well_connected(state, x_t, state.pools[i2][1])
                if ok_y and ok_x:
                    break
                forbidden |= set(y_t if not ok_y else ()) | set(x_t if not ok_x else ())
                piece = None
            if piece is not None:
                break
        if piece is None:
            raise StageFailure("connect", "no well-connected connecting chain",
                               {"from": yi, "to": xj, **(last_exc.report() if last_exc else {})})
        for z in clusters[1:-1]:
            load[z] = load.get(z, 0) + 1
        n_links = len(clusters) - 1
        last_kind = kind if (r % 2 == 0 or n_links % 2) else other(kind)
        state.take(piece.vertices(), piece.edges, stage="connect", pair=i, route=clusters)
        state.used_w |= piece.vertices()
        state.closing[i] = End(y_t, _tag_needing(r, kind))
        x_end = End(x_t, _tag_needing(r, last_kind))
        state.live[(i + 1) % k] = (x_end, 0)
        state.paths.append({"from_pair": i, "route": clusters, "y": list(y_t), "x": list(x_t)})
        # the pair chain between x and the next y has an even number of
        # columns, so the next connector must start with this one's last link
        kind = last_kind
    state.log("connect", routes=[p["route"] for p in state.paths])
    state.check()
    return state


# ---------------------------------------------------------------- step 4
def super_regularize_matching(state: PipelineState) -> PipelineState:
    c = state.constants
    n = state.host.n
    removed_total = []
    for i in range(len(state.matching)):
        xf, yf = state.pools[i]
        if not xf or not yf:
            raise StageFailure("super_regularize", "a pair side is empty", {"pair": i})
        p = RegularPair(state.host, sorted(xf), sorted(yf), c.partition_eps)
        res = super_regularize(p, multiple=state.s)
        if res.pair is None:
            raise StageFailure("super_regularize", res.reason, {"pair": i, **res.report()})
        gone = list(res.removed_a) + list(res.removed_b)
        xf -= set(gone)
        yf -= set(gone)
        state.exceptional.extend(gone)
        removed_total.extend(gone)
    cap = 2 * c.beta * n + len(state.partition.exceptional) + _unmatched(state)
    state.log("super_regularize", removed=sorted(removed_total), V0=len(state.exceptional), cap=cap)
    if len(state.exceptional) > cap:
        raise StageFailure("super_regularize", "exceptional set above its cap",
                           {"V0": len(state.exceptional), "cap": cap})
    state.check()
    return state


def _unmatched(state: PipelineState) -> int:
    matched = {c for pair in state.matching for c in pair}
    return sum(len(cl) for j, cl in enumerate(state.partition.clusters) if j not in matched)


# ---------------------------------------------------------------- step 5
def _step_column(state: PipelineState, end: End, pool: set[int], forbidden=()):
    """Append one column from ``pool`` to ``end``."""
    r, s = state.r, state.s
    p = Pattern("step")
    u = p.add_column("u", s, "E")
    col = p.add_column("c", s, "P")
    kind = link_for_tag(end.tag)
    if kind == FULL:
        p.join(u, col)
    else:
        p.join_pm(u, col)
    p.ends = [(col, _tag_needing(r, kind))]
    fixed = {f"u{j + 1}": v for j, v in enumerate(end.vertices)}
    return _realise(state.host, p, {"E": end.vertices, "P": pool}, fixed,
                    forbidden=(state.asm.used - set(end.vertices)) | set(forbidden))


def _h_score(state: PipelineState, v: int, pool: set[int]) -> int:
    return popcount(state.host.mask[v] & bits(pool))


def _common(state: PipelineState, tup, pool) -> int:
    m = bits(pool)
    for v in tup:
        m &= state.host.mask[v]
    return m


def _end_need(state: PipelineState) -> int:
    return 2 * state.s + 1


def _reserve(state: PipelineState, i: int) -> set[int]:
    """Keep a few X-neighbours of the closing tuple so the final link stays possible."""
    y = state.closing[i]
    common = sorted(iter_bits(_common(state, y.vertices, state.pools[i][0])))
    return set(common[:2 * state.s])


def _extend(state: PipelineState, i: int, build, new_side: int, stage: str, **note):
    """Embed a piece from pair i's live end whose new end stays well connected."""
    end, _ = state.live[i]
    extra: set[int] = set()
    reserve = _reserve(state, i)
    for _ in range(8):
        piece = build(end, extra | reserve)
        new_end = piece.ends[0]
        partner = state.pools[i][1 - new_side] - piece.vertices() - reserve
        common = _common(state, new_end.vertices, partner)
        if popcount(common) >= _end_need(state):
            state.take(piece.vertices() - set(end.vertices), piece.edges, stage=stage, pair=i, **note)
            state.live[i] = (new_end, new_side)
            return piece
        worst = min(new_end.vertices, key=lambda v: _h_score(state, v, partner))
        extra.add(worst)
    raise Infeasible(stage, "new live end is not well connected", pair=i)


def _absorb_one(state: PipelineState, i: int, mode: str, vertices) -> None:
    _, side = state.live[i]
    same, partner = state.pools[i][side], state.pools[i][1 - side]

    def build(end, forbidden):
        return absorb_exceptional_vertex(state.host, state.r, mode, end, vertices, same, partner,
                                         forbidden=(state.asm.used - set(end.vertices)) | forbidden)
    piece = _extend(state, i, build, side, "absorb", mode=mode, absorbed=list(vertices), side="XY"[side])
    for v in vertices:
        state.exceptional.remove(v)
    state.used_w0 |= set(vertices)
    state.used_w |= piece.vertices() - set(vertices)


def _absorb_best(state: PipelineState, i: int, tries: int = 4) -> int:
    """Absorb whichever pending vertex fits best at pair i's live end."""
    side = state.live[i][1]
    pool = state.pools[i][side]
    order = sorted(state.exceptional, key=lambda v: (-_h_score(state, v, pool), v))
    last = None
    for v in order[:tries]:
        try:
            _absorb_one(state, i, "interior", [v])
            return v
        except Infeasible as exc:
            last = exc
    raise last or Infeasible("absorb", "nothing left to absorb", pair=i)


def _switch(state: PipelineState, i: int) -> None:
    """Step the live end across to the other side, choosing the column whose
    common neighbourhood back in the partner side is largest."""
    end, side = state.live[i]
    s = state.s
    pool = state.pools[i][1 - side] - state.asm.used
    partner = state.pools[i][side] - _reserve(state, i)
    kind = link_for_tag(end.tag)
    slack = 0 if kind == FULL else 1
    cands = [v for v in pool
             if popcount(state.host.mask[v] & bits(end.vertices)) >= s - slack]
    cands.sort(key=lambda v: (-_h_score(state, v, partner), v))
    best = None
    for col in itertools.combinations(cands[:14], s):
        score = popcount(_common(state, col, partner - set(col)))
        if best is not None and score <= best[0]:
            continue
        edges = matched_link_edges(state.host, end.vertices, col, kind)
        if edges is not None:
            best = (score, col, edges)
    if best is None or best[0] < _end_need(state):
        raise Infeasible("switch", "no well-connected column on the other side", pair=i,
                         candidates=len(cands), best=best[0] if best else -1)
    _, col, edges = best
    state.take(col, edges, stage="switch", pair=i)
    state.live[i] = (End(tuple(col), _tag_needing(state.r, kind)), 1 - side)
    state.used_w |= set(col)


def _room(state: PipelineState, i: int) -> int:
    return min(len(state.pools[i][0]), len(state.pools[i][1]))


def _reset(state: PipelineState, touched: set[int]) -> None:
    """Re-trim touched pairs whose free parts lost their minimum degree."""
    c = state.constants
    for i in sorted(touched):
        xf, yf = state.pools[i]
        if not xf or not yf:
            continue
        res = super_regularize(RegularPair(state.host, sorted(xf), sorted(yf), c.partition_eps),
                               multiple=state.s)
        if res.pair is None:
            continue
        gone = list(res.removed_a) + list(res.removed_b)
        if gone:
            xf -= set(gone)
            yf -= set(gone)
            state.exceptional.extend(gone)
            state.log("reset", pair=i, removed=gone)


def absorb_exceptional(state: PipelineState) -> PipelineState:
    """Batches of 2s: s vertices at the X end, switch, s at the Y end, switch back; then the endgame."""
    s, c = state.s, state.constants
    n = state.host.n
    reset_every = max(1, math.ceil(c.nu * n))
    absorbed_since = 0
    touched: set[int] = set()
    guard = 0
    batch_cost = 2 * s * (4 * s - 1) + 2 * s
    while len(state.exceptional) >= 2 * s:
        guard += 1
        if guard > 4 * n:
            raise StageFailure("absorb", "absorption does not terminate", state.dump())
        pairs = sorted(range(len(state.matching)), key=lambda i: -_room(state, i))
        done = False
        for i in pairs:
            if _room(state, i) < batch_cost // 2 + 2 * s:
                continue
            snapshot = _snapshot(state)
            try:
                if state.live[i][1] != 0:
                    raise StageFailure("absorb", "live end not on the X side", {"pair": i})
                for _ in range(s):
                    _absorb_best(state, i)
                    state.ledger[i] = state.ledger.get(i, 0) + 1
                    state.in_flight += 1
                    state.check()
                _switch(state, i)
                for _ in range(s):
                    _absorb_best(state, i)
                    state.ledger[i] -= 1
                    state.in_flight -= 1
                    state.check()
                _switch(state, i)
            except (Infeasible, StageFailure) as exc:
                _restore(state, snapshot)
                state.log("absorb_retry", pair=i, reason=str(exc)[:200])
                continue
            touched.add(i)
            absorbed_since += 2 * s
            done = True
            break
        if not done:
            raise StageFailure("absorb", "no pair can take a batch", state.dump())
        if absorbed_since >= reset_every:
            _reset(state, touched)
            absorbed_since, touched = 0, set()
    _endgame(state)
    if any(state.ledger.values()):
        raise StageFailure("absorb", "ledger not restored", state.dump())
    w_cap = 20 * s * c.beta * n
    state.log("absorb", W=len(state.used_w), W0=len(state.used_w0), W_cap=w_cap)
    state.check()
    return state


def _snapshot(state: PipelineState):
    return (set(state.asm.edges), set(state.asm.used), len(state.asm.log), list(state.exceptional),
            {i: [set(a), set(b)] for i, (a, b) in state.pools.items()}, dict(state.live),
            set(state.used_w), set(state.used_w0), dict(state.ledger), state.in_flight)


def _restore(state: PipelineState, snap) -> None:
    edges, used, nlog, exc, pools, live, w, w0, ledger, fl = snap
    state.asm.edges, state.asm.used = edges, used
    del state.asm.log[nlog:]
    state.exceptional, state.pools, state.live = exc, pools, live
    state.used_w, state.used_w0, state.ledger, state.in_flight = w, w0, ledger, fl


def _endgame(state: PipelineState) -> None:
    """Fewer than 2s leftovers: one at a time (even r) or adjacent pairs (odd r)."""
    r = state.r
    left = sorted(state.exceptional)
    if not left:
        return
    if r % 2 == 0:
        groups = [[v] for v in left]
        mode = "endgame_even"
    else:
        groups = _pair_up(state.host, left)
        if groups is None:
            raise StageFailure("endgame", "odd r leftovers cannot be paired by edges",
                               {"leftover": left})
        mode = "endgame_odd"
    for grp in groups:
        order = sorted(range(len(state.matching)), key=lambda i: -_room(state, i))
        last = None
        for i in order:
            snapshot = _snapshot(state)
            try:
                _absorb_one(state, i, mode, grp)
            except (Infeasible, StageFailure) as exc:
                _restore(state, snapshot)
                last = exc
                continue
            break
        else:
            raise StageFailure("endgame", f"could not absorb {grp}",
                               {"group": grp, **(last.report() if last else {})})
    state.log("endgame", groups=groups)


def _pair_up(g: Graph, vs: list[int]):
    if not vs:
        return []
    v = vs[0]
    for u in vs[1:]:
        if g.has_edge(v, u):
            rest = _pair_up(g, [w for w in vs[1:] if w != u])
            if rest is not None:
                return [[v, u]] + rest
    return None


# ---------------------------------------------------------------- step 6
def complete_spanning(state: PipelineState) -> Certificate:
    r, s = state.r, state.s
    if state.exceptional:
        raise StageFailure("complete", "exceptional vertices remain", {"V0": sorted(state.exceptional)})
    for i in range(len(state.matching)):
        end, side = state.live[i]
        y = state.closing[i]
        xf, yf = state.pools[i]
        if side != 0:
            raise StageFailure("complete", "live end on the wrong side", {"pair": i})
        if len(xf) != len(yf) or len(xf) % s:
            raise StageFailure("complete", "pair not balanced", {"pair": i, "X": len(xf), "Y": len(yf)})
        last = None
        for attempt in range(state.constants.retries):
            try:
                # columns alternate Y, X, ...; pools over the embedding cap are tiled
                edges = close_chain(state.host, r, end, y, sorted(xf | yf), split=(yf, xf),
                                    seed=state.seed + attempt)
            except (Infeasible, CapabilityError) as exc:
                last = exc
                continue
            break
        else:
            rep = last.report() if isinstance(last, Infeasible) else {"detail": str(last)}
            raise StageFailure("complete", f"pair {i} could not be covered", {"pair": i, **rep})
        state.take(xf | yf, edges, stage="complete", pair=i)
    cert = verify_certificate(state.host, state.asm.edges, r)
    cert.meta.update({"solver": "non_extremal", "trace": state.trace, "constants": state.constants.report()})
    return cert


# --------------------------------------------------------------- driver
def cluster_count(n: int, constants: Constants | None = None) -> int:
    c = constants or Constants()
    if c.ell is not None:
        return c.ell
    return 2 * max(2, round(n / 120))


def start_state(g: Graph, r: int, constants: Constants | None = None, seed: int = 0,
                partition: Partition | None = None) -> PipelineState:
    c = constants or Constants()
    if r < 2:
        raise DomainError("r must be at least 2")
    if (g.n * r) % 2:
        raise DomainError("n*r must be even")
    if 2 * min_degree(g) < g.n + r - 2:
        raise DomainError(f"minimum degree {min_degree(g)} is below (n+r-2)/2")
    part = partition or regular_partition(g, c.partition_eps, c.partition_d, cluster_count(g.n, c), seed=seed)
    state = PipelineState(g, r, part, c, seed=seed, asm=Assembly(g, r))
    state.exceptional = list(part.exceptional)
    state.log("partition", ell=part.ell, exceptional=len(part.exceptional),
              reduced_edges=part.reduced.num_edges())
    state.matching = build_cluster_matching(part, c)
    matched = {x for pair in state.matching for x in pair}
    for j, cl in enumerate(part.clusters):
        if j not in matched:
            state.exceptional.extend(cl)
    for i, (x, y) in enumerate(state.matching):
        state.pools[i] = [set(part.clusters[x]), set(part.clusters[y])]
        state.ledger[i] = 0
    state.log("cluster_matching", pairs=state.matching)
    state.check()
    return state


def run_pipeline(g: Graph, r: int, constants: Constants | None = None, seed: int = 0) -> Certificate:
    """All steps; a StageFailure carries the stage name, a witness and the trace so far."""
    c = constants or Constants()
    failures = []
    for attempt in range(c.retries):
        state = None
        try:
            state = start_state(g, r, c, seed + attempt)
            connect_pairs(state)
            super_regularize_matching(state)
            absorb_exceptional(state)
            cert = complete_spanning(state)
            cert.meta["attempt"] = attempt
            return cert
        except StageFailure as exc:
            if exc.stage in ("cluster_matching",):
                raise
            failures.append({"seed": seed + attempt, **exc.report(),
                             "trace": state.trace if state else []})
    last = failures[-1]
    raise StageFailure(last["stage"], f"failed after {c.retries} attempts", {"attempts": failures})
