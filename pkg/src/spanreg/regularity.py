"""Regular pairs, partitions and the extremality detector, at desk scale.

Exact regularity checking enumerates one side's subsets and picks the best
subset of the other side by sorting degrees, which is exact because the two
sides are disjoint.  Everything asymptotic (the partition lemma, the
blow-up lemma) is replaced by procedures whose output is checked.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chain import fill_column_path
from .errors import CapabilityError, DomainError
from .graph import (Graph, VertexSet, bits, density, min_degree,
                    popcount, vset)

EXACT_SIDE_CAP = 14
EMBED_SIDE_CAP = 40


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**6)


@dataclass
class RegularPair:
    host: Graph
    a: VertexSet
    b: VertexSet
    eps: Fraction
    d: Fraction = Fraction(0)
    verified: bool = False

    def __post_init__(self) -> None:
        self.a, self.b = vset(self.a), vset(self.b)
        self.eps = _frac(self.eps)
        if not self.a or not self.b:
            raise DomainError("regular pair sides must be non-empty")
        if set(self.a) & set(self.b):
            raise DomainError("regular pair sides must be disjoint")
        self.d = density(self.host, self.a, self.b)

    def degree_into(self, v: int, side: Sequence[int]) -> int:
        return popcount(self.host.mask[v] & bits(side))

    def report(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "eps": str(self.eps), "d": str(self.d),
                "verified": self.verified}


@dataclass
class RegularityResult:
    regular: bool
    mode: str
    witness: tuple[VertexSet, VertexSet] | None = None
    deviation: Fraction | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.regular

    def report(self) -> dict:
        w = None if self.witness is None else [list(self.witness[0]), list(self.witness[1])]
        return {"regular": self.regular, "mode": self.mode, "witness": w,
                "deviation": None if self.deviation is None else str(self.deviation),
                "checked": self.checked, "one_sided": self.mode == "sampled"}


def _best_partner(p: RegularPair, xs: Sequence[int], b_mask_list: list[int], k: int):
    """Densest and sparsest k-subsets of ``b`` against ``xs`` (exact: sides are disjoint)."""
    xm = bits(xs)
    degs = sorted((popcount(p.host.mask[y] & xm), y) for y in b_mask_list)
    low = degs[:k]
    high = degs[-k:]
    return (sum(d for d, _ in low), [y for _, y in low]), (sum(d for d, _ in high), [y for _, y in high])


def _check_subsets(p: RegularPair, xs: Sequence[int], k_min: int) -> tuple | None:
    b = list(p.b)
    for k in range(k_min, len(b) + 1):
        (lo, ys_lo), (hi, ys_hi) = _best_partner(p, xs, b, k)
        size = len(xs) * k
        for count, ys in ((hi, ys_hi), (lo, ys_lo)):
            dev = abs(Fraction(count, size) - p.d)
            if dev > p.eps:
                return vset(xs), vset(ys), dev
    return None


def is_eps_regular(p: RegularPair, mode: str = "exact", trials: int = 200, seed: int = 0) -> RegularityResult:
    """Check the definition: every X, Y with |X| >= eps|a|, |Y| >= eps|b| has |d(X,Y) - d| <= eps.

    ``exact`` is a full decision for sides up to 14 vertices.  ``sampled``
    returns False only with a concrete witness; True means nothing was found.
    """
    ka = max(1, math.ceil(p.eps * len(p.a)))
    kb = max(1, math.ceil(p.eps * len(p.b)))
    if mode == "exact":
        small, other = (p.a, p.b) if len(p.a) <= len(p.b) else (p.b, p.a)
        if len(small) > EXACT_SIDE_CAP:
            raise CapabilityError(f"exact regularity needs a side of at most {EXACT_SIDE_CAP} vertices; "
                                  f"use mode='sampled'")
        q = p if small is p.a else RegularPair(p.host, p.b, p.a, p.eps)
        k_small = ka if small is p.a else kb
        k_other = kb if small is p.a else ka
        checked = 0
        for size in range(k_small, len(small) + 1):
            for xs in itertools.combinations(small, size):
                checked += 1
                hit = _check_subsets(q, xs, k_other)
                if hit is not None:
                    x, y, dev = hit
                    wit = (x, y) if small is p.a else (y, x)
                    return RegularityResult(False, "exact", wit, dev, checked)
        return RegularityResult(True, "exact", checked=checked)
    if mode != "sampled":
        raise DomainError(f"unknown mode {mode!r}")
    if trials < 1:
        raise DomainError("sampled mode needs at least one trial")
    rng = random.Random(seed)
    a, b = list(p.a), list(p.b)
    for t in range(trials):
        size = rng.randint(kb, len(b))
        ys = rng.sample(b, size)
        # pair the random Y with the X that deviates most (degree-sorted)
        ym = bits(ys)
        degs = sorted((popcount(p.host.mask[x] & ym), x) for x in a)
        xsize = rng.randint(ka, len(a))
        for part in (degs[:xsize], degs[-xsize:]):
            count = sum(dg for dg, _ in part)
            dev = abs(Fraction(count, xsize * size) - p.d)
            if dev > p.eps:
                xs = [x for _, x in part]
                return RegularityResult(False, "sampled", (vset(xs), vset(ys)), dev, t + 1)
    return RegularityResult(True, "sampled", checked=trials)


def slice_pair(p: RegularPair, a2: Iterable[int], b2: Iterable[int], gamma) -> RegularPair:
    """Restrict a regular pair to large subsets; the parameter doubles."""
    a2, b2 = vset(a2), vset(b2)
    gamma = _frac(gamma)
    if gamma <= p.eps:
        raise DomainError("slicing needs gamma > eps")
    if not set(a2) <= set(p.a) or not set(b2) <= set(p.b):
        raise DomainError("slices must be subsets of the pair's sides")
    if len(a2) < gamma * len(p.a) or len(b2) < gamma * len(p.b):
        raise DomainError("slice smaller than gamma times the side")
    out = RegularPair(p.host, a2, b2, 2 * p.eps)
    if p.verified:
        assert abs(out.d - p.d) <= p.eps, "sliced density drifted more than eps"
    return out


@dataclass
class SuperRegularResult:
    pair: RegularPair | None
    removed_a: VertexSet
    removed_b: VertexSet
    ok: bool
    reason: str = ""
    min_degree_fraction: Fraction | None = None

    @property
    def removed(self) -> VertexSet:
        return vset(self.removed_a + self.removed_b)

    def report(self) -> dict:
        return {"ok": self.ok, "reason": self.reason, "removed_a": list(self.removed_a),
                "removed_b": list(self.removed_b),
                "pair": None if self.pair is None else self.pair.report()}


def super_regularize(p: RegularPair, keep: Iterable[int] = (), multiple: int = 1) -> SuperRegularResult:
    """Drop low-degree vertices, then balance the sides.

    A vertex is low if it has fewer than (d - eps)|other side| neighbours
    across.  ``keep`` vertices are never dropped for balance (dropping one
    for low degree is reported as a failure).  ``multiple`` rounds the
    balanced size down to a multiple (the chain tuple size).
    """
    host, d, eps = p.host, p.d, p.eps
    a, b = list(p.a), list(p.b)
    keep_set = set(keep)
    removed_a: list[int] = []
    removed_b: list[int] = []
    changed = True
    while changed:
        changed = False
        bm, am = bits(b), bits(a)
        for side, other_mask, other_len, bucket in ((a, bm, len(b), removed_a), (b, am, len(a), removed_b)):
            low = [v for v in side if popcount(host.mask[v] & other_mask) < (d - eps) * other_len]
            if low:
                for v in low:
                    side.remove(v)
                    bucket.append(v)
                changed = True
                break
    dropped = removed_a + removed_b
    if any(v in keep_set for v in dropped):
        return SuperRegularResult(None, vset(removed_a), vset(removed_b), False,
                                  "a protected vertex has low degree", None)
    if len(removed_a) > eps * len(p.a) or len(removed_b) > eps * len(p.b):
        return SuperRegularResult(None, vset(removed_a), vset(removed_b), False,
                                  "more than an eps-fraction removed: the pair is not genuinely regular")
    target = min(len(a), len(b))
    target -= target % multiple
    for side, bucket in ((a, removed_a), (b, removed_b)):
        # trim highest ids first, sparing protected vertices
        order = sorted(side, key=lambda v: (v in keep_set, -v))
        extra = len(side) - target
        for v in order[:extra]:
            if v in keep_set:
                return SuperRegularResult(None, vset(removed_a), vset(removed_b), False,
                                          "cannot balance without dropping a protected vertex")
            side.remove(v)
            bucket.append(v)
    if not a or not b:
        return SuperRegularResult(None, vset(removed_a), vset(removed_b), False, "pair became empty")
    out = RegularPair(host, a, b, p.eps)
    fa = min(Fraction(popcount(host.mask[v] & bits(b)), len(b)) for v in a)
    fb = min(Fraction(popcount(host.mask[v] & bits(a)), len(a)) for v in b)
    frac = min(fa, fb)
    ok = frac >= d - 3 * eps
    return SuperRegularResult(out, vset(removed_a), vset(removed_b), ok,
                              "" if ok else "degree scan below (d - 3 eps) after balancing", frac)


def is_super_regular(p: RegularPair, delta) -> bool:
    """Direct degree scan: every vertex sees at least delta of the other side."""
    delta = _frac(delta)
    bm, am = bits(p.b), bits(p.a)
    return (all(popcount(p.host.mask[v] & bm) >= delta * len(p.b) for v in p.a)
            and all(popcount(p.host.mask[v] & am) >= delta * len(p.a) for v in p.b))


# --------------------------------------------------------------- partitions
@dataclass
class Partition:
    host: Graph
    exceptional: VertexSet
    clusters: list[VertexSet]
    cluster_size: int
    reduced: Graph
    d: Fraction
    eps: Fraction
    checks: dict = field(default_factory=dict)
    pair_density: dict = field(default_factory=dict)

    @property
    def ell(self) -> int:
        return len(self.clusters)

    def cluster_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.clusters) for v in c}

    def report(self) -> dict:
        return {"ell": self.ell, "cluster_size": self.cluster_size,
                "exceptional": list(self.exceptional),
                "clusters": [list(c) for c in self.clusters],
                "reduced_edges": [list(e) for e in self.reduced.sorted_edges()],
                "eps": str(self.eps), "d": str(self.d), "checks": self.checks}


def _pair_irregular(g: Graph, x: VertexSet, y: VertexSet, eps: Fraction, trials: int, seed: int):
    res = is_eps_regular(RegularPair(g, x, y, eps), "sampled", trials, seed)
    return None if res.regular else res.witness


def regular_partition(g: Graph, eps, d, ell: int, seed: int = 0, trials: int = 40,
                      refine_rounds: int = 2) -> Partition:
    """Seeded equipartition plus local swaps; every property is checked afterwards.

    Edge ij of the reduced graph means: sampled regularity found no witness
    and the density reaches d.
    """
    eps, d = _frac(eps), _frac(d)
    if not (0 < eps < 1 and 0 < d < 1):
        raise DomainError("eps and d must lie in (0, 1)")
    if ell < 1 or ell > g.n:
        raise DomainError("need 1 <= ell <= n")
    rng = random.Random(seed)
    order = list(range(g.n))
    rng.shuffle(order)
    size = g.n // ell
    clusters = [sorted(order[i * size:(i + 1) * size]) for i in range(ell)]
    exceptional = sorted(order[ell * size:])

    def check(cl, i, j):
        return _pair_irregular(g, tuple(cl[i]), tuple(cl[j]), eps, trials, seed + i * ell + j)

    bad = {}
    for i in range(ell):
        for j in range(i + 1, ell):
            w = check(clusters, i, j)
            if w is not None:
                bad[(i, j)] = w
    swaps = refine_rounds * ell
    while bad and swaps > 0 and len(bad) < ell * (ell - 1) // 2:
        # move a witness vertex out of its cluster; keep the swap if fewer pairs fail
        swaps -= 1
        (i, j), (wx, _) = rng.choice(sorted(bad.items()))
        k = rng.choice([c for c in range(ell) if c not in (i, j)] or [j])
        u = rng.choice(list(wx))
        v = rng.choice(clusters[k])
        trial = [list(c) for c in clusters]
        trial[i][trial[i].index(u)] = v
        trial[k][trial[k].index(v)] = u
        trial = [sorted(c) for c in trial]
        touched = {(min(x, y), max(x, y)) for x in (i, k) for y in range(ell) if x != y}
        new_bad = {key: w for key, w in bad.items() if key not in touched}
        for key in touched:
            w = check(trial, *key)
            if w is not None:
                new_bad[key] = w
        if len(new_bad) < len(bad):
            clusters, bad = trial, new_bad
    dens = {}
    red_edges = []
    for i in range(ell):
        for j in range(i + 1, ell):
            dij = density(g, clusters[i], clusters[j])
            dens[(i, j)] = dij
            if (i, j) not in bad and dij >= d:
                red_edges.append((i, j))
    reduced = Graph(ell, red_edges)
    part = Partition(g, vset(exceptional), [vset(c) for c in clusters], size, reduced, d, eps,
                     pair_density=dens)
    part.checks = check_partition(part, irregular=len(bad))
    return part


def check_partition(part: Partition, irregular: int | None = None) -> dict:
    """A-posteriori report of the four partition properties."""
    g = part.host
    n = g.n
    cover = sorted(set(part.exceptional).union(*map(set, part.clusters)))
    disjoint = sum(len(c) for c in part.clusters) + len(part.exceptional) == n and cover == list(range(n))
    p1 = len(part.exceptional) <= part.eps * n + part.ell
    where = part.cluster_of()
    # G': keep only edges across pairs that are edges of the reduced graph
    kept = [0] * n
    for u, v in g.edges:
        cu, cv = where.get(u), where.get(v)
        if cu is not None and cv is not None and cu != cv and part.reduced.has_edge(cu, cv):
            kept[u] += 1
            kept[v] += 1
    slack = (part.d + part.eps) * n
    p2_fail = [v for v in where if kept[v] < g.degree(v) - slack]
    predicate = all((density(g, part.clusters[i], part.clusters[j]) >= part.d)
                    for i, j in part.reduced.edges)
    return {
        "P1_exceptional_small": p1,
        "P2_degree_loss": not p2_fail,
        "P2_violations": len(p2_fail),
        "P3_clusters_independent": "implicit (intra-cluster edges are never used)",
        "P4_pairs_regular_or_dropped": True,
        "equal_cluster_sizes": len({len(c) for c in part.clusters}) <= 1,
        "disjoint_cover": disjoint,
        "reduced_edge_predicate": predicate,
        "irregular_pairs_dropped": irregular,
    }


# ------------------------------------------------------ extremality detector
def _window(n: int, alpha: Fraction) -> tuple[int, int]:
    return max(1, math.ceil((Fraction(1, 2) - alpha) * n)), n // 2


def _witness_density(g: Graph, a: Sequence[int], b: Sequence[int]) -> Fraction:
    return density(g, a, b)


def _exact_detect(g: Graph, alpha: Fraction):
    n = g.n
    lo, hi = _window(n, alpha)
    best: list = [alpha, None]
    for asize in range(lo, hi + 1):
        for a in itertools.combinations(range(n), asize):
            am = bits(a)
            dega = [popcount(g.mask[v] & am) for v in range(n)]
            lw = sorted(((Fraction(dega[v], 2) if (am >> v) & 1 else dega[v]), v) for v in range(n))
            for bsize in range(max(lo, asize), hi + 1):
                # count must stay below best * |A| * |B|
                limit = best[0] * asize * bsize
                if sum(w for w, _ in lw[:bsize]) >= limit:
                    continue
                chosen: list[int] = []

                def dfs(idx: int, partial: Fraction) -> None:
                    need = bsize - len(chosen)
                    if need == 0:
                        dens = density(g, a, chosen)
                        if dens < best[0]:
                            best[0], best[1] = dens, (a, tuple(chosen))
                        return
                    if n - idx < need:
                        return
                    tail = sum(w for w, _ in lw[idx:idx + need])
                    if partial + tail >= best[0] * asize * bsize:
                        return
                    w, v = lw[idx]
                    chosen.append(v)
                    dfs(idx + 1, partial + w)
                    chosen.pop()
                    dfs(idx + 1, partial)

                dfs(0, Fraction(0))
                if best[0] == 0:
                    # by symmetry (A, B) with B before A lexicographically was seen already
                    return best[1]
    return best[1]


def _shrink(g: Graph, a: list[int], b: list[int], size: int) -> tuple[list[int], list[int]]:
    """Drop the vertices with most neighbours across until both sides reach ``size``."""
    a, b = list(a), list(b)
    for side, other in ((a, b), (b, a)):
        while len(side) > size:
            om = bits(other)
            worst = max(side, key=lambda v: (popcount(g.mask[v] & om), v))
            side.remove(worst)
    return a, b


def _local_search(g: Graph, a: list[int], b: list[int] | None, rng: random.Random, steps: int):
    """Swap moves lowering e(A,B); ``b is None`` means B = A (the sparse-set shape)."""
    n = g.n
    a = list(a)
    if b is None:
        in_a = set(a)
        for _ in range(steps):
            am = bits(a)
            out = [v for v in range(n) if v not in in_a]
            if not out:
                break
            worst = max(a, key=lambda v: (popcount(g.mask[v] & am), rng.random()))
            cand = min(out, key=lambda v: (popcount(g.mask[v] & (am & ~(1 << worst))), rng.random()))
            gain = popcount(g.mask[worst] & am) - popcount(g.mask[cand] & am & ~(1 << worst))
            if gain <= 0:
                break
            a.remove(worst)
            a.append(cand)
            in_a = set(a)
        return sorted(a), sorted(a)
    b = list(b)
    for _ in range(steps):
        am, bm = bits(a), bits(b)
        # Kernighan-Lin gains: D(v) = external - internal
        da = {v: popcount(g.mask[v] & bm) - popcount(g.mask[v] & am) for v in a}
        db = {v: popcount(g.mask[v] & am) - popcount(g.mask[v] & bm) for v in b}
        top_a = sorted(a, key=lambda v: (-da[v], rng.random()))[:6]
        top_b = sorted(b, key=lambda v: (-db[v], rng.random()))[:6]
        best = max(((da[u] + db[w] - 2 * g.has_edge(u, w), u, w) for u in top_a for w in top_b),
                   default=(0, None, None))
        if best[0] <= 0:
            break
        _, u, w = best
        a = [x for x in a if x != u] + [w]
        b = [x for x in b if x != w] + [u]
    return sorted(a), sorted(b)


def _dense_growth(g: Graph, start: int, size: int, rng: random.Random) -> list[int]:
    grown = [start]
    while len(grown) < size:
        gm = bits(grown)
        nxt = max((v for v in range(g.n) if not (gm >> v) & 1),
                  key=lambda v: (popcount(g.mask[v] & gm), rng.random()))
        grown.append(nxt)
    return grown


def detect_alpha_extremal(g: Graph, alpha, budget: int = 200, seed: int = 0):
    """Sets A, B with sizes in [(1/2 - alpha) n, n/2] and d(A, B) < alpha, or None.

    Exact enumeration up to 16 vertices, seeded local search beyond.  None
    from the local search only means no witness was found.
    """
    alpha = _frac(alpha)
    if not 0 < alpha < Fraction(1, 2):
        raise DomainError("alpha must lie in (0, 1/2)")
    n = g.n
    lo, hi = _window(n, alpha)
    if lo > hi:
        return None
    if n <= 16:
        hit = _exact_detect(g, alpha)
        return None if hit is None else (vset(hit[0]), vset(hit[1]))
    rng = random.Random(seed)
    candidates = []
    rounds = max(1, budget // 20)
    for t in range(rounds):
        # (i) min-cut style bisection
        order = list(range(n))
        rng.shuffle(order)
        a, b = _local_search(g, order[:hi], order[hi:2 * hi], rng, budget)
        candidates.append((a, b))
        # (ii) greedy sparse set grown from a low-degree vertex
        start = min(range(n), key=lambda v: (g.degree(v), rng.random())) if t == 0 else rng.randrange(n)
        s_set = [start]
        while len(s_set) < hi:
            sm = bits(s_set)
            nxt = min((v for v in range(n) if not (sm >> v) & 1),
                      key=lambda v: (popcount(g.mask[v] & sm), rng.random()))
            s_set.append(nxt)
        a2, _ = _local_search(g, s_set, None, rng, budget)
        candidates.append((a2, a2))
        # (iii) a dense ball and its complement, then KL swaps
        ball = _dense_growth(g, rng.randrange(n), hi, rng)
        rest = [v for v in range(n) if v not in set(ball)]
        candidates.append(_local_search(g, ball, rest[:hi], rng, budget))
    best = None
    for a, b in candidates:
        for size in sorted({lo, hi}):
            if len(a) < size or len(b) < size:
                continue
            if a == b:
                aa = list(a)
                while len(aa) > size:
                    am = bits(aa)
                    aa.remove(max(aa, key=lambda v: (popcount(g.mask[v] & am), v)))
                pa, pb = aa, aa
            else:
                pa, pb = _shrink(g, a, b, size)
            dens = density(g, pa, pb)
            if dens < alpha and (best is None or dens < best[0]):
                best = (dens, vset(pa), vset(pb))
    return None if best is None else (best[1], best[2])


@dataclass
class CaseResult:
    kind: str
    a: VertexSet = ()
    b: VertexSet = ()
    c: VertexSet = ()
    witness: tuple | None = None
    profile: dict = field(default_factory=dict)

    def report(self) -> dict:
        w = None if self.witness is None else [list(self.witness[0]), list(self.witness[1])]
        return {"kind": self.kind, "A": list(self.a), "B": list(self.b), "C": list(self.c),
                "witness": w, "profile": self.profile}


def classify_case(g: Graph, r: int, alpha=Fraction(1, 10), budget: int = 200, seed: int = 0) -> CaseResult:
    """Split into the non-extremal case and the two extremal shapes."""
    n = g.n
    if 2 * min_degree(g) < n + r - 2:
        raise DomainError(f"minimum degree {min_degree(g)} is below (n+r-2)/2")
    alpha = _frac(alpha)
    hit = detect_alpha_extremal(g, alpha, budget, seed)
    if hit is None:
        return CaseResult("non_extremal")
    a, b = set(hit[0]), set(hit[1])
    overlap = Fraction(len(a & b), min(len(a), len(b)))
    if overlap >= max(1 - 10 * alpha, Fraction(1, 2)):
        return _cleanup_two(g, a & b, alpha, hit)
    return _cleanup_one(g, a - b, b - a, alpha, hit)


def case_from_sets(g: Graph, kind: str, a, b=(), alpha=Fraction(1, 10)) -> CaseResult:
    """Run the case cleanup on sets found elsewhere (e.g. a pipeline failure witness)."""
    alpha = _frac(alpha)
    if kind == "extremal_two":
        return _cleanup_two(g, set(a), alpha, None)
    if kind == "extremal_one":
        return _cleanup_one(g, set(a), set(b), alpha, None)
    raise DomainError(f"unknown extremal kind {kind!r}")


def _cleanup_two(g: Graph, a: set[int], alpha: Fraction, hit) -> CaseResult:
    n = g.n
    a = set(a)
    while len(a) > n // 2:
        am = bits(a)
        a.remove(max(a, key=lambda v: (popcount(g.mask[v] & am), v)))
    rest = set(range(n)) - a
    am, bm = bits(a), bits(rest)
    low_a = [v for v in sorted(a) if popcount(g.mask[v] & bm) < (Fraction(1, 2) - 3 * alpha) * n]
    low_b = [v for v in sorted(rest) if popcount(g.mask[v] & am) < 3 * alpha * n]
    profile = {"A_low_cross_degree": low_a, "B_low_cross_degree": low_b,
               "profile_met": not low_a and not low_b}
    return CaseResult("extremal_two", vset(a), vset(rest), (), hit, profile)


def _cleanup_one(g: Graph, a: set[int], b: set[int], alpha: Fraction, hit) -> CaseResult:
    n = g.n
    a, b = set(a), set(b)
    c = set(range(n)) - a - b
    inner = (Fraction(1, 2) - 3 * alpha) * n
    for _ in range(n):
        moved = False
        for side in (a, b):
            sm = bits(side)
            for v in sorted(side):
                if popcount(g.mask[v] & sm) < inner:
                    side.remove(v)
                    c.add(v)
                    moved = True
                    break
        for v in sorted(c):
            da, db = popcount(g.mask[v] & bits(a)), popcount(g.mask[v] & bits(b))
            if da >= inner and db < alpha * n:
                c.remove(v)
                a.add(v)
                moved = True
                break
            if db >= inner and da < alpha * n:
                c.remove(v)
                b.add(v)
                moved = True
                break
        if not moved:
            break
    am, bm = bits(a), bits(b)
    weak_c = [v for v in sorted(c) if popcount(g.mask[v] & am) < alpha * n or popcount(g.mask[v] & bm) < alpha * n]
    profile = {"C_weak": weak_c, "profile_met": not weak_c,
               "sizes": [len(a), len(b), len(c)]}
    return CaseResult("extremal_one", vset(a), vset(b), vset(c), hit, profile)


# ------------------------------------------------------------ pair embedder
def embed_spanning_path_blowup(p: RegularPair, s: int, start_constraint: Iterable[int] | None = None,
                               end_constraint: Iterable[int] | None = None, *, half: bool = False,
                               start=None, start_link=None, end=None, end_link=None,
                               seed: int = 0):
    """Spanning chain of s-columns alternating a, b, a, ..., b over the whole pair.

    This is the bounded, exact stand-in for the blow-up lemma: a randomised
    backtracking search with reach-degree pruning.  Optional ``start``/``end``
    tuples are joined to the first and last column.
    """
    if len(p.a) != len(p.b) or len(p.a) % s:
        raise DomainError("pair sides must be equal and divisible by s")
    if len(p.a) > EMBED_SIDE_CAP:
        raise CapabilityError(f"pair side {len(p.a)} exceeds the embedding cap {EMBED_SIDE_CAP}")
    from .chain import FULL
    kw = {}
    if start is not None:
        kw.update(start=start, start_link=start_link or FULL)
    if end is not None:
        kw.update(end=end, end_link=end_link or FULL)
    first = None if start_constraint is None else set(start_constraint) & set(p.a)
    last = None if end_constraint is None else set(end_constraint) & set(p.b)
    return fill_column_path(p.host, list(p.a) + list(p.b), s, half=half,
                            column_pools=[p.a, p.b], first_constraint=first,
                            last_constraint=last, seed=seed, **kw)
