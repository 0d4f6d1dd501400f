"""Acceptance criteria, one test each.  Every test prints a single
``criterion N: PASS|FAIL`` line; the lines are repeated in the terminal
summary.  Tolerances and time limits are pinned below."""

import math
import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from conftest import report_line
from spanreg.blowup import BlowupSpec, build_blowup
from spanreg.extremal import check_star_family, find_disjoint_stars
from spanreg.graph import Graph, min_degree
from spanreg.harness import _extremal, auto_solve, experiment_sweep, generate_instance, threshold
from spanreg.nonextremal import run_pipeline
from spanreg.oracle import (FOUND, NONE, brute_force_spanning, build_divisibility_example,
                            build_tightness_example, search_spanning_blowup_cycle)
from spanreg.errors import DomainError, StageFailure
from spanreg.regularity import RegularPair, is_eps_regular, is_super_regular, super_regularize
from spanreg.toys import toy_assemblies
from spanreg.verifier import is_r_regular, vertex_connectivity, verify_certificate

# pinned limits (seconds) and thresholds
LIMIT_BLOWUP = 10
LIMIT_TIGHTNESS = 60
LIMIT_DIVISIBILITY = 300
LIMIT_SWEEP = 1800
LIMIT_GADGETS = 120
LIMIT_EXTREMAL = 600
LIMIT_STARS = 120
LIMIT_REGULARITY = 300
LIMIT_PIPELINE_RUN = 600
LIMIT_DIRAC = 300
SWEEP_SEEDS = 200
PIPELINE_SEEDS = 10
PIPELINE_MIN_OK = 8
DIRAC_GRAPHS = 100
STAR_GRAPHS = 50
REGULARITY_PAIRS = 500


# ---------------------------------------------------------------- 1
def _blowup_cases():
    for t in (1, 2, 3):
        for k in range(3, 11):
            yield BlowupSpec("cycle", k, t), 2 * t
            if k % 2 == 0:
                yield BlowupSpec("cycle", k, t, half=True), 2 * t - 1


def test_criterion_01_blowup_degree_and_connectivity():
    t0 = time.perf_counter()
    bad = []
    for spec, want in _blowup_cases():
        g = build_blowup(spec)
        if spec.half and spec.t == 1:
            continue      # a perfect matching; covered by the xfail below
        if not is_r_regular(g, want) or vertex_connectivity(g) != want:
            bad.append((spec.k, spec.t, spec.half))
    secs = time.perf_counter() - t0
    ok = not bad and secs < LIMIT_BLOWUP
    report_line(1, ok, f"all C_k(t), C_k(t-1/2) with k<=10, t<=3 (t=1 half is an expected failure); "
                       f"bad={bad} time={secs:.2f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason="C_k(1/2) is a perfect matching: degree 1 but kappa 0")
def test_criterion_01_half_blowup_t1_connectivity():
    for k in range(4, 11, 2):
        g = build_blowup(BlowupSpec("cycle", k, 1, half=True))
        assert is_r_regular(g, 1)
        assert vertex_connectivity(g) == 1


# ---------------------------------------------------------------- 2
TIGHTNESS = [(12, 4), (16, 4), (14, 3), (8, 2)]


def test_criterion_02_tightness():
    t0 = time.perf_counter()
    bad, skipped = [], []
    for n, r in TIGHTNESS:
        if (n + r) % 2:
            skipped.append((n, r))      # no clique size (n+r)/2
            continue
        loose = build_tightness_example(n, r, slack=1)
        if vertex_connectivity(loose) != r - 1:
            bad.append((n, r, "slack=1 kappa"))
        if brute_force_spanning(loose, r).status != NONE:
            bad.append((n, r, "slack=1 oracle"))
        tight = build_tightness_example(n, r, slack=0)
        if tight.n != n or 2 * min_degree(tight) != n + r - 2:
            bad.append((n, r, "slack=0 degree"))
        if vertex_connectivity(tight) != r:
            bad.append((n, r, "slack=0 kappa"))
    secs = time.perf_counter() - t0
    ok = not bad and secs < LIMIT_TIGHTNESS
    report_line(2, ok, f"tightness examples; skipped (parity) {skipped}; bad={bad} time={secs:.2f}s")
    assert ok


# ---------------------------------------------------------------- 3
def test_criterion_03_divisibility():
    t0 = time.perf_counter()
    g = build_divisibility_example(10)
    res = search_spanning_blowup_cycle(g, 2)
    secs = time.perf_counter() - t0
    ok = 2 * min_degree(g) >= g.n + 2 and res.status == NONE and secs < LIMIT_DIVISIBILITY
    report_line(3, ok, f"n=10 min degree {min_degree(g)}, spanning C_5(2) search: {res.status} "
                       f"({res.nodes} nodes) time={secs:.2f}s")
    assert ok


# ---------------------------------------------------------------- 4
def _sweep_cells():
    for r in (2, 3, 4):
        for n in range(max(6, r + 3), 15):
            if (n * r) % 2 == 0:
                yield {"template": "dense_random", "params": {"n": n, "r": r, "p": 0.5},
                       "seeds": SWEEP_SEEDS, "solvers": ["oracle"]}


def test_criterion_04_desk_scale_sweep():
    t0 = time.perf_counter()
    report = experiment_sweep({"cells": list(_sweep_cells())})
    secs = time.perf_counter() - t0
    bad = []
    for cell in report["cells"]:
        counts = cell["counts"]["oracle"]
        exceptions = cell["runs"] - counts.get(FOUND, 0)
        # an exception is acceptable only as an archived witness
        if exceptions != len(cell["witnesses"]) or cell["errors"] or cell["runs"] < SWEEP_SEEDS:
            bad.append((cell["params"], counts))
    for run in report["runs"]:
        if 2 * run["min_degree"] < run["n"] + int(run["params"]["r"]) - 2:
            bad.append(("below threshold", run["params"], run["seed"]))
    archived = sum(len(c["witnesses"]) for c in report["cells"])
    ok = not bad and secs < LIMIT_SWEEP
    report_line(4, ok, f"{len(report['cells'])} cells x {SWEEP_SEEDS} graphs, archived exceptions={archived}, "
                       f"bad={bad} time={secs:.1f}s")
    assert ok


# ---------------------------------------------------------------- 5
def test_criterion_05_gadget_contracts():
    t0 = time.perf_counter()
    bad, total = [], 0
    for r in (2, 3, 4, 5):
        for res in toy_assemblies(r):
            total += 1
            if not res.ok:
                bad.append((r, res.name))
    secs = time.perf_counter() - t0
    ok = not bad and secs < LIMIT_GADGETS
    report_line(5, ok, f"{total} toy assemblies for r=2..5, bad={bad} time={secs:.2f}s")
    assert ok


# ---------------------------------------------------------------- 6
def _extremal_instances(ns, seeds):
    for tpl, key in (("extremal_one", "c"), ("extremal_two", "m")):
        for n in ns:
            for r in (2, 3, 4):
                for extra in (0, 1, 2):
                    for seed in seeds:
                        try:
                            yield tpl, generate_instance(tpl, {"n": n, "r": r, key: extra}, seed), r, seed
                        except DomainError:
                            break


def _solver_status(inst, r, seed):
    try:
        cert = _extremal(inst.graph, r, inst.decomposition(), seed)
    except StageFailure:
        return "fail", None
    return ("found" if cert.ok else "fail"), cert


def test_criterion_06_extremal_solvers_vs_oracle():
    t0 = time.perf_counter()
    small = agree = 0
    mismatch = {}
    for tpl, inst, r, seed in _extremal_instances(range(6, 15), range(3)):
        truth = brute_force_spanning(inst.graph, r).status
        mine, _ = _solver_status(inst, r, seed)
        small += 1
        if (truth == FOUND) == (mine == FOUND):
            agree += 1
        else:
            key = f"{tpl} r={r}"
            mismatch[key] = mismatch.get(key, 0) + 1
    emitted = large = invalid = 0
    for tpl, inst, r, seed in _extremal_instances(range(16, 61, 4), range(1)):
        large += 1
        status, cert = _solver_status(inst, r, seed)
        if status == "found":
            emitted += 1
            if not verify_certificate(inst.graph, cert.sub_edges, r, exact_connectivity=True).ok:
                invalid += 1
    secs = time.perf_counter() - t0
    ok = agree == small and invalid == 0 and secs < LIMIT_EXTREMAL
    report_line(6, ok, f"n<=14: solver matches oracle on {agree}/{small} (mismatches {mismatch}); "
                       f"n<=60: {emitted}/{large} certificates emitted, {invalid} invalid; time={secs:.1f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason="sides of 10/11 at r=3 leave no closable leftover")
def test_criterion_06_two_cliques_n22_r3():
    n, h = 22, 10
    a, b = range(h), range(h, 2 * h + 1)
    edges = [e for part in (a, b) for e in combinations(part, 2)]
    edges += [(v, 21) for v in range(21)]
    rng = random.Random(0)
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    need = threshold(n, 3)
    for v in sorted(range(21), key=lambda x: len(adj[x])):
        while len(adj[v]) < need:
            other = [u for u in (b if v in a else a) if u not in adj[v]]
            u = rng.choice(other)
            adj[v].add(u)
            adj[u].add(v)
    g = Graph(n, [(u, v) for u in adj for v in adj[u] if u < v])
    from spanreg.extremal import ExtremalDecomposition, solve_extremal_one
    dec = ExtremalDecomposition("one", tuple(a), tuple(b), (21,))
    assert solve_extremal_one(g, dec, 3).ok


# ---------------------------------------------------------------- 7
def _star_graph(rng: random.Random, m: int, s: int) -> Graph:
    """Random graph with minimum degree >= m+s-1 and small maximum degree."""
    n = rng.randint(max(2 * m * (s + 1) + 4, 12), 40)
    need = m + s - 1
    adj = [set() for _ in range(n)]
    for v in range(n):
        while len(adj[v]) < need:
            free = [u for u in range(n) if u != v and u not in adj[v]]
            low = min(len(adj[u]) for u in free)
            u = rng.choice([u for u in free if len(adj[u]) == low])
            adj[v].add(u)
            adj[u].add(v)
    return Graph(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def test_criterion_07_disjoint_stars():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = []
    for i in range(STAR_GRAPHS):
        s, m = rng.randint(1, 3), rng.randint(1, 3)
        g = _star_graph(rng, m, s)
        assert min_degree(g) >= m + s - 1
        try:
            stars = find_disjoint_stars(g, m, s)
        except StageFailure as exc:
            bad.append((i, exc.report()["detail"]))
            continue
        if len(stars) != 2 * m or not check_star_family(g, stars, s):
            bad.append((i, "family check"))
    secs = time.perf_counter() - t0
    ok = not bad and secs < LIMIT_STARS
    report_line(7, ok, f"{STAR_GRAPHS} graphs with s,m<=3, n<=40: bad={bad} time={secs:.2f}s")
    assert ok


# ---------------------------------------------------------------- 8
def _definitional_regular(p: RegularPair) -> bool:
    """Every X, Y over the size bounds, by brute force over subset masks."""
    a, b = list(p.a), list(p.b)
    ka = max(1, math.ceil(p.eps * len(a)))
    kb = max(1, math.ceil(p.eps * len(b)))
    g = p.host
    for xs_size in range(ka, len(a) + 1):
        for xs in combinations(a, xs_size):
            cnt = [sum(1 for x in xs if g.has_edge(x, y)) for y in b]
            for ys_size in range(kb, len(b) + 1):
                for ys in combinations(range(len(b)), ys_size):
                    e = sum(cnt[j] for j in ys)
                    if abs(Fraction(e, xs_size * ys_size) - p.d) > p.eps:
                        return False
    return True


def _random_pair(rng: random.Random, na: int, nb: int) -> tuple[Graph, list, list]:
    prob = rng.uniform(0.2, 0.9)
    edges = [(u, na + v) for u in range(na) for v in range(nb) if rng.random() < prob]
    return Graph(na + nb, edges), list(range(na)), list(range(na, na + nb))


def test_criterion_08_regularity_soundness():
    t0 = time.perf_counter()
    rng = random.Random(8)
    mismatches, regular = [], 0
    for i in range(REGULARITY_PAIRS):
        na, nb = rng.randint(1, 6), rng.randint(1, 6)
        g, a, b = _random_pair(rng, na, nb)
        p = RegularPair(g, a, b, Fraction(rng.randint(2, 10), 20))
        fast = is_eps_regular(p, "exact").regular
        if fast != _definitional_regular(p):
            mismatches.append(i)
        regular += fast
    scan_bad, scanned = [], 0
    for i in range(200):
        size = rng.randint(6, 10)
        g, a, b = _random_pair(rng, size, size)
        p = RegularPair(g, a, b, Fraction(rng.randint(4, 10), 20))
        if not g.edges or not is_eps_regular(p, "exact").regular:
            continue
        res = super_regularize(p)
        if res.pair is None:
            continue
        scanned += 1
        if not is_super_regular(res.pair, p.d - 3 * p.eps):
            scan_bad.append(i)
    secs = time.perf_counter() - t0
    ok = not mismatches and not scan_bad and scanned > 0 and secs < LIMIT_REGULARITY
    report_line(8, ok, f"exact vs definitional on {REGULARITY_PAIRS} pairs ({regular} regular): "
                       f"mismatches={mismatches}; super_regularize scans {scanned}, bad={scan_bad}; "
                       f"time={secs:.1f}s")
    assert ok


# ---------------------------------------------------------------- 9
@pytest.mark.parametrize("r", [3, 4])
def test_criterion_09_nonextremal_end_to_end(r):
    verified, slow, unwitnessed, log = 0, [], [], []
    for seed in range(PIPELINE_SEEDS):
        g = generate_instance("dense_random", {"n": 600, "p": 0.55, "r": r}, seed).graph
        t0 = time.perf_counter()
        try:
            cert = run_pipeline(g, r, seed=seed)
            good = verify_certificate(g, cert.sub_edges, r).ok
            verified += good
            log.append(f"{seed}:{'ok' if good else 'bad'}")
        except StageFailure as exc:
            rep = exc.report()
            if not rep.get("witness"):
                unwitnessed.append(seed)
            log.append(f"{seed}:{rep['stage']}")
        secs = time.perf_counter() - t0
        if secs > LIMIT_PIPELINE_RUN:
            slow.append((seed, round(secs)))
    ok = verified >= PIPELINE_MIN_OK and not slow and not unwitnessed
    report_line(9, ok, f"G(600,0.55) r={r}: {verified}/{PIPELINE_SEEDS} verified [{' '.join(log)}], "
                       f"slow={slow} unwitnessed={unwitnessed}")
    assert ok


# ---------------------------------------------------------------- 10
def _dirac_graph(rng: random.Random) -> Graph:
    n = rng.randint(5, 14)
    p = rng.uniform(0.3, 0.8)
    adj = [set() for _ in range(n)]
    for u, v in combinations(range(n), 2):
        if rng.random() < p:
            adj[u].add(v)
            adj[v].add(u)
    need = -(-n // 2)
    for v in range(n):
        while len(adj[v]) < need:
            u = rng.choice([u for u in range(n) if u != v and u not in adj[v]])
            adj[v].add(u)
            adj[u].add(v)
    return Graph(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def _is_hamilton_cycle(g: Graph, edges) -> bool:
    sub = Graph(g.n, edges)
    if not is_r_regular(sub, 2) or not all(g.has_edge(u, v) for u, v in edges):
        return False
    seen, stack = {0}, [0]
    while stack:
        for w in sub.adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def test_criterion_10_dirac():
    t0 = time.perf_counter()
    rng = random.Random(10)
    bad = []
    for i in range(DIRAC_GRAPHS):
        g = _dirac_graph(rng)
        truth = brute_force_spanning(g, 2).status
        try:
            cert = auto_solve(g, 2, seed=i)
            mine = FOUND if _is_hamilton_cycle(g, cert.sub_edges) else "bad"
        except StageFailure:
            mine = "fail"
        if mine != FOUND or truth != FOUND:
            bad.append((i, g.n, mine, truth))
    secs = time.perf_counter() - t0
    ok = not bad and secs < LIMIT_DIRAC
    report_line(10, ok, f"r=2 on {DIRAC_GRAPHS} graphs with min degree >= n/2: bad={bad} time={secs:.1f}s")
    assert ok
