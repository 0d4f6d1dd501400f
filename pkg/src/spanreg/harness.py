"""Instance generators, the case-dispatching solver and experiment sweeps."""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapabilityError, DomainError, StageFailure
from .extremal import ExtremalDecomposition, solve_extremal_one, solve_extremal_two
from .graph import Graph, gnp, min_degree
from .nonextremal import Constants, cluster_count, run_pipeline
from .oracle import (FOUND, NONE, UNKNOWN, brute_force_spanning, build_divisibility_example,
                     build_tightness_example)
from .regularity import case_from_sets, classify_case
from .verifier import Certificate, verify_certificate

TEMPLATES = ("extremal_one", "extremal_two", "dense_random", "tightness", "divisibility")
EXACT_N = 14        # auto_solve falls back to the full exact search up to this size
BUDGETED_N = 60     # and to a node-budgeted exact search up to this one


@dataclass
class Instance:
    graph: Graph
    sidecar: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "sidecar": self.sidecar}

    def decomposition(self) -> ExtremalDecomposition | None:
        d = self.sidecar.get("intended")
        if not d or d.get("case") not in ("one", "two"):
            return None
        return ExtremalDecomposition(d["case"], tuple(d["A"]), tuple(d["B"]), tuple(d.get("C", ())),
                                     Fraction(d.get("alpha", "1/10")), d.get("m", 0))


def threshold(n: int, r: int) -> int:
    """Smallest integer minimum degree meeting (n+r-2)/2."""
    return math.ceil((n + r - 2) / 2)


def _top_up(adj: list[set[int]], vertices, candidates, need: int, rng: random.Random) -> int:
    """Add random edges from ``vertices`` into ``candidates`` until each vertex
    has degree ``need``; partners with the lowest degree are preferred."""
    added = 0
    candidates = sorted(candidates)
    for v in sorted(vertices):
        while len(adj[v]) < need:
            free = [u for u in candidates if u != v and u not in adj[v]]
            if not free:
                raise DomainError(f"vertex {v} cannot reach degree {need}")
            low = min(len(adj[u]) for u in free)
            u = rng.choice([u for u in free if len(adj[u]) == low])
            adj[v].add(u)
            adj[u].add(v)
            added += 1
    return added


def _graph(n: int, adj: list[set[int]]) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def generate_instance(template: str, params: dict, seed: int = 0) -> Instance:
    """Deterministic under ``seed``; the sidecar records the intended decomposition."""
    if template not in TEMPLATES:
        raise DomainError(f"unknown template {template!r}; choose from {', '.join(TEMPLATES)}")
    p = dict(params)
    rng = random.Random(seed)
    n = int(p.get("n", 0))
    r = int(p.get("r", 2))
    side: dict = {"template": template, "params": p, "seed": seed}
    if template in ("extremal_one", "extremal_two", "dense_random"):
        if n < 4 or r < 2:
            raise DomainError("need n >= 4 and r >= 2")
        if (n * r) % 2:
            raise DomainError("n*r must be even")
    need = threshold(n, r)
    if template == "extremal_one":
        # two cliques, cross edges topped up to the degree threshold, C joined to both
        c = int(p.get("c", 0))
        if c < 0 or n - c < 4:
            raise DomainError("need 0 <= c <= n-4")
        h = (n - c) // 2
        a, b, cc = range(h), range(h, n - c), range(n - c, n)
        adj = [set() for _ in range(n)]
        for part in (a, b):
            for u in part:
                adj[u].update(v for v in part if v != u)
        added = _top_up(adj, a, b, need, rng)
        added += _top_up(adj, b, a, need, rng)
        added += _top_up(adj, cc, list(a) + list(b), need, rng)
        g = _graph(n, adj)
        side["intended"] = {"case": "one", "A": list(a), "B": list(b), "C": list(cc), "alpha": "1/10"}
    elif template == "extremal_two":
        # sparse A, complete A-B, internal graphs just dense enough for the threshold
        m = int(p.get("m", 0))
        if n % 2 or m < 0 or n // 2 - m < 2:
            raise DomainError("need n even and 0 <= m < n/2 - 1")
        s = (r + 1) // 2
        na = n // 2 - m
        a, b = range(na), range(na, n)
        adj = [set() for _ in range(n)]
        for u in a:
            for v in b:
                adj[u].add(v)
                adj[v].add(u)
        inner_a = max(need - len(b), 0)
        inner_b = max(need - na, s if m else 0)      # star centres need s leaves in B
        if na % s:
            inner_b = max(inner_b, r)     # K_{1,r} centres need r neighbours in B
        added = _top_up(adj, a, a, len(b) + inner_a, rng)
        added += _top_up(adj, b, b, na + inner_b, rng)
        g = _graph(n, adj)
        side["intended"] = {"case": "two", "A": list(a), "B": list(b), "C": [], "alpha": "1/10", "m": m}
    elif template == "dense_random":
        prob = float(p.get("p", 0.55))
        g0 = gnp(n, prob, rng)
        adj = [set(x) for x in g0.adj]
        added = _top_up(adj, range(n), range(n), need, rng)
        g = _graph(n, adj)
        side["intended"] = {"case": "non_extremal"}
    elif template == "tightness":
        slack = int(p.get("slack", 1))
        g = build_tightness_example(n, r, slack)
        side["intended"] = {"expected": "none" if slack == 1 else "found",
                            "connectivity": r - slack}
    else:
        g = build_divisibility_example(n)
        side["intended"] = {"expected": "none", "object": "spanning C_k(2)", "t": 2}
    side["n"] = g.n
    side["min_degree"] = min_degree(g)
    if template in ("extremal_one", "extremal_two", "dense_random"):
        side["threshold"] = need
        side["topped_up_edges"] = added
        if side["min_degree"] < need:
            raise DomainError("generator missed the degree threshold")   # a bug, never expected
    return Instance(g, side)


# ----------------------------------------------------------------- solving
def _attempt(routes: list, name: str, fn):
    t = time.perf_counter()
    try:
        cert = fn()
    except StageFailure as exc:
        routes.append({"route": name, "ok": False, "seconds": round(time.perf_counter() - t, 3),
                       **exc.report()})
        return None, exc
    except CapabilityError as exc:
        routes.append({"route": name, "ok": False, "seconds": round(time.perf_counter() - t, 3),
                       "stage": "capability", "detail": str(exc)})
        return None, None
    routes.append({"route": name, "ok": cert.ok, "seconds": round(time.perf_counter() - t, 3)})
    return (cert if cert.ok else None), None


def _extremal(g: Graph, r: int, dec: ExtremalDecomposition, seed: int) -> Certificate:
    dec.validate(g)
    if dec.case == "one":
        return solve_extremal_one(g, dec, r, seed=seed)
    return solve_extremal_two(g, dec, r, seed=seed)


def _dispatch_case(g: Graph, r: int, case, alpha, seed: int, routes: list, why: str):
    try:
        dec = ExtremalDecomposition.from_case(case, alpha)
        dec.validate(g)
    except DomainError as err:
        routes.append({"route": case.kind, "ok": False, "via": why, "stage": "decomposition",
                       "detail": str(err)})
        return None
    cert, _ = _attempt(routes, case.kind, lambda: _extremal(g, r, dec, seed))
    routes[-1]["via"] = why
    return cert


def auto_solve(g: Graph, r: int, alpha=Fraction(1, 10), seed: int = 0,
               constants: Constants | None = None, exact_n: int = EXACT_N,
               budgeted_n: int = BUDGETED_N, decomposition: ExtremalDecomposition | None = None) -> Certificate:
    """Classify, dispatch, re-dispatch on an extremality witness or a relaxed
    alpha, then (small n) exact search.

    The returned certificate is re-verified from scratch; if every route
    fails a StageFailure lists what each route reported.
    """
    if r < 2:
        raise DomainError("r must be at least 2")
    if (g.n * r) % 2:
        raise DomainError("n*r must be even")
    if 2 * min_degree(g) < g.n + r - 2:
        raise DomainError(f"minimum degree {min_degree(g)} is below (n+r-2)/2")
    c = constants or Constants()
    routes: list[dict] = []
    cert = None
    if decomposition is not None:
        kind = "extremal_" + decomposition.case
        cert, _ = _attempt(routes, kind, lambda: _extremal(g, r, decomposition, seed))
    else:
        case = classify_case(g, r, alpha, seed=seed)
        kind = case.kind
        if kind == "non_extremal":
            if g.n < 10 * cluster_count(g.n, c):
                routes.append({"route": "non_extremal", "ok": False, "stage": "partition",
                               "detail": f"n={g.n} is too small for {cluster_count(g.n, c)} clusters"})
                exc = None
            else:
                cert, exc = _attempt(routes, "non_extremal", lambda: run_pipeline(g, r, c, seed))
            hint = exc.witness.get("extremal_witness") if exc is not None else None
            if cert is None and hint:
                redo = case_from_sets(g, hint["kind"], hint.get("A", ()), hint.get("B", ()), alpha)
                cert = _dispatch_case(g, r, redo, alpha, seed, routes, "witness")
            # relaxed detection: the pipeline's failure suggests structure the
            # detector missed at this alpha
            relaxed = 2 * Fraction(alpha)
            while cert is None and relaxed < Fraction(1, 2):
                redo = classify_case(g, r, relaxed, seed=seed)
                if redo.kind != "non_extremal":
                    cert = _dispatch_case(g, r, redo, relaxed, seed, routes, f"alpha={relaxed}")
                relaxed *= 2
        else:
            cert = _dispatch_case(g, r, case, alpha, seed, routes, "classified")
    if cert is None and g.n <= budgeted_n:
        # full search at small n; a node budget above that (unknown on exhaustion)
        budget = 2_000_000 if g.n <= exact_n else 200_000
        res = brute_force_spanning(g, r, budget=budget)
        routes.append({"route": "exact", "ok": res.found, "status": res.status, "nodes": res.nodes,
                       "budget": budget})
        if res.found:
            cert = res.certificate
    if cert is None:
        raise StageFailure("auto_solve", "every route failed", {"case": kind, "routes": routes})
    final = verify_certificate(g, cert.sub_edges, r)
    if not final.ok:
        raise StageFailure("auto_solve", "certificate failed re-verification",
                           {"case": kind, "routes": routes, "certificate": final.report()})
    final.meta.update(cert.meta)
    final.meta.update({"case": kind, "routes": routes, "constants": c.report(),
                       "alpha": str(alpha), "seed": seed})
    final.meta.pop("trace", None)
    return final


# ----------------------------------------------------------------- sweeps
SOLVERS = ("auto", "oracle", "sidecar")


def _run_cell(job: dict) -> dict:
    """One (template, params, r, seed) run; errors are recorded, never raised."""
    out = {"template": job["template"], "params": job["params"], "seed": job["seed"], "results": {}}
    try:
        inst = generate_instance(job["template"], job["params"], job["seed"])
    except DomainError as exc:
        out["error"] = f"generate: {exc}"
        return out
    g, r = inst.graph, int(job["params"].get("r", 2))
    out["n"] = g.n
    out["min_degree"] = inst.sidecar["min_degree"]
    for solver in job["solvers"]:
        t = time.perf_counter()
        try:
            if solver == "oracle":
                res = brute_force_spanning(g, r, budget=job.get("budget", 2_000_000))
                status = res.status
            elif solver == "sidecar":
                dec = inst.decomposition()
                if dec is None:
                    raise DomainError("template has no extremal decomposition")
                status = FOUND if _extremal(g, r, dec, job["seed"]).ok else "fail"
            else:
                cert = auto_solve(g, r, job.get("alpha", Fraction(1, 10)), job["seed"])
                status = FOUND if cert.ok else "fail"
        except StageFailure as exc:
            status = "fail"
            out.setdefault("failures", {})[solver] = exc.report()["stage"]
        except DomainError as exc:
            status = "error"
            out.setdefault("failures", {})[solver] = str(exc)
        out["results"][solver] = {"status": status, "seconds": round(time.perf_counter() - t, 4)}
    res = out["results"]
    if "oracle" in res and res["oracle"]["status"] == NONE and 2 * out["min_degree"] >= g.n + r - 2:
        # the theorem's hypothesis holds but nothing exists: archive the witness
        out["witness_graph"] = g.to_json()
    return out


def _load_spec(spec) -> dict:
    if spec is None:
        return {}
    if isinstance(spec, dict):
        return spec
    with open(spec) as fh:
        return json.load(fh)


def _jobs(spec: dict) -> list[dict]:
    jobs = []
    for ci, cell in enumerate(spec.get("cells", [])):
        seeds = cell.get("seeds", 1)
        seeds = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
        for sd in seeds:
            jobs.append({"cell": ci, "template": cell["template"], "params": dict(cell.get("params", {})),
                         "seed": sd, "solvers": list(cell.get("solvers", ["auto"])),
                         "budget": cell.get("budget", 2_000_000)})
    return jobs


def experiment_sweep(spec, workers: int = 1) -> dict:
    """Run a matrix of (template, params, seeds) cells; returns a JSON-ready report with a text table."""
    spec = _load_spec(spec)
    jobs = _jobs(spec)
    workers = int(spec.get("workers", workers))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_cell, jobs))
    else:
        runs = [_run_cell(j) for j in jobs]
    for job, run in zip(jobs, runs):
        run["cell"] = job["cell"]
    cells = []
    for ci, cell in enumerate(spec.get("cells", [])):
        mine = [run for run in runs if run["cell"] == ci]
        counts: dict[str, dict[str, int]] = {}
        agree = disagree = 0
        for run in mine:
            for solver, res in run["results"].items():
                bucket = counts.setdefault(solver, {})
                bucket[res["status"]] = bucket.get(res["status"], 0) + 1
            rs = run["results"]
            if "oracle" in rs and len(rs) > 1 and rs["oracle"]["status"] != UNKNOWN:
                truth = rs["oracle"]["status"] == FOUND
                for solver, res in rs.items():
                    if solver != "oracle":
                        if (res["status"] == FOUND) == truth:
                            agree += 1
                        else:
                            disagree += 1
        cells.append({"template": cell["template"], "params": cell.get("params", {}),
                      "runs": len(mine), "counts": counts, "agree": agree, "disagree": disagree,
                      "errors": [run["error"] for run in mine if "error" in run],
                      "seconds": round(sum(res["seconds"] for run in mine
                                           for res in run["results"].values()), 3),
                      "witnesses": [{"seed": run["seed"], "graph": run["witness_graph"]}
                                    for run in mine if "witness_graph" in run]})
    return {"cells": cells, "runs": runs, "constants": Constants().report(),
            "table": format_table(cells)}


def format_table(cells: list[dict]) -> str:
    if not cells:
        return "(empty sweep)\n"
    lines = [f"{'template':<14} {'params':<28} {'runs':>4}  {'results':<40} {'agree':>5} {'dis':>4}"]
    for c in cells:
        params = ",".join(f"{k}={v}" for k, v in sorted(c["params"].items()))
        res = "; ".join(f"{s}:" + "/".join(f"{k}={v}" for k, v in sorted(cnt.items()))
                        for s, cnt in sorted(c["counts"].items()))
        lines.append(f"{c['template']:<14} {params:<28} {c['runs']:>4}  {res:<40} "
                     f"{c['agree']:>5} {c['disagree']:>4}")
    return "\n".join(lines) + "\n"
