"""Command line: generate | solve | verify | oracle | gadget | regularity | sweep.

Exit codes: 0 success, 2 verified none, 3 stage failure, 4 unknown or budget;
1 for bad input (argparse's own 2 would read as "verified none").
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import CapabilityError, DomainError, StageFailure, _jsonable
from .extremal import ExtremalDecomposition, solve_extremal_one, solve_extremal_two
from .graph import Graph
from .harness import TEMPLATES, Instance, auto_solve, experiment_sweep, generate_instance
from .nonextremal import Constants, run_pipeline
from .oracle import FOUND, NONE, brute_force_spanning, search_spanning_blowup_cycle
from .regularity import RegularPair, check_partition, classify_case, is_eps_regular, regular_partition
from .toys import toy_assemblies
from .verifier import verify_certificate

EXIT_OK, EXIT_INPUT, EXIT_NONE, EXIT_FAIL, EXIT_UNKNOWN = 0, 1, 2, 3, 4


def _param(text: str):
    key, _, val = text.partition("=")
    if not _:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    for cast in (int, float):
        try:
            return key, cast(val)
        except ValueError:
            pass
    return key, val


def _read_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _load_graph(path: str) -> tuple[Graph, dict]:
    """Accept a bare graph ({"n", "edges"}) or a generated instance ({"graph", "sidecar"})."""
    data = _read_json(path)
    if "graph" in data:
        return Graph.from_json(data["graph"]), data.get("sidecar", {})
    return Graph.from_json(data), {}


def _emit(obj, out: str | None) -> None:
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_generate(args) -> int:
    inst = generate_instance(args.template, dict(args.param or []), args.seed)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(inst.graph.to_dot())
    _emit(inst.to_json(), args.out)
    return EXIT_OK


def _cmd_solve(args) -> int:
    g, sidecar = _load_graph(args.graph)
    c = Constants.from_dict(_read_json(args.constants)) if args.constants else Constants()
    alpha = Fraction(args.alpha)
    try:
        if args.solver == "auto":
            cert = auto_solve(g, args.r, alpha, args.seed, c)
        elif args.solver == "non_extremal":
            cert = run_pipeline(g, args.r, c, args.seed)
        elif args.solver in ("extremal_one", "extremal_two"):
            inst = Instance(g, sidecar)
            dec = inst.decomposition() if sidecar else None
            if dec is None:
                dec = ExtremalDecomposition.from_case(classify_case(g, args.r, alpha, seed=args.seed), alpha)
            solve = solve_extremal_one if args.solver == "extremal_one" else solve_extremal_two
            cert = solve(g, dec, args.r, seed=args.seed)
        else:
            res = brute_force_spanning(g, args.r, args.budget)
            _emit(res.report(), args.out)
            return {FOUND: EXIT_OK, NONE: EXIT_NONE}.get(res.status, EXIT_UNKNOWN)
    except StageFailure as exc:
        _emit({"ok": False, **exc.report()}, args.out)
        return EXIT_FAIL
    except CapabilityError as exc:
        _emit({"ok": False, "stage": "capability", "detail": str(exc)}, args.out)
        return EXIT_UNKNOWN
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(cert.subgraph().to_dot("certificate"))
    _emit(cert.report(), args.out)
    return EXIT_OK if cert.ok else EXIT_FAIL


def _cmd_verify(args) -> int:
    g, _ = _load_graph(args.graph)
    data = _read_json(args.certificate)
    r = args.r if args.r is not None else data.get("r")
    if r is None:
        raise DomainError("r missing: pass --r or use a certificate that records it")
    cert = verify_certificate(g, data["edges"], int(r), exact_connectivity=args.exact)
    rep = cert.report()
    rep.pop("edges")
    _emit(rep, args.out)
    return EXIT_OK if cert.ok else EXIT_FAIL


def _cmd_oracle(args) -> int:
    g, _ = _load_graph(args.graph)
    if args.blowup:
        res = search_spanning_blowup_cycle(g, args.blowup, args.budget)
    else:
        if args.r is None:
            raise DomainError("--r is required unless --blowup is given")
        res = brute_force_spanning(g, args.r, args.budget)
    _emit(res.report(), args.out)
    return {FOUND: EXIT_OK, NONE: EXIT_NONE}.get(res.status, EXIT_UNKNOWN)


def _cmd_gadget(args) -> int:
    results = toy_assemblies(args.r, args.kind or None)
    if args.dot and results:
        with open(args.dot, "w") as fh:
            first = results[0]
            labels = {v: role for role, v in first.embedding.vertex_map.items()}
            fh.write(Graph(max(labels) + 1, first.embedding.edges).to_dot(first.name.split("/")[0], labels))
    _emit([res.report() for res in results], args.out)
    return EXIT_OK if all(res.ok for res in results) else EXIT_FAIL


def _cmd_regularity(args) -> int:
    g, _ = _load_graph(args.graph)
    if args.a or args.b:
        pair = RegularPair(g, args.a or [], args.b or [], Fraction(args.eps))
        res = is_eps_regular(pair, args.mode, args.trials, args.seed)
        _emit({"pair": pair.report(), **res.report()}, args.out)
        return EXIT_OK if res.regular else EXIT_FAIL
    part = regular_partition(g, Fraction(args.eps), Fraction(args.d), args.ell, seed=args.seed)
    rep = part.report()
    rep["properties"] = check_partition(part)
    _emit(rep, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    report = experiment_sweep(args.spec, workers=args.workers)
    if args.out:
        _emit(report, args.out)
    sys.stdout.write(report["table"])
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="spanreg", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("generate", help="write a template instance with its JSON sidecar")
    p.add_argument("template", choices=TEMPLATES)
    p.add_argument("--param", "-p", action="append", type=_param, metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.add_argument("--dot")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("solve", help="find a spanning r-regular r-connected subgraph")
    p.add_argument("graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--solver", default="auto",
                   choices=["auto", "non_extremal", "extremal_one", "extremal_two", "oracle"])
    p.add_argument("--alpha", default="1/10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--constants", help="JSON file overriding pipeline constants")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.add_argument("--out", "-o")
    p.add_argument("--dot")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="re-check a certificate against its host")
    p.add_argument("graph")
    p.add_argument("certificate")
    p.add_argument("--r", type=int)
    p.add_argument("--exact", action="store_true", help="exact connectivity at any size")
    p.add_argument("--out", "-o")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive search (small n)")
    p.add_argument("graph")
    p.add_argument("--r", type=int)
    p.add_argument("--blowup", type=int, metavar="T", help="search a spanning C_k(T) instead")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.add_argument("--out", "-o")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gadget", help="build, close up and check gadgets on a complete host")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--kind", action="append", help="name prefix, e.g. bridge, xi_, interior, glue")
    p.add_argument("--out", "-o")
    p.add_argument("--dot", help="DOT drawing of the first gadget, roles as labels")
    p.set_defaults(func=_cmd_gadget)

    p = sub.add_parser("regularity", help="partition a graph, or check one pair")
    p.add_argument("graph")
    p.add_argument("--eps", default="1/4")
    p.add_argument("--d", default="3/10")
    p.add_argument("--ell", type=int, default=10)
    p.add_argument("--a", type=int, nargs="*")
    p.add_argument("--b", type=int, nargs="*")
    p.add_argument("--mode", choices=["exact", "sampled"], default="sampled")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=_cmd_regularity)

    p = sub.add_parser("sweep", help="run an experiment matrix from a JSON spec")
    p.add_argument("spec")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", "-o")
    p.set_defaults(func=_cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"spanreg {args.verb}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
