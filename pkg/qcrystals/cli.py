"""Command-line interface: ``qcrystals <command> ...``.

Every command writes machine-readable output (JSON with sorted keys, TSV or
DOT) to stdout and logs to stderr. Exit codes: 0 success, 1 a domain-level
negative answer (invalid tableau, failed verification, axiom violations, an
exhausted guard), 2 a usage error.

Tableaux are given either as JSON (``{"n": 3, "rows": [[3, 2], [1]]}``) or as
a list of rows ``"[3,3,3,3,2],[2,2,1],[1]"`` together with ``--n``.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from qcrystals import __version__
from qcrystals.characters import (
    content_character, root_subset_character, sdt_character, symbolic_product, verma_character,
)
from qcrystals.config import MAX_NODES_ENV, GuardExceeded, default_max_nodes
from qcrystals.crystal import FiniteElement, LimitElement
from qcrystals.cutting import CutSpec, component_for_mu, cut_component, verify_cut
from qcrystals.finite import apply_finite, lowest_generator, parse_operators
from qcrystals.graph import CrystalGraph, bfs_subcrystal, check_axioms
from qcrystals.limit import apply_limit, largeness, limit_generator
from qcrystals.lowest_weight import XiDefect, format_roots, parse_roots, xi_forward, xi_inverse
from qcrystals.tableaux import Shape, ShiftedTableau, validate_sdt
from qcrystals.weights import WeightVector

logger = logging.getLogger(__name__)


class UsageError(ValueError):
    """Bad command-line input detected after argument parsing."""


# ====================================================================
# Parser
# ====================================================================

def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcrystals",
                                 description="Crystals of the queer Lie superalgebra q(n).")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0,
                    help="-v for INFO, -vv for DEBUG logging on stderr")
    ap.add_argument("--max-nodes", type=int,
                    help=f"node guard for every BFS (default ${MAX_NODES_ENV} or 100000)")
    sub = ap.add_subparsers(dest="command", required=True)

    def tableau_args(p, required=True):
        p.add_argument("--tableau", required=required,
                       help="tableau JSON, or rows like '[3,2],[1]' (then --n is needed)")
        p.add_argument("--n", type=int, help="rank")

    p = sub.add_parser("validate", help="check the decomposition tableau conditions and largeness")
    tableau_args(p)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("act", help="apply an operator word, print the result")
    tableau_args(p)
    p.add_argument("--ops", required=True, help="operators, first acts first, e.g. 'e2,f-1'")
    p.add_argument("--mode", choices=("finite", "limit"), default="finite")

    p = sub.add_parser("orbit", help="apply an operator word, print every intermediate")
    tableau_args(p)
    p.add_argument("--ops", required=True)
    p.add_argument("--mode", choices=("finite", "limit"), default="finite")

    p = sub.add_parser("graph", help="crystal graph of SDT(lambda) or a ball in SDT(-inf)")
    p.add_argument("--mode", choices=("lambda", "limit"), default="lambda")
    p.add_argument("--shape", help="strict partition, top row first, e.g. '5,3,1'")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, help="BFS depth cap")
    p.add_argument("--dirs", default="e,f", help="operator kinds to follow (limit mode)")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("character", help="character tables as TSV")
    p.add_argument("--formula", choices=("verma", "subsets", "sdt", "content"), default="verma")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, default=6, help="height cap for the root products")
    p.add_argument("--shape", help="strict partition for --formula sdt/content")

    p = sub.add_parser("xi", help="lowest-weight element of a root subset, or the inverse")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--roots", default="", help="e.g. '2-3,2-4,1-4,1-5'")
    p.add_argument("--inverse", action="store_true", help="read --tableau, print its roots")
    p.add_argument("--tableau")
    p.add_argument("--trace", action="store_true", help="include the per-root trace")

    p = sub.add_parser("cut", help="component of L(-inf) (x) r(mu)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lam", help="weakly decreasing nonnegative tuple, e.g. '3,1,0'")
    p.add_argument("--k", type=int, help="shift, at least lam_1")
    p.add_argument("--mu", help="explicit weight mu instead of --lam/--k, e.g. --mu=-1,0,0")
    p.add_argument("--dot", help="also write the component as DOT to this file")
    p.add_argument("--verify", action="store_true", help="compare with SDT(lambda)")

    p = sub.add_parser("axioms", help="check crystal axioms on a graph JSON file")
    p.add_argument("--graph", required=True)
    p.add_argument("--level", choices=("gl", "q"), default="q")
    p.add_argument("--seminormal", action="store_true")
    return ap


def settings(args) -> dict:
    """Effective settings: an explicit flag wins over the environment, which
    wins over the package default."""
    max_nodes = args.max_nodes if args.max_nodes is not None else default_max_nodes()
    if max_nodes <= 0:
        raise UsageError(f"--max-nodes must be positive, got {max_nodes}")
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    return {"max_nodes": max_nodes, "log_level": level}


# ====================================================================
# Input helpers
# ====================================================================

def parse_tableau(text: str, n: Optional[int]) -> ShiftedTableau:
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text().strip()
    try:
        if text.startswith("{"):
            return ShiftedTableau.from_json(json.loads(text))
        rows = json.loads(f"[{text}]") if text else []
    except json.JSONDecodeError as e:
        raise UsageError(f"cannot parse tableau {text!r}: {e}") from e
    if n is None:
        raise UsageError("--n is required for a row-list tableau")
    return ShiftedTableau(n, tuple(tuple(row) for row in rows))


def _weight(text: str) -> WeightVector:
    return WeightVector(tuple(int(x) for x in text.split(",")))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit(text: str, out: Optional[str] = None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text)
        logger.info("wrote %s", out)


# ====================================================================
# Commands
# ====================================================================

def _cmd_validate(args, conf) -> int:
    T = parse_tableau(args.tableau, args.n)
    report = validate_sdt(T)
    size = largeness(T)
    if args.format == "text":
        lines = [f"valid: {'yes' if report.valid else 'no'}", f"largeness: {size.value}"]
        lines += [f"{v.kind}: {v.message}" for v in report.violations]
        _emit("\n".join(lines))
    else:
        _emit(_dump({**report.to_json(), "largeness": size.value}))
    return 0 if report.valid else 1


def _step(T: ShiftedTableau, op, mode: str) -> Optional[ShiftedTableau]:
    if mode == "limit":
        return apply_limit(T, op)
    return apply_finite(T, op)


def _cmd_act(args, conf) -> int:
    T = parse_tableau(args.tableau, args.n)
    for op in parse_operators(args.ops):
        T = _step(T, op, args.mode)
        if T is None:
            break
    _emit(_dump(None if T is None else T.to_json()))
    return 0


def _cmd_orbit(args, conf) -> int:
    T = parse_tableau(args.tableau, args.n)
    steps = [{"op": None, "tableau": T.to_json()}]
    for op in parse_operators(args.ops):
        T = _step(T, op, args.mode)
        steps.append({"op": str(op), "tableau": None if T is None else T.to_json()})
        if T is None:
            break
    _emit(_dump(steps))
    return 0


def _cmd_graph(args, conf) -> int:
    if args.mode == "lambda":
        if args.shape is None:
            raise UsageError("--shape is required with --mode lambda")
        start = FiniteElement(lowest_generator(Shape.parse(args.shape), args.n))
        G = bfs_subcrystal([start], depth=args.depth, max_nodes=conf["max_nodes"])
    else:
        dirs = tuple(d.strip() for d in args.dirs.split(",") if d.strip())
        if not dirs or any(d not in ("e", "f") for d in dirs):
            raise UsageError(f"--dirs must list 'e' and/or 'f', got {args.dirs!r}")
        if args.depth is None:
            raise UsageError("--depth is required with --mode limit")
        G = bfs_subcrystal([LimitElement(limit_generator(args.n))], dirs=dirs,
                           depth=args.depth, max_nodes=conf["max_nodes"])
    _emit(G.to_dot() if args.format == "dot" else G.dumps(), args.out)
    return 0


def _cmd_character(args, conf) -> int:
    if args.formula in ("verma", "subsets"):
        series = (verma_character if args.formula == "verma" else root_subset_character)(args.n, args.depth)
        _emit(f"# {symbolic_product(args.n, args.formula)}\n" + series.to_tsv())
        return 0
    if args.shape is None:
        raise UsageError(f"--shape is required with --formula {args.formula}")
    shape = Shape.parse(args.shape)
    if args.formula == "sdt":
        series = sdt_character(shape, args.n)
    else:
        G = bfs_subcrystal([FiniteElement(lowest_generator(shape, args.n))],
                           max_nodes=conf["max_nodes"])
        series = content_character((x.tableau for x in G.elements()), args.n)
    _emit(series.to_tsv())
    return 0


def _cmd_xi(args, conf) -> int:
    if args.inverse:
        if args.tableau is None:
            raise UsageError("--inverse needs --tableau")
        roots = xi_inverse(parse_tableau(args.tableau, args.n))
        _emit(_dump({"roots": format_roots(roots)}))
        return 0
    trace = [] if args.trace else None
    T = xi_forward(parse_roots(args.roots), args.n, trace=trace)
    out = {"roots": format_roots(parse_roots(args.roots)), "tableau": T.to_json()}
    if trace is not None:
        out["trace"] = trace
    _emit(_dump(out))
    return 0


def _cmd_cut(args, conf) -> int:
    if args.mu is not None:
        if args.verify:
            raise UsageError("--verify needs --lam and --k")
        mu = _weight(args.mu)
        if mu.n != args.n:
            raise UsageError(f"--mu has {mu.n} entries, expected {args.n}")
        G = component_for_mu(mu, conf["max_nodes"])
    else:
        if args.lam is None or args.k is None:
            raise UsageError("give either --mu or both --lam and --k")
        spec = CutSpec.parse(args.lam, args.k)
        if spec.n != args.n:
            raise UsageError(f"--lam has {spec.n} entries, expected {args.n}")
        if args.verify:
            result = verify_cut(spec, conf["max_nodes"])
            if args.dot:
                _emit(result.cut.to_dot(), args.dot)
            _emit(_dump(result.to_json()))
            return 0 if result.isomorphic else 1
        G = cut_component(spec, conf["max_nodes"])
    if args.dot:
        _emit(G.to_dot(), args.dot)
    _emit(G.dumps())
    return 0


def _cmd_axioms(args, conf) -> int:
    try:
        data = json.loads(Path(args.graph).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read graph {args.graph}: {e}") from e
    report = check_axioms(CrystalGraph.from_json(data), level=args.level,
                          seminormal=args.seminormal)
    _emit(_dump(report.to_json()))
    return 0 if report.ok else 1


COMMANDS = {
    "validate": _cmd_validate,
    "act": _cmd_act,
    "orbit": _cmd_orbit,
    "graph": _cmd_graph,
    "character": _cmd_character,
    "xi": _cmd_xi,
    "cut": _cmd_cut,
    "axioms": _cmd_axioms,
}


def main(argv: Optional[List[str]] = None) -> int:
    ap = parser()
    args = ap.parse_args(argv)
    try:
        conf = settings(args)
    except ValueError as e:
        print(f"qcrystals: error: {e}", file=sys.stderr)
        return 2
    logging.basicConfig(level=conf["log_level"], stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, conf)
    except GuardExceeded as e:
        print(f"qcrystals: guard {e.cap_name} exceeded (cap {e.cap})", file=sys.stderr)
        return 1
    except (XiDefect, AssertionError) as e:
        message = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"qcrystals: internal check failed: {message}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"qcrystals: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
