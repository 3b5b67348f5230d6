"""Command-line front end.

Exit codes: 0 success (or "equivalent" / "verified" / "is a solution"),
1 a negative verdict, 2 bad input (parse, alphabet, file or flag errors).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel

from probgkat.axioms import check_proof, check_solution, parse_script, parse_solution_map, parse_system_file
from probgkat.equivalence import (
    decide_bisim,
    encode_coalgebraic,
    encoded_doc,
    format_distance,
    minimize,
    pseudometric,
)
from probgkat.errors import ProbGKATError
from probgkat.semantics import build_automaton, derivative, expand, from_json, merge_automata, reachable, to_dot, to_json
from probgkat.semantics.automaton import Automaton
from probgkat.semantics.export import dist_json
from probgkat.sim import derive_seed, estimate, parse_policy, run_once
from probgkat.syntax import Alphabet, Expr, enumerate_atoms, is_gkat, parse_program, print_expr, print_rat
from probgkat.utils.logger import logger


@dataclass
class Loaded:
    alphabet: Alphabet
    automaton: Automaton
    root: int
    expr: Optional[Expr] = None


class EquivDoc(BaseModel):
    bisimilar: bool
    left: int
    right: int
    blocks: List[List[int]]
    states: List[str]


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(path: str) -> Loaded:
    """A program file, or an automaton JSON document (which must name a root)."""
    if path.endswith(".json"):
        aut, root = from_json(_read(path))
        if root is None:
            raise ProbGKATError(f"{path}: automaton document has no root state")
        aut, _ = reachable(aut, root)
        return Loaded(aut.alphabet, aut, 0)
    alphabet, e = parse_program(_read(path))
    aut, root = build_automaton(e, alphabet)
    return Loaded(alphabet, aut, root, e)


def _program(path: str) -> tuple[Alphabet, Expr]:
    loaded = _load(path)
    if loaded.expr is None:
        raise ProbGKATError(f"{path}: this command needs a program, not an automaton")
    return loaded.alphabet, loaded.expr


def _emit(payload: object) -> None:
    if isinstance(payload, BaseModel):
        print(payload.model_dump_json(indent=2))
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


def _merged(a: str, b: str) -> tuple[Automaton, int, int]:
    left, right = _load(a), _load(b)
    merged, remap1, remap2 = merge_automata(left.automaton, right.automaton)
    return merged, remap1[left.root], remap2[right.root]


# ---- commands ----------------------------------------------------------------


def cmd_atoms(args: argparse.Namespace) -> int:
    alphabet = _load(args.file).alphabet
    atoms = enumerate_atoms(alphabet)
    if args.json:
        _emit([atom.label() for atom in atoms])
    else:
        for atom in atoms:
            print(atom)
    return 0


def cmd_derive(args: argparse.Namespace) -> int:
    alphabet, e = _program(args.file)
    nu = derivative(e, alphabet.parse_atom(args.atom))
    if args.json:
        _emit(dist_json(nu))
    else:
        for x, p in nu.items():
            print(f"{print_rat(p)}\t{x}")
    return 0


def cmd_automaton(args: argparse.Namespace) -> int:
    loaded = _load(args.file)
    if args.dot:
        print(to_dot(loaded.automaton, loaded.root))
    elif args.json:
        print(to_json(loaded.automaton, loaded.root))
    else:
        gkat = " (GKAT fragment)" if loaded.expr is not None and is_gkat(loaded.expr) else ""
        print(f"{loaded.automaton.n_states} state(s), {len(loaded.automaton.atoms)} atom(s){gkat}")
        for x in loaded.automaton.states():
            print(f"s{x}: {loaded.automaton.descr_text(x)}")
    return 0


def cmd_equiv(args: argparse.Namespace) -> int:
    merged, x, y = _merged(args.file1, args.file2)
    same, partition = decide_bisim(merged, x, y)
    doc = EquivDoc(
        bisimilar=same,
        left=x,
        right=y,
        blocks=partition.blocks,
        states=[merged.descr_text(s) for s in merged.states()],
    )
    if args.json:
        _emit(doc)
    else:
        print("bisimilar" if same else "not bisimilar")
        _emit({"blocks": doc.blocks})
    return 0 if same else 1


def cmd_metric(args: argparse.Namespace) -> int:
    merged, x, y = _merged(args.file1, args.file2)
    d = format_distance(pseudometric(merged, x, y))
    if args.json:
        _emit({"distance": d})
    else:
        print(d)
    return 0


def cmd_minimize(args: argparse.Namespace) -> int:
    loaded = _load(args.file)
    quotient, block_map = minimize(loaded.automaton)
    root = block_map[loaded.root]
    if args.dot:
        print(to_dot(quotient, root))
    elif args.json:
        print(to_json(quotient, root))
    else:
        print(f"{loaded.automaton.n_states} state(s) -> {quotient.n_states} block(s)")
    return 0


def cmd_expand(args: argparse.Namespace) -> int:
    alphabet, e = _program(args.file)
    text = print_expr(expand(e, alphabet))
    if args.json:
        _emit({"expansion": text})
    else:
        print(text)
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    g = encode_coalgebraic(_load(args.file).automaton)
    doc = encoded_doc(g)
    if args.json:
        _emit(doc)
    else:
        print(f"nodes={doc.node_count} edges={doc.edge_count}")
        print(f"literal bounds={doc.literal_bounds} hold={doc.literal_bounds_hold}")
        print(f"atom bounds={doc.atom_bounds} hold={doc.atom_bounds_hold}")
    return 0


def cmd_check_proof(args: argparse.Namespace) -> int:
    report = check_proof(parse_script(_read(args.file)), cross_check=args.cross_check)
    if args.json:
        _emit(
            {
                "ok": report.ok,
                "checked": report.checked,
                "failing_line": report.failing_line,
                "message": report.message,
                "expected": report.expected,
                "found": report.found,
            }
        )
    else:
        print(report.summary())
    return 0 if report.ok else 1


def cmd_check_solution(args: argparse.Namespace) -> int:
    _, system = parse_system_file(_read(args.sysfile))
    h = parse_solution_map(_read(args.mapfile), system.alphabet)
    ok = check_solution(system, h)
    if args.json:
        _emit({"solution": ok})
    else:
        print("solution" if ok else "not a solution")
    return 0 if ok else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    alphabet, e = _program(args.file)
    policy = parse_policy(args.policy, alphabet)
    freqs = estimate(e, alphabet, policy, args.n, args.seed, args.max_steps)
    payload: dict = {str(t): f"{f * args.n}/{args.n}" for t, f in freqs.items()}
    if args.trace:
        runs = [run_once(e, alphabet, policy, derive_seed(args.seed, i), args.max_steps) for i in range(args.trace)]
        payload = {
            "frequencies": payload,
            "traces": [
                {"terminal": str(r.terminal), "steps": [[atom.label(), action] for atom, action in r.trace]}
                for r in runs
            ],
        }
    _emit(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="probgkat", description="ProbGKAT semantics, equivalence and proofs")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str, files: Sequence[str] = ("file",)) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        for f in files:
            p.add_argument(f)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(handler=handler)
        return p

    command("atoms", cmd_atoms, "list the atoms of a program's alphabet")
    command("derive", cmd_derive, "derivative under one atom").add_argument(
        "--atom", required=True, help="comma-separated set of true tests"
    )
    for name, handler, help_text in (
        ("automaton", cmd_automaton, "reachable automaton"),
        ("minimize", cmd_minimize, "quotient by bisimilarity"),
    ):
        command(name, handler, help_text).add_argument("--dot", action="store_true", help="graphviz DOT output")
    command("equiv", cmd_equiv, "decide bisimilarity", files=("file1", "file2"))
    command("metric", cmd_metric, "behavioural distance", files=("file1", "file2"))
    command("expand", cmd_expand, "expansion from derivatives")
    command("encode", cmd_encode, "three-sorted graph encoding")
    command("check-proof", cmd_check_proof, "verify a proof script").add_argument(
        "--cross-check", action="store_true", help="also decide bisimilarity of every line"
    )
    command("check-solution", cmd_check_solution, "check a solution map", files=("sysfile", "mapfile"))
    sim = command("simulate", cmd_simulate, "Monte Carlo terminal frequencies")
    sim.add_argument("--n", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--policy", default="uniform", help="fixed:<atom> | uniform | cycle:<a1;a2;...>")
    sim.add_argument("--max-steps", type=int, default=None)
    sim.add_argument("--trace", type=int, default=0, metavar="K", help="also dump the first K runs")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logger.debug("Dispatching command={c}", c=args.command)
    try:
        return args.handler(args)
    except (ProbGKATError, OSError, ValueError) as exc:
        logger.debug("Command failed: {e}", e=repr(exc))
        print(f"probgkat: error: {exc}", file=sys.stderr)
        return 2
    except RecursionError:
        logger.debug("Command failed: nesting too deep")
        print("probgkat: error: input is nested too deeply", file=sys.stderr)
        return 2
