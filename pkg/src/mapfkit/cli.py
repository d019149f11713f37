"""Command-line front end: solve, verify, generate, kernelize, bench.

Exit codes: 0 feasible / verified, 1 infeasible / refuted, 2 aborted,
3 cover budget exceeded, 64 usage error, 65 parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import reductions
from .fileformat import (
    ParseError,
    parse_instance,
    parse_schedule,
    write_instance,
    write_metadata,
    write_schedule,
)
from .graphs import Graph
from .instance import Instance, SwapPolicy, schedule_violations
from .kernel import CoverBudgetExceeded, kernelize
from .solvers import (
    DEFAULT_NODE_BUDGET,
    SolveStatus,
    optimal_makespan,
    solve_joint_bfs,
    solve_makespan2_swaps,
    solve_time_expanded,
)

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_ABORTED = 2
EXIT_COVER_BUDGET = 3
EXIT_USAGE = 64
EXIT_PARSE = 65

GENERATORS = ("3sat-swaps", "3sat-noswaps", "dsp", "tokenswap", "beup")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mapfkit", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("instance", type=Path)
    solve.add_argument("--solver", choices=("joint", "tx", "auto"), default="auto")
    solve.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    solve.add_argument("--lmax", type=int, default=None,
                       help="search the smallest feasible makespan up to this bound "
                            "instead of deciding the file's makespan")
    solve.add_argument("--joint-threshold", type=int, default=18,
                       help="auto mode uses joint BFS when k*(makespan+1) is at most this")
    solve.add_argument("--out", type=Path, default=None,
                       help="write the schedule here instead of stdout")

    verify = sub.add_parser("verify", help="check a schedule against an instance")
    verify.add_argument("instance", type=Path)
    verify.add_argument("schedule", type=Path)

    generate = sub.add_parser("generate", help="build an instance from a source file")
    generate.add_argument("generator")
    generate.add_argument("source", type=Path)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--out", type=Path, default=None,
                          help="output prefix; writes <out>.mapf and <out>.meta")

    kern = sub.add_parser("kernelize", help="shrink an instance via twin reduction")
    kern.add_argument("instance", type=Path)
    kern.add_argument("--cover-budget", type=int, default=18)
    kern.add_argument("--out", type=Path, default=None,
                      help="output prefix; writes <out>.mapf and <out>.map")

    bench = sub.add_parser("bench", help="run solvers over a corpus directory")
    bench.add_argument("corpus", type=Path)
    bench.add_argument("--solver", choices=("joint", "tx", "auto"), default="auto",
                       help="auto runs both solvers and reports disagreements")
    bench.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    bench.add_argument("--out", type=Path, default=None, help="CSV output path")
    return parser


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise ParseError(0, f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: Path) -> Instance:
    return parse_instance(_read_text(path))


def _pick_solver(inst: Instance, choice: str, threshold: int):
    if choice == "joint":
        return "joint", solve_joint_bfs
    if choice == "tx":
        return "tx", solve_time_expanded
    if inst.makespan == 2 and inst.policy is SwapPolicy.ALLOWED:
        return "matching", lambda i, limit: solve_makespan2_swaps(i)
    if inst.k * (inst.makespan + 1) <= threshold:
        return "joint", solve_joint_bfs
    return "tx", solve_time_expanded


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    if args.lmax is not None:
        result = optimal_makespan(inst, args.lmax, args.budget)
        if result.status is SolveStatus.ABORTED:
            print("ABORTED")
            return EXIT_ABORTED
        if result.status is SolveStatus.INFEASIBLE:
            print(f"INFEASIBLE up to makespan {args.lmax}")
            return EXIT_INFEASIBLE
        print(f"FEASIBLE makespan={result.makespan}")
        schedule_text = write_schedule(result.schedule)
    else:
        _name, solver = _pick_solver(inst, args.solver, args.joint_threshold)
        result = solver(inst, limit=args.budget)
        if result.status is SolveStatus.ABORTED:
            print(f"ABORTED after {result.nodes_expanded} nodes")
            return EXIT_ABORTED
        if result.status is SolveStatus.INFEASIBLE:
            print("INFEASIBLE")
            return EXIT_INFEASIBLE
        print("FEASIBLE")
        schedule_text = write_schedule(result.schedule)
    if args.out is not None:
        args.out.write_text(schedule_text)
    else:
        sys.stdout.write(schedule_text)
    return EXIT_FEASIBLE


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    sched = parse_schedule(_read_text(args.schedule))
    if len(sched) != inst.makespan:
        raise ParseError(0, f"schedule length {len(sched)} != makespan {inst.makespan}")
    if any(len(row) != inst.k for row in sched.rows):
        raise ParseError(0, f"schedule rows must have {inst.k} entries")
    problems = schedule_violations(inst, sched)
    if problems:
        print(problems[0])
        return EXIT_INFEASIBLE
    print("OK")
    return EXIT_FEASIBLE


def _parse_formula(text: str) -> reductions.CnfFormula:
    from .fileformat import _Cursor  # shared line-cursor helper

    cur = _Cursor(text)
    header = cur.next("'cnf <vars> <clauses>'")
    parts = header.split()
    if len(parts) != 3 or parts[0] != "cnf":
        raise ParseError(cur.last_line_no, "expected 'cnf <vars> <clauses>'")
    num_vars, num_clauses = int(parts[1]), int(parts[2])
    clauses = []
    for _ in range(num_clauses):
        line = cur.next("clause")
        lits = tuple(int(tok) for tok in line.split())
        if len(lits) != 3:
            raise ParseError(cur.last_line_no, "clauses must have exactly 3 literals")
        clauses.append(lits)
    return reductions.CnfFormula(num_vars, tuple(clauses))


def _parse_dsp_source(text: str):
    from .fileformat import _Cursor

    cur = _Cursor(text)
    header = cur.next("'dag <n> <m>'")
    parts = header.split()
    if len(parts) != 3 or parts[0] != "dag":
        raise ParseError(cur.last_line_no, "expected 'dag <n> <m>'")
    n, m = int(parts[1]), int(parts[2])
    arcs = [cur.next_int_pair("arc") for _ in range(m)]
    k = cur.next_keyword_int("pairs")
    pairs = [cur.next_int_pair("pair") for _ in range(k)]
    return reductions.Digraph(n, tuple(arcs)), pairs


def _parse_tokenswap_source(text: str):
    from .fileformat import _Cursor

    cur = _Cursor(text)
    n = cur.next_keyword_int("tree")
    edges = [cur.next_int_pair("tree edge") for _ in range(max(n - 1, 0))]
    perm_line = cur.next("'perm <ids>'")
    parts = perm_line.split()
    if parts[0] != "perm" or len(parts) != n + 1:
        raise ParseError(cur.last_line_no, f"expected 'perm' with {n} ids")
    perm = [int(tok) for tok in parts[1:]]
    lspan = cur.next_keyword_int("lspan")
    return Graph(n, edges), perm, lspan


def _parse_beup_source(text: str):
    from .fileformat import _Cursor

    cur = _Cursor(text)
    header = cur.next("'beup <n> <m> <s> <t> <k> <d>'")
    parts = header.split()
    if len(parts) != 7 or parts[0] != "beup":
        raise ParseError(cur.last_line_no, "expected 'beup <n> <m> <s> <t> <k> <d>'")
    n, m, s, t, k, d = (int(tok) for tok in parts[1:])
    edges = [cur.next_int_pair("edge") for _ in range(m)]
    return Graph(n, edges), s, t, k, d


def cmd_generate(args) -> int:
    if args.generator not in GENERATORS:
        raise UsageError(
            f"unknown generator '{args.generator}' (choose from {', '.join(GENERATORS)})"
        )
    text = _read_text(args.source)
    try:
        if args.generator == "3sat-swaps":
            gen = reductions.from_3sat_swaps(_parse_formula(text))
        elif args.generator == "3sat-noswaps":
            gen = reductions.from_3sat_noswaps(_parse_formula(text))
        elif args.generator == "dsp":
            dag, pairs = _parse_dsp_source(text)
            gen = reductions.from_disjoint_shortest_paths(dag, pairs)
        elif args.generator == "tokenswap":
            tree, perm, lspan = _parse_tokenswap_source(text)
            gen = reductions.from_token_swapping_tree(tree, perm, lspan)
        else:
            g, s, t, k, d = _parse_beup_source(text)
            gen = reductions.from_beup(g, s, t, k, d)
    except (reductions.FormulaError, reductions.SourceError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(0, f"bad generator source: {exc}") from None
    out = args.out if args.out is not None else args.source.with_suffix("")
    instance_path = Path(f"{out}.mapf")
    meta_path = Path(f"{out}.meta")
    instance_path.write_text(write_instance(gen.instance))
    meta = {"generator": args.generator, "source": gen.source, "expected": gen.expected}
    for name, (lo, hi) in gen.gadget_map.items():
        meta[f"gadget.{name}"] = f"{lo}..{hi}"
    meta_path.write_text(write_metadata(meta))
    print(f"wrote {instance_path} ({gen.instance.graph.n} vertices, "
          f"{gen.instance.k} agents, expected={gen.expected})")
    return 0


def cmd_kernelize(args) -> int:
    inst = _load_instance(args.instance)
    try:
        kout = kernelize(inst, cover_budget=args.cover_budget)
    except CoverBudgetExceeded as exc:
        print(str(exc))
        return EXIT_COVER_BUDGET
    out = args.out if args.out is not None else args.instance.with_suffix("")
    kernel_path = Path(f"{out}.kernel.mapf")
    map_path = Path(f"{out}.kernel.map")
    kernel_path.write_text(write_instance(kout.kernel))
    map_path.write_text(
        "".join(f"{new} {orig}\n" for new, orig in enumerate(kout.vertex_map))
    )
    bound = kout.size_bound(inst.k)
    print(f"original vertices: {inst.graph.n}")
    print(f"kernel vertices:   {kout.kernel.graph.n}")
    print(f"cover size:        {len(kout.cover)}")
    print(f"size bound |U| + 2^|U|*3k: {bound}")
    print(f"wrote {kernel_path} and {map_path}")
    return 0


def _bench_one(path: Path, solver_names, budget: int):
    rows = []
    outcomes = {}
    try:
        inst = parse_instance(path.read_text())
    except (OSError, ParseError) as exc:
        for name in solver_names:
            rows.append((path.name, name, "ERROR", 0, 0.0))
        return rows, outcomes, str(exc)
    for name in solver_names:
        solver = solve_joint_bfs if name == "joint" else solve_time_expanded
        result = solver(inst, limit=budget)
        rows.append((path.name, name, result.status.value,
                     result.nodes_expanded, round(result.elapsed * 1000.0, 3)))
        outcomes[name] = result.status
    return rows, outcomes, None


def cmd_bench(args) -> int:
    corpus = sorted(args.corpus.glob("*.mapf"))
    solver_names = ("joint", "tx") if args.solver == "auto" else (args.solver,)
    threads = max(int(os.environ.get("MAPF_THREADS", "1")), 1)
    results = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda p: _bench_one(p, solver_names, args.budget), corpus))
    else:
        results = [_bench_one(p, solver_names, args.budget) for p in corpus]

    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(("instance", "solver", "outcome", "nodes", "millis"))
    disagreements = []
    errors = 0
    for path, (rows, outcomes, error) in zip(corpus, results):
        for row in rows:
            writer.writerow(row)
        if error is not None:
            errors += 1
            continue
        answers = {s: o for s, o in outcomes.items() if o is not SolveStatus.ABORTED}
        if len(set(answers.values())) > 1:
            disagreements.append(path.name)
    if args.out is not None:
        args.out.write_text(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())
    print(f"instances: {len(corpus)}  errors: {errors}  "
          f"disagreements: {len(disagreements)}")
    for name in disagreements:
        print(f"DISAGREEMENT: {name}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if args.command == "solve":
            if args.budget < 1:
                raise UsageError("--budget must be at least 1")
            return cmd_solve(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "kernelize":
            return cmd_kernelize(args)
        if args.command == "bench":
            return cmd_bench(args)
        raise UsageError(f"unknown command {args.command}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def console_main() -> None:
    raise SystemExit(main())
