"""Command-line driver.

Exit codes: 10 satisfiable, 20 unsatisfiable, 0 other success, 1 error.

Report columns (CSV order, also the JSON key order):
  instance, engine, c, epsilon, splitter, d, verdict, n, m, width, bags,
  work_units, peak_entries, max_type_seen, measured_splitting_depth, depth_bound
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import oracle, treegen
from .decomp import DecompositionError, TreeDecomposition, emit_td, make_nice, parse_td, validate
from .formula import CnfFormula, FormatError, emit_dimacs, parse_dimacs
from .params import ParamError, TradeoffParams, depth_bound, plan_parameters
from .solvers import SPLITTERS, SolverConfig, TypeViolation, Verdict, solve
from .splitting import MsdSearch, SplitError, SubtreeView

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_ERROR = 1

COLUMNS = ("instance", "engine", "c", "epsilon", "splitter", "d", "verdict", "n", "m", "width", "bags",
           "work_units", "peak_entries", "max_type_seen", "measured_splitting_depth", "depth_bound")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunReport:
    instance: str
    engine: str
    c: int | None
    epsilon: float | None
    splitter: str | None
    d: int
    verdict: str
    n: int
    m: int
    width: int
    bags: int
    work_units: int
    peak_entries: int
    max_type_seen: int
    measured_splitting_depth: int
    depth_bound: float | None

    def row(self) -> list:
        return [_fmt(getattr(self, k)) for k in COLUMNS]

    def as_json(self) -> str:
        return json.dumps({k: getattr(self, k) for k in COLUMNS})


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6g}"
    return x


def _csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(cnf_path: str, td_path: str) -> tuple[CnfFormula, TreeDecomposition]:
    formula = parse_dimacs(Path(cnf_path).read_bytes())
    decomp = parse_td(Path(td_path).read_bytes())
    report = validate(decomp, formula)
    if not report:
        raise DecompositionError(f"{report.violation}: {report.witness}")
    return formula, decomp


def _parts_bound(decomp: TreeDecomposition) -> int:
    return 2 if decomp.is_path else 3


def run_one(name: str, formula: CnfFormula, decomp: TreeDecomposition, engine: str,
            params: TradeoffParams | None, splitter: str | None) -> RunReport:
    config = SolverConfig(engine, params, splitter or "hc")
    result = solve(formula, decomp, config)
    st = result.stats
    nice = make_nice(decomp)
    c = params.c if params else None
    bound = depth_bound(c, nice.num_bags) if c is not None else None
    return RunReport(name, engine, c, params.epsilon if params else None,
                     splitter if engine == "hybrid" else None, _parts_bound(decomp),
                     result.verdict.value, formula.num_vars, formula.num_clauses, decomp.width,
                     decomp.num_bags, st.work_units, st.peak_entries, st.max_type_seen,
                     st.measured_splitting_depth, None if bound is None else round(bound, 6))


def _hybrid_params(args, decomp) -> TradeoffParams | None:
    if args.engine != "hybrid":
        return None
    if args.plan_space is not None:
        return plan_parameters(args.plan_space, _parts_bound(decomp))
    if args.c is None or args.epsilon is None:
        raise UsageError("--engine hybrid needs --c and --epsilon (or --plan-space)")
    return TradeoffParams(args.c, args.epsilon)


def cmd_solve(args) -> int:
    formula, decomp = _load(args.cnf, args.td)
    params = _hybrid_params(args, decomp)
    if params is not None and args.splitter == "path" and not decomp.is_path:
        raise UsageError("--splitter path needs a path decomposition")
    report = run_one(Path(args.cnf).stem, formula, decomp, args.engine, params, args.splitter)
    sat = report.verdict == Verdict.SAT.value
    print("s SATISFIABLE" if sat else "s UNSATISFIABLE")
    _emit(_csv([report]) if args.csv else report.as_json() + "\n", args.out)
    return EXIT_SAT if sat else EXIT_UNSAT


def cmd_check(args) -> int:
    formula = parse_dimacs(Path(args.cnf).read_bytes())
    decomp = parse_td(Path(args.td).read_bytes())
    report = validate(decomp, formula)
    info = {"valid": report.ok, "width": decomp.width, "bags": decomp.num_bags,
            "max_degree": decomp.max_degree, "nice": decomp.max_degree <= 3, "path": decomp.is_path}
    if not report.ok:
        info["violation"] = report.violation
        info["witness"] = repr(report.witness)
    _emit(json.dumps(info) + "\n", args.out)
    return 0 if report.ok else EXIT_ERROR


def _tree_td(adj, comment: str) -> str:
    return f"c {comment}\n" + emit_td(treegen.as_decomposition(adj))


def cmd_gen(args) -> int:
    if args.family == "fib":
        if args.extended:
            adj, r = treegen.gen_fib_extended(args.h)
            text = _tree_td(adj, f"extended fibonacci h={args.h} r={r}")
        else:
            adj, root = treegen.gen_fib(args.h)
            text = _tree_td(adj, f"fibonacci h={args.h} root={root}")
    elif args.family == "gfib":
        adj, root = treegen.gen_gfib(args.c, args.h)
        text = _tree_td(adj, f"generalized fibonacci c={args.c} h={args.h} root={root}")
    elif args.family == "G":
        adj, marked = treegen.gen_G(args.c, args.h, args.w)
        text = _tree_td(adj, f"G c={args.c} h={args.h} w={args.w} splitting {' '.join(map(str, sorted(marked)))}")
    else:
        spec = oracle.GeneratorSpec(args.width, args.shape, args.vars, args.clauses,
                                    args.max_clause_len or max(1, min(3, args.width, args.vars)), args.seed)
        formula, decomp = oracle.gen_bounded_width(spec)
        if args.prefix:
            Path(args.prefix + ".cnf").write_text(emit_dimacs(formula))
            Path(args.prefix + ".td").write_text(emit_td(decomp))
            return 0
        text = emit_dimacs(formula) + emit_td(decomp)
    _emit(text, args.out)
    return 0


def _splitting_from_comments(text: str) -> list[int]:
    for line in text.splitlines():
        if line.startswith("c ") and " splitting " in line:
            return [int(x) for x in line.split(" splitting ", 1)[1].split()]
    return []


def cmd_msd(args) -> int:
    text = Path(args.td).read_text()
    decomp = parse_td(text)
    marked = args.splitting if args.splitting is not None else _splitting_from_comments(text)
    view = SubtreeView(decomp.bags.keys(), marked, decomp.adjacency)
    search = MsdSearch(args.c, memo=not args.no_memo)
    value = search.value(view)
    move = None if value in (0, math.inf) else search.best_move(view)
    out = {"msd": None if value == math.inf else value, "move": move, "c": args.c, "nodes": decomp.num_bags}
    _emit(json.dumps(out) + "\n", args.out)
    return 0


def cmd_bench(args) -> int:
    reports = []
    for cnf in args.instances:
        td = str(Path(cnf).with_suffix(".td"))
        formula, decomp = _load(cnf, td)
        name = Path(cnf).stem
        for c in args.c_list:
            for eps in args.epsilon_list:
                splitter = args.splitter
                if splitter == "h2" and c != 2:
                    continue
                reports.append(run_one(name, formula, decomp, "hybrid", TradeoffParams(c, eps), splitter))
        if args.baselines:
            for engine in ("dp", "recursive"):
                reports.append(run_one(name, formula, decomp, engine, None, None))
    _emit(_csv(reports), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twsat", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide a (cnf, td) pair", description=__doc__,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("--cnf", required=True)
    s.add_argument("--td", required=True)
    s.add_argument("--engine", choices=("dp", "recursive", "hybrid"), default="dp")
    s.add_argument("--c", type=int)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--splitter", choices=SPLITTERS, default="hc")
    s.add_argument("--plan-space", type=float, metavar="EPSILON_PRIME")
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--csv", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check", help="validate a decomposition")
    s.add_argument("--cnf", required=True)
    s.add_argument("--td", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("gen", help="emit fixtures")
    gsub = s.add_subparsers(dest="family", required=True, parser_class=_Parser)
    g = gsub.add_parser("fib")
    g.add_argument("--h", type=int, required=True)
    g.add_argument("--extended", action="store_true")
    g = gsub.add_parser("gfib")
    g.add_argument("--c", type=int, required=True)
    g.add_argument("--h", type=int, required=True)
    g = gsub.add_parser("G")
    g.add_argument("--c", type=int, required=True)
    g.add_argument("--h", type=int, required=True)
    g.add_argument("--w", type=int, required=True)
    g = gsub.add_parser("random")
    g.add_argument("--width", type=int, required=True)
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--clauses", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--shape", choices=("path", "tree"), default="path")
    g.add_argument("--max-clause-len", type=int)
    g.add_argument("--prefix", help="write PREFIX.cnf and PREFIX.td")
    for g in gsub.choices.values():
        g.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("msd", help="minimum splitting depth of a tree")
    s.add_argument("--td", required=True)
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--splitting", type=int, nargs="*", help="initial splitting nodes (default: from comments)")
    s.add_argument("--no-memo", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_msd)

    s = sub.add_parser("bench", help="sweep (c, epsilon) over instances; one CSV row per run",
                       description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("instances", nargs="+", help="cnf files, each with a sibling .td")
    s.add_argument("--c-list", type=int, nargs="+", default=[2])
    s.add_argument("--epsilon-list", type=float, nargs="+", default=[0.1, 0.9])
    s.add_argument("--splitter", choices=SPLITTERS, default="hc")
    s.add_argument("--baselines", action="store_true", help="also run dp and recursive")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
    except (FormatError, DecompositionError, ParamError, SplitError, TypeViolation, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
