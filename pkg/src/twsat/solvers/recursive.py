"""Polynomial-space recursive solver.

``SAT(view, R)`` splits the view, streams the tuples of part assignments
consistent with ``R`` and succeeds as soon as one tuple makes every part
succeed.  Only the assignments of the frames on the call stack are stored.
"""
from __future__ import annotations

import time

from ..assignment import Assignment, base_satisfying_check, consistent_bound, count_consistent, enumerate_consistent
from ..decomp import TreeDecomposition, check, make_nice
from ..formula import CnfFormula
from .plan import PlanNode, SplitPlan, build_plan
from .splitters import make_splitter
from .stats import SolveResult, SolveStats, Verdict


def refuted(R: Assignment, view_vars: frozenset[int], formula: CnfFormula) -> bool:
    """Some clause with bit 1 has no variable in the view that could still satisfy it."""
    n = formula.num_vars
    bits = R.bits
    for v, b in bits.items():
        if v > n and b:
            for lit in formula.clauses[v - n - 1]:
                x = abs(lit)
                if x in view_vars:
                    val = bits.get(x)
                    if val is None or val == (1 if lit > 0 else 0):
                        break
            else:
                return True
    return False


def solve_plan(plan: SplitPlan, formula: CnfFormula, stats: SolveStats, prune: bool = True) -> bool:
    def sat(node: PlanNode, R: Assignment) -> bool:
        stats.enter(node.depth, node.kind)
        stats.hold(len(R))
        try:
            if node.is_base:
                return base_satisfying_check(node.view_vars, R, formula)
            if prune and refuted(R, node.view_vars, formula):
                return False
            frame = node.frame
            stats.check_bound(count_consistent(R, frame), consistent_bound(frame))
            for parts in enumerate_consistent(R, frame):
                stats.charge()
                if all(sat(child, Ri) for child, Ri in zip(node.parts, parts)):
                    return True
            return False
        finally:
            stats.release(len(R))
            stats.leave()

    return sat(plan.root, Assignment({}))


def recursive_solve(formula: CnfFormula, decomp: TreeDecomposition, *, splitter: str = "half",
                    c: int | None = None, prune: bool = True, validate: bool = True,
                    plan: SplitPlan | None = None,
                    work_budget: int | None = None) -> SolveResult:
    t0 = time.perf_counter()
    if plan is None:
        if validate:
            check(decomp, formula)
        nice = make_nice(decomp)
        plan = build_plan(nice, make_splitter(splitter, c), formula.num_vars, c)
    stats = SolveStats(_budget=work_budget)
    ok = solve_plan(plan, formula, stats, prune)
    stats.wall_time = time.perf_counter() - t0
    return SolveResult(Verdict.of(ok), stats)
