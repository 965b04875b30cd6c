"""Hybrid solver: the recursive scheme over epsilon groups of assignments.

For every view the solver returns one flag per member of the view's group.
Each split enumerates the fixings of the split bag's fixed prefix; for a
fixing, every part is solved once for its whole group and the parent flags
are combined from the part flags.  Part flag arrays are dropped before the
next fixing.
"""
from __future__ import annotations

import itertools
import time

import numpy as np

from .. import _kernels
from ..assignment import AssignmentGroup, GroupFrame, trivial_group
from ..decomp import TreeDecomposition, check, make_nice
from ..formula import CnfFormula
from ..params import TradeoffParams
from .plan import PlanNode, SplitPlan, build_plan
from .splitters import make_splitter
from .stats import SolveResult, SolveStats, TypeViolation, Verdict


def member_values(group: AssignmentGroup) -> dict[int, np.ndarray | int]:
    """Vertex -> value over all members (array for free vertices, int for fixed)."""
    m = np.arange(group.size, dtype=np.int64)
    vals: dict = dict(group.fixed)
    for t, v in enumerate(group.free):
        vals[v] = (m >> t) & 1
    return vals


def base_flags(group: AssignmentGroup, view_vars: frozenset[int], formula: CnfFormula) -> np.ndarray:
    n = formula.num_vars
    vals = member_values(group)
    ok = np.ones(group.size, dtype=bool)
    for v in group.scope:
        if v <= n:
            continue
        cbit = vals[v]
        if isinstance(cbit, int) and cbit == 0:
            continue
        sat = np.zeros(group.size, dtype=bool)
        for lit in formula.clauses[v - n - 1]:
            x = abs(lit)
            if x in view_vars:
                sat |= np.asarray(vals[x]) == (1 if lit > 0 else 0)
        ok &= (np.asarray(cbit) == 0) | sat
    return ok


def refuted_members(group: AssignmentGroup, view_vars: frozenset[int], formula: CnfFormula) -> np.ndarray:
    """Per member: some clause with bit 1 has no view variable that could still satisfy it."""
    n = formula.num_vars
    vals = member_values(group)
    dead = np.zeros(group.size, dtype=bool)
    for v in group.scope:
        if v <= n:
            continue
        cbit = vals[v]
        if isinstance(cbit, int) and cbit == 0:
            continue
        can = np.zeros(group.size, dtype=bool)
        for lit in formula.clauses[v - n - 1]:
            x = abs(lit)
            if x in view_vars:
                if x not in vals:
                    can[:] = True
                    break
                can |= np.asarray(vals[x]) == (1 if lit > 0 else 0)
        dead |= (np.asarray(cbit) == 1) & ~can
    return dead


def _joint_options(gf: GroupFrame, parent: AssignmentGroup, children: tuple[AssignmentGroup, ...],
                   fixing) -> list[list[tuple[int, int, tuple[int, ...]]]]:
    """Per split-bag vertex free in some part: options (req_mask, req_val, per-part bits)."""
    frame = gf.frame
    k = frame.num_parts
    ppos = parent.position()
    cpos = [ch.position() for ch in children]
    out = []
    for v in frame.split_bag:
        free_in = [i for i in range(k) if v in cpos[i]]
        if not free_in:
            continue
        fixed_vals = [fixing[i][v] for i in range(k) if v not in cpos[i]]

        def bits(val_for_part):
            return tuple((val_for_part(i) << cpos[i][v]) if i in free_in else 0 for i in range(k))

        def req(b):
            return (1 << ppos[v], b << ppos[v]) if v in ppos else (0, 0)

        opts = []
        if frame.is_var(v):
            if v in parent.fixed:
                a = parent.fixed[v]
                opts.append((0, 0, bits(lambda i: a)))
            elif fixed_vals:
                a = fixed_vals[0]
                opts.append((*req(a), bits(lambda i: a)))
            else:
                for a in (0, 1):
                    opts.append((*req(a), bits(lambda i, a=a: a)))
        else:
            pbit = parent.fixed.get(v)
            claimed = any(fixed_vals)
            if pbit == 0:
                opts.append((0, 0, bits(lambda i: 0)))
            elif pbit == 1 or v not in frame.parent_scope:
                if claimed:
                    opts.append((0, 0, bits(lambda i: 0)))
                else:
                    for j in free_in:
                        opts.append((0, 0, bits(lambda i, j=j: int(i == j))))
            else:
                if claimed:
                    opts.append((*req(1), bits(lambda i: 0)))
                else:
                    opts.append((*req(0), bits(lambda i: 0)))
                    for j in free_in:
                        opts.append((*req(1), bits(lambda i, j=j: int(i == j))))
        out.append(opts)
    return out


def _base_index(parent: AssignmentGroup, child: AssignmentGroup, split_bag) -> np.ndarray:
    """Child member index contributed by the parent's free bits outside the split bag."""
    m = np.arange(parent.size, dtype=np.int64)
    idx = np.zeros(parent.size, dtype=np.int64)
    ppos = parent.position()
    xp = set(split_bag)
    for t, v in enumerate(child.free):
        if v not in xp:
            idx |= ((m >> ppos[v]) & 1) << t
    return idx


class HybridRun:
    def __init__(self, plan: SplitPlan, formula: CnfFormula, epsilon: float, stats: SolveStats,
                 prune: bool = True):
        self.plan = plan
        self.prune = prune
        self.formula = formula
        self.epsilon = epsilon
        self.stats = stats
        self.bags = plan.decomp.bags

    def solve(self, node: PlanNode, group: AssignmentGroup) -> np.ndarray:
        stats = self.stats
        stats.enter(node.depth, node.kind)
        stats.hold(len(group.fixed))
        try:
            if node.is_base:
                flags = base_flags(group, node.view_vars, self.formula)
                stats.hold(flags.size)
                return flags
            return self._split(node, group)
        finally:
            stats.release(len(group.fixed))
            stats.leave()

    def _split(self, node: PlanNode, group: AssignmentGroup) -> np.ndarray:
        stats = self.stats
        gf = node.group_frame(self.bags, self.formula.num_vars, self.epsilon)
        M = np.zeros(group.size, dtype=bool)
        stats.hold(M.size)
        live = ~refuted_members(group, node.view_vars, self.formula) if self.prune else np.ones(group.size, bool)
        if not live.any():
            return M
        options = gf.fixing_options(group)
        stats.check_bound(gf.fixing_count(group, options), gf.fixing_bound())
        bases = None
        for fixing in gf.fixings(group, options):
            stats.charge()
            children = gf.child_groups(group, fixing)
            if bases is None:
                bases = np.stack([_base_index(group, ch, gf.frame.split_bag) for ch in children])
            tables = []
            held = 0
            dead = False
            for part, ch in zip(node.parts, children):
                flags = self.solve(part, ch)
                tables.append(flags)
                held += flags.size
                if not flags.any():
                    dead = True
                    break
            if not dead:
                self._combine(gf, group, children, fixing, tables, bases, M)
            stats.release(held)
            if M[live].all():
                break
        return M

    def _combine(self, gf, group, children, fixing, tables, bases, M):
        opts = _joint_options(gf, group, children, fixing)
        combos = list(itertools.product(*opts))
        k = len(children)
        R = len(combos)
        xp = np.zeros((R, k), dtype=np.int64)
        req_mask = np.zeros(R, dtype=np.int64)
        req_val = np.zeros(R, dtype=np.int64)
        for r, combo in enumerate(combos):
            for rm, rv, bits in combo:
                req_mask[r] |= rm
                req_val[r] |= rv
                for i in range(k):
                    xp[r, i] |= bits[i]
        offsets = np.zeros(k, dtype=np.int64)
        for i in range(1, k):
            offsets[i] = offsets[i - 1] + tables[i - 1].size
        flat = np.concatenate(tables)
        self.stats.charge(_kernels.combine(group.size, flat, offsets, bases, xp, req_mask, req_val, M))


def hybrid_solve(formula: CnfFormula, decomp: TreeDecomposition, params: TradeoffParams,
                 splitter: str = "hc", *, validate: bool = True, plan: SplitPlan | None = None,
                 prune: bool = True, work_budget: int | None = None) -> SolveResult:
    t0 = time.perf_counter()
    if plan is None:
        if validate:
            check(decomp, formula)
        if splitter == "h2" and params.c != 2:
            raise ValueError("splitter h2 requires c = 2")
        nice = make_nice(decomp)
        plan = build_plan(nice, make_splitter(splitter, params.c), formula.num_vars, params.c)
    if plan.max_type > params.c:
        raise TypeViolation(f"plan reaches {plan.max_type} splitting nodes, limit {params.c}")
    stats = SolveStats(_budget=work_budget)
    run = HybridRun(plan, formula, params.epsilon, stats, prune)
    flags = run.solve(plan.root, trivial_group())
    stats.release(flags.size)
    if stats.max_type_seen > params.c:
        raise TypeViolation(f"processed a view with {stats.max_type_seen} splitting nodes")
    stats.wall_time = time.perf_counter() - t0
    return SolveResult(Verdict.of(bool(flags.any())), stats)
