"""Bottom-up dynamic programming over bag tables.

A state of bag X fixes every variable of X and carries, for every clause of
X, whether the clause is already satisfied by the variables chosen in the
subtree at or below X.  A clause that leaves the table on the way up (its
topmost bag is the child) must be satisfied by then.
"""
from __future__ import annotations

import time

import numpy as np

from .. import _kernels
from ..decomp import TreeDecomposition, check, make_nice
from ..formula import CnfFormula
from .stats import SolveResult, SolveStats, Verdict


def _local_table(layout: list[int], formula: CnfFormula) -> np.ndarray:
    """States reachable from the bag's own variables."""
    n = formula.num_vars
    pos = {v: t for t, v in enumerate(layout)}
    var_pos = [t for t, v in enumerate(layout) if v <= n]
    states = np.zeros(1 << len(var_pos), dtype=np.int64)
    combos = np.arange(1 << len(var_pos), dtype=np.int64)
    for k, t in enumerate(var_pos):
        states |= ((combos >> k) & 1) << t
    for t, v in enumerate(layout):
        if v <= n:
            continue
        sat = np.zeros(combos.shape, dtype=bool)
        for lit in formula.clauses[v - n - 1]:
            x = abs(lit)
            if x in pos:
                bit = (states >> pos[x]) & 1
                sat |= bit == (1 if lit > 0 else 0)
        states |= sat.astype(np.int64) << t
    table = np.zeros(1 << len(layout), dtype=bool)
    table[states] = True
    return table


def _projection(child_layout: list[int], parent_pos: dict[int, int], n: int):
    """Child states mapped into parent bit positions, plus the discharge filter."""
    idx = np.arange(1 << len(child_layout), dtype=np.int64)
    var_proj = np.zeros_like(idx)
    clause_proj = np.zeros_like(idx)
    discharged = np.ones(idx.shape, dtype=bool)
    for t, v in enumerate(child_layout):
        bit = (idx >> t) & 1
        if v in parent_pos:
            if v <= n:
                var_proj |= bit << parent_pos[v]
            else:
                clause_proj |= bit << parent_pos[v]
        elif v > n:
            discharged &= bit == 1
    return var_proj, clause_proj, discharged


def dp_solve(formula: CnfFormula, decomp: TreeDecomposition, root: int | None = None,
             validate: bool = True) -> SolveResult:
    t0 = time.perf_counter()
    if validate:
        check(decomp, formula)
    decomp = make_nice(decomp)
    n = formula.num_vars
    stats = SolveStats()
    adj = decomp.adjacency
    root = min(decomp.bags) if root is None else root
    layouts = {b: sorted(members) for b, members in decomp.bags.items()}

    # iterative post-order
    parent = {root: None}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    tables: dict[int, np.ndarray] = {}
    for b in reversed(order):
        layout = layouts[b]
        pos = {v: t for t, v in enumerate(layout)}
        table = _local_table(layout, formula)
        stats.hold(table.size)
        shared_var_mask = 0
        for w in adj[b]:
            if w == parent[b]:
                continue
            child = tables.pop(w)
            var_proj, clause_proj, discharged = _projection(layouts[w], pos, n)
            child_states = np.flatnonzero(child & discharged).astype(np.int64)
            shared_var_mask = 0
            for v in layouts[w]:
                if v in pos and v <= n:
                    shared_var_mask |= 1 << pos[v]
            out = np.zeros(table.size, dtype=bool)
            stats.hold(out.size)
            stats.work_units += _kernels.dp_join(np.flatnonzero(table).astype(np.int64), child_states,
                                                 shared_var_mask, var_proj, clause_proj, out)
            stats.release(table.size + child.size)
            table = out
        tables[b] = table
    final = tables[root]
    clause_mask = 0
    for t, v in enumerate(layouts[root]):
        if v > n:
            clause_mask |= 1 << t
    live = np.flatnonzero(final)
    ok = bool(np.any((live & clause_mask) == clause_mask))
    stats.release(final.size)
    stats.wall_time = time.perf_counter() - t0
    return SolveResult(Verdict.of(ok), stats)
