"""Split plans.

A splitter's choice depends only on the view (its nodes and splitting
nodes), so the whole recursion tree of views can be computed once per
decomposition and splitter and then replayed by every engine run.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..assignment import GroupFrame, SplitFrame, fixed_vertices, scope_of, view_vertices
from ..decomp import TreeDecomposition
from ..splitting import SplitError, SubtreeView, split_at
from .stats import TypeViolation


@dataclass
class PlanNode:
    view: SubtreeView
    depth: int
    node: int | None = None
    parts: tuple["PlanNode", ...] = ()
    frame: SplitFrame | None = None
    view_vars: frozenset[int] = frozenset()
    _groups: dict = field(default_factory=dict, repr=False)

    @property
    def is_base(self) -> bool:
        return self.node is None

    @property
    def kind(self) -> int:
        return len(self.view.splitting)

    def group_frame(self, bags, num_vars: int, epsilon: float) -> GroupFrame:
        gf = self._groups.get(epsilon)
        if gf is None:
            gf = GroupFrame.build(self.view, self.frame.split, bags, num_vars, epsilon)
            self._groups[epsilon] = gf
        return gf


@dataclass
class SplitPlan:
    root: PlanNode
    decomp: TreeDecomposition
    num_vars: int
    depth: int
    max_type: int
    size: int


def build_plan(decomp: TreeDecomposition, splitter: Callable[[SubtreeView], int], num_vars: int,
               c: int | None = None) -> SplitPlan:
    bags = decomp.bags
    stats = {"depth": 0, "type": 0, "size": 0}

    def grow(view: SubtreeView, depth: int) -> PlanNode:
        stats["size"] += 1
        stats["type"] = max(stats["type"], len(view.splitting))
        if c is not None and len(view.splitting) > c:
            raise TypeViolation(f"view with {len(view.splitting)} splitting nodes exceeds c={c}")
        vv = frozenset(v for v in view_vertices(view, bags) if v <= num_vars)
        if view.is_base:
            stats["depth"] = max(stats["depth"], depth)
            return PlanNode(view, depth, view_vars=vv)
        p = splitter(view)
        result = split_at(view, p)
        if len(result.parts) == 1 and result.parts[0] == view:
            raise SplitError(f"splitter made no progress at node {p}")
        node = PlanNode(view, depth, p, view_vars=vv)
        node.frame = SplitFrame.build(view, result, bags, num_vars)
        node.parts = tuple(grow(part, depth + 1) for part in result.parts)
        return node

    root = grow(SubtreeView.whole(decomp.adjacency), 0)
    return SplitPlan(root, decomp, num_vars, stats["depth"], stats["type"], stats["size"])


def hybrid_peak_bound(plan: SplitPlan, epsilon: float) -> int:
    """Upper bound on the hybrid solver's ``peak_entries`` for any run over ``plan``.

    Which vertices of a group are fixed depends only on the view and epsilon,
    never on bit values, so the entries a frame holds are known in advance:
    its fixed bits, its own flag array, and the flag arrays returned by the
    parts already solved for the current fixing.
    """
    bags = plan.decomp.bags

    def shape(view: SubtreeView) -> tuple[int, int]:
        scope = scope_of(view.splitting, bags)
        fixed = len(fixed_vertices(view.splitting, bags, epsilon))
        return fixed, 1 << (len(scope) - fixed)

    def bound(node: PlanNode) -> tuple[int, int]:
        fixed, size = shape(node.view)
        if node.is_base:
            return fixed + size, size
        inner = 0
        done = 0
        for part in node.parts:
            peak, table = bound(part)
            inner = max(inner, done + peak)
            done += table
        return fixed + size + inner, size

    return bound(plan.root)[0]


def recursive_peak_bound(plan: SplitPlan) -> int:
    """Upper bound on the recursive solver's ``peak_entries``: the heaviest root-to-leaf chain of scopes."""
    bags = plan.decomp.bags

    def bound(node: PlanNode) -> int:
        own = len(scope_of(node.view.splitting, bags))
        return own + max((bound(part) for part in node.parts), default=0)

    return bound(plan.root)
