"""Deterministic choices of the next splitting node for a view."""
from __future__ import annotations

import math
from typing import Callable

from ..params import compute_schedule
from ..splitting import (MsdSearch, SplitError, SubtreeView, find_alpha_splitting_node,
                         find_half_splitting_node, rooted, skeleton, skeleton_attach)
from .stats import TypeViolation

GOLDEN_ALPHA = (3 - math.sqrt(5)) / 2

SPLITTERS = ("path", "h2", "hc", "optimal")


def splitter_half(view: SubtreeView) -> int:
    return find_half_splitting_node(view)


def splitter_path(view: SubtreeView) -> int:
    """Median of the segment, counted from its lower-id end."""
    if any(view.degree(v) > 2 for v in view.nodes):
        raise SplitError("path splitter needs a path segment")
    n = len(view.nodes)
    if n == 1:
        return next(iter(view.nodes))
    ends = view.leaves()
    order, _ = rooted(view, ends[0])
    if n == 2:
        free = [v for v in order if v not in view.splitting]
        return free[0] if free else order[0]
    return order[(n - 1) // 2]


def splitter_h2(view: SubtreeView) -> int:
    S = sorted(view.splitting)
    if len(S) > 2:
        raise TypeViolation(f"view carries {len(S)} splitting nodes")
    if not S:
        return find_half_splitting_node(view)
    if len(S) == 1:
        return find_alpha_splitting_node(view, S[0], GOLDEN_ALPHA)
    m = find_half_splitting_node(view)
    if m in skeleton(view):
        return m
    return skeleton_attach(view, S[0], m)


def make_hc(c: int) -> Callable[[SubtreeView], int]:
    sched = compute_schedule(c)

    def splitter_hc(view: SubtreeView) -> int:
        i = len(view.splitting)
        if i > c:
            raise TypeViolation(f"view carries {i} splitting nodes, limit {c}")
        if i == 0 or len(view.nodes) < 2 ** (c - i):
            return find_half_splitting_node(view)
        root = min(view.splitting)
        skel = skeleton(view)
        if i < c:
            q1 = find_alpha_splitting_node(view, root, sched.alpha(i))
            if q1 not in skel:
                return q1
        q2 = find_half_splitting_node(view)
        if q2 in skel or i < 2:
            return q2
        return skeleton_attach(view, root, q2)

    splitter_hc.c = c
    return splitter_hc


def make_optimal(c: int) -> Callable[[SubtreeView], int]:
    search = MsdSearch(c, memo=True)

    def splitter_optimal(view: SubtreeView) -> int:
        return search.best_move(view)

    splitter_optimal.search = search
    return splitter_optimal


def make_splitter(name: str, c: int | None = None) -> Callable[[SubtreeView], int]:
    if name == "half":
        return splitter_half
    if name == "path":
        return splitter_path
    if name == "h2":
        if c not in (None, 2):
            raise ValueError("splitter h2 requires c = 2")
        return splitter_h2
    if c is None:
        raise ValueError(f"splitter {name} needs c")
    if name == "hc":
        return make_hc(c)
    if name == "optimal":
        return make_optimal(c)
    raise ValueError(f"unknown splitter {name!r}")
