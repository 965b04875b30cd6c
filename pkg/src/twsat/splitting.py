"""Splitting operations on decomposition trees.

A :class:`SubtreeView` is a connected set of tree nodes together with the
nodes at which earlier splits happened.  Splitting a view at ``p`` yields one
part per component of ``nodes - {p}``, each part re-joined with ``p``; part
sizes always count ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

INF = math.inf

Adjacency = Mapping[int, Sequence[int]]


class SplitError(ValueError):
    pass


class SubtreeView:
    __slots__ = ("nodes", "splitting", "adj", "_key")

    def __init__(self, nodes, splitting=(), adj: Adjacency | None = None):
        self.nodes = frozenset(nodes)
        self.splitting = frozenset(splitting)
        self.adj = adj
        self._key = None
        if not self.splitting <= self.nodes:
            raise SplitError("splitting nodes must belong to the view")

    @classmethod
    def whole(cls, adj: Adjacency, splitting=()) -> "SubtreeView":
        return cls(adj.keys(), splitting, adj)

    @property
    def key(self):
        if self._key is None:
            self._key = (self.nodes, self.splitting)
        return self._key

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"SubtreeView(nodes={sorted(self.nodes)}, S={sorted(self.splitting)})"

    def __eq__(self, other):
        return isinstance(other, SubtreeView) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def neighbours(self, v: int) -> list[int]:
        nodes = self.nodes
        return [w for w in self.adj[v] if w in nodes]

    def degree(self, v: int) -> int:
        nodes = self.nodes
        return sum(1 for w in self.adj[v] if w in nodes)

    def leaves(self) -> list[int]:
        if len(self.nodes) == 1:
            return list(self.nodes)
        return sorted(v for v in self.nodes if self.degree(v) == 1)

    @property
    def is_base(self) -> bool:
        return len(self.splitting) == len(self.nodes)


@dataclass(frozen=True)
class SplitResult:
    node: int
    parts: tuple[SubtreeView, ...]

    @property
    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]


def classify_type(view: SubtreeView) -> int:
    return len(view.splitting)


def split_at(view: SubtreeView, p: int) -> SplitResult:
    if p not in view.nodes:
        raise SplitError(f"node {p} is not in the view")
    nodes = view.nodes
    adj = view.adj
    parts = []
    seen = {p}
    for start in adj[p]:
        if start not in nodes or start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in nodes and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comp.append(p)
        part_nodes = frozenset(comp)
        parts.append(SubtreeView(part_nodes, (view.splitting & part_nodes) | {p}, adj))
    if not parts:
        parts.append(SubtreeView(nodes, view.splitting | {p}, adj))
    return SplitResult(p, tuple(parts))


def rooted(view: SubtreeView, root: int) -> tuple[list[int], dict[int, int]]:
    """BFS order from ``root`` and parent pointers (root maps to itself)."""
    nodes = view.nodes
    adj = view.adj
    parent = {root: root}
    order = [root]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for w in adj[u]:
            if w in nodes and w not in parent:
                parent[w] = u
                order.append(w)
    return order, parent


def subtree_sizes(order: list[int], parent: dict[int, int]) -> dict[int, int]:
    size = dict.fromkeys(order, 1)
    for u in reversed(order[1:]):
        size[parent[u]] += size[u]
    return size


def _ceil(x: float) -> int:
    return math.ceil(x - 1e-9)


def find_alpha_splitting_node(view: SubtreeView, s: int, alpha: float) -> int:
    """Walk down the heaviest children from leaf ``s``.

    ``a`` tracks the size of the part containing ``s`` when splitting at the
    current node; the walk stops at the last node whose ``a`` fits in
    ``ceil(alpha * N)``.  The leaf ``s`` itself is never returned when the
    view has a second node, since splitting there changes nothing for ``s``.
    """
    if not 0 <= alpha < 1:
        raise SplitError("alpha must lie in [0, 1)")
    if s not in view.nodes:
        raise SplitError(f"{s} is not in the view")
    n = len(view.nodes)
    if n == 1:
        return s
    if view.degree(s) != 1:
        raise SplitError(f"{s} is not a leaf of the view")
    order, parent = rooted(view, s)
    size = subtree_sizes(order, parent)
    children: dict[int, list[int]] = {u: [] for u in order}
    for u in order[1:]:
        children[parent[u]].append(u)
    limit = _ceil(alpha * n)
    v = children[s][0]
    while True:
        kids = children[v]
        if not kids:
            return v
        nxt = min(kids, key=lambda w: (-size[w], w))
        if n - size[nxt] + 1 > limit:
            return v
        v = nxt


def half_start_leaf(view: SubtreeView) -> int:
    """Leaf used to start a 1/2-walk: lowest-id splitting leaf, else lowest-id leaf."""
    leaves = view.leaves()
    marked = [v for v in leaves if v in view.splitting]
    return (marked or leaves)[0]


def find_half_splitting_node(view: SubtreeView, start: int | None = None) -> int:
    if start is None:
        start = half_start_leaf(view)
    return find_alpha_splitting_node(view, start, 0.5)


def half_bound(n: int) -> int:
    """Largest part size a 1/2-splitting node may leave, counting the split node."""
    return n // 2 + 1


def skeleton(view: SubtreeView) -> frozenset[int]:
    """Nodes lying on a path between two splitting nodes (empty if fewer than 2)."""
    S = view.splitting
    if len(S) < 2:
        return frozenset()
    root = min(S)
    _, parent = rooted(view, root)
    marked = {root}
    for s in S:
        u = s
        while u not in marked:
            marked.add(u)
            u = parent[u]
    return frozenset(marked)


def on_splitting_path(view: SubtreeView, q: int) -> bool:
    return q in skeleton(view)


def _depths(order: list[int], parent: dict[int, int]) -> dict[int, int]:
    depth = {order[0]: 0}
    for u in order[1:]:
        depth[u] = depth[parent[u]] + 1
    return depth


def lca_with_splitting_nodes(view: SubtreeView, root: int, q: int, targets) -> int:
    """Deepest common ancestor of ``q`` and every target, rooted at ``root``."""
    order, parent = rooted(view, root)
    depth = _depths(order, parent)

    def lca(a, b):
        while depth[a] > depth[b]:
            a = parent[a]
        while depth[b] > depth[a]:
            b = parent[b]
        while a != b:
            a, b = parent[a], parent[b]
        return a

    acc = q
    for t in sorted(targets):
        acc = lca(acc, t)
    return acc


def skeleton_attach(view: SubtreeView, root: int, q: int) -> int:
    """First node on the way from ``q`` up to ``root`` that lies on the skeleton.

    Equals the deepest of the pairwise ancestors lca(q, s) over splitting
    nodes s other than the root.
    """
    skel = skeleton(view)
    if not skel:
        raise SplitError("view has fewer than two splitting nodes")
    _, parent = rooted(view, root)
    u = q
    while u not in skel:
        u = parent[u]
    return u


Splitter = Callable[[SubtreeView], int]


def sd_c(splitter: Splitter, view: SubtreeView, c: int) -> float:
    """c-splitting depth of a deterministic splitter; ``INF`` once a view exceeds c."""
    if len(view.splitting) > c:
        return INF
    if view.is_base:
        return 0
    result = split_at(view, splitter(view))
    return 1 + max(sd_c(splitter, part, c) for part in result.parts)


def splitting_depth(trace) -> int:
    """Depth of a nested run trace ``(node, [child traces])``; a leaf trace is ``None``."""
    if trace is None:
        return 0
    _, children = trace
    return 1 + max((splitting_depth(ch) for ch in children), default=0)


def _candidates(view: SubtreeView, c: int) -> list[int]:
    """Split nodes that make progress and do not create a part with more than c marks."""
    S = view.splitting
    n = len(view.nodes)
    if len(S) >= c:
        allowed = skeleton(view) if len(S) >= 2 else frozenset()
        if len(S) == c:
            pool = [v for v in allowed if v not in S]
        else:
            pool = []
    else:
        pool = [v for v in view.nodes if v not in S]
    out = list(pool)
    # internal splitting nodes also make progress; leaves among S never do
    out += [v for v in S if n > 1 and view.degree(v) > 1]
    # prefer balanced splits first: ordering only affects speed
    if n > 2:
        order, parent = rooted(view, min(view.nodes))
        size = subtree_sizes(order, parent)
        def worst(v):
            parts = [size[w] for w in view.adj[v] if w in view.nodes and parent.get(w) == v]
            parts.append(n - size[v])
            return (max(parts), v)
        out.sort(key=worst)
    else:
        out.sort()
    return out


class MsdSearch:
    """Exact minimum c-splitting depth by iterative deepening.

    With ``memo=False`` the search stores nothing beyond the recursion stack.
    With ``memo=True`` it caches, per view, its legal moves, the largest
    budget known to fail and the exact value once found.
    """

    def __init__(self, c: int, memo: bool = False):
        if c < 1:
            raise SplitError("c must be positive")
        self.c = c
        self.memo = memo
        self._exact: dict = {}
        self._fails: dict = {}
        self._moves: dict = {}
        self._cap: list[int] = []
        self._max_degree = 3
        self.nodes_expanded = 0

    def moves(self, view: SubtreeView) -> list[tuple[int, tuple[SubtreeView, ...]]]:
        """Legal splits of the view, largest part first within each move."""
        if self.memo:
            cached = self._moves.get(view.key)
            if cached is not None:
                return cached
        out = []
        for p in _candidates(view, self.c):
            parts = split_at(view, p).parts
            if any(len(part.splitting) > self.c for part in parts):
                continue
            out.append((p, tuple(sorted(parts, key=len, reverse=True))))
        if self.memo:
            self._moves[view.key] = out
        return out

    def cap(self, h: int) -> int:
        """Upper bound on the size of a view finishing within ``h`` splits."""
        while len(self._cap) <= h:
            prev = self._cap[-1] if self._cap else None
            self._cap.append(self.c if prev is None else 1 + self._max_degree * (prev - 1))
        return self._cap[h]

    def fits(self, view: SubtreeView, h: int) -> bool:
        """Is MSD_c(view) <= h?"""
        if len(view.splitting) > self.c:
            return False
        if view.is_base:
            return True
        if h <= 0 or len(view.nodes) > self.cap(h):
            return False
        if self.memo:
            key = view.key
            exact = self._exact.get(key)
            if exact is not None:
                return exact <= h
            if self._fails.get(key, -1) >= h:
                return False
        self.nodes_expanded += 1
        ok = any(all(self.fits(part, h - 1) for part in parts) for _, parts in self.moves(view))
        if self.memo and not ok:
            key = view.key
            if self._fails.get(key, -1) < h:
                self._fails[key] = h
        return ok

    def value(self, view: SubtreeView, upper: int | None = None) -> float:
        if len(view.splitting) > self.c:
            return INF
        if view.is_base:
            return 0
        if view.adj is not None:
            self._max_degree = max(self._max_degree, max(len(view.adj[v]) for v in view.nodes))
        if self.memo:
            exact = self._exact.get(view.key)
            if exact is not None:
                return exact
        h = 1
        while len(view.nodes) > self.cap(h):
            h += 1
        if self.memo:
            h = max(h, self._fails.get(view.key, 0) + 1)
        limit = upper if upper is not None else 4 * len(view.nodes) + 4
        while h <= limit:
            if self.fits(view, h):
                if self.memo:
                    self._exact[view.key] = h
                return h
            h += 1
        return INF

    def best_move(self, view: SubtreeView) -> int:
        """Lowest-id node achieving the minimum depth."""
        target = self.value(view)
        if target == INF or view.is_base:
            raise SplitError("no legal move")
        for p, parts in sorted(self.moves(view), key=lambda mv: mv[0]):
            if all(self.fits(part, target - 1) for part in parts):
                return p
        raise SplitError("internal error: no move reaches the minimum")


def msd(view: SubtreeView, c: int, memo: bool = False) -> float:
    return MsdSearch(c, memo).value(view)
