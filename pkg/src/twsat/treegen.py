"""Tree families used as splitting-depth benchmarks.

Trees are adjacency dicts over node ids ``1..N`` with sorted neighbour lists.
"""
from __future__ import annotations

import numpy as np

from .decomp import TreeDecomposition


class _Builder:
    def __init__(self):
        self.adj: dict[int, list[int]] = {}

    def node(self) -> int:
        v = len(self.adj) + 1
        self.adj[v] = []
        return v

    def link(self, a: int, b: int):
        self.adj[a].append(b)
        self.adj[b].append(a)

    def chain(self, k: int) -> list[int]:
        nodes = [self.node() for _ in range(k)]
        for a, b in zip(nodes, nodes[1:]):
            self.link(a, b)
        return nodes

    def done(self) -> dict[int, list[int]]:
        for nbrs in self.adj.values():
            nbrs.sort()
        return self.adj


def _fib(b: _Builder, h: int) -> int:
    if h == 1:
        return b.node()
    if h == 2:
        return b.chain(2)[0]
    root = b.node()
    b.link(root, _fib(b, h - 2))
    b.link(root, _fib(b, h - 1))
    return root


def gen_fib(h: int) -> tuple[dict[int, list[int]], int]:
    """Fibonacci tree of height ``h``; returns (adjacency, root)."""
    if h < 1:
        raise ValueError("h must be at least 1")
    b = _Builder()
    root = _fib(b, h)
    return b.done(), root


def gen_fib_extended(h: int) -> tuple[dict[int, list[int]], int]:
    """Fibonacci tree plus one extra node ``r`` hanging off its root; returns (adjacency, r)."""
    if h < 1:
        raise ValueError("h must be at least 1")
    b = _Builder()
    root = _fib(b, h)
    r = b.node()
    b.link(r, root)
    return b.done(), r


def fib_size(h: int) -> int:
    a, b = 1, 2
    if h == 1:
        return 1
    for _ in range(h - 2):
        a, b = b, 1 + a + b
    return b


def _gfib(b: _Builder, c: int, h: int) -> int:
    if h <= c:
        return b.chain(2 ** c)[0]
    spine = b.chain(c)
    for i, u in enumerate(spine, 1):
        b.link(u, _gfib(b, c, h - i))
    return spine[0]


def gen_gfib(c: int, h: int) -> tuple[dict[int, list[int]], int]:
    """Generalised Fibonacci tree; returns (adjacency, root)."""
    if c < 2 or h < 1:
        raise ValueError("need c >= 2 and h >= 1")
    b = _Builder()
    root = _gfib(b, c, h)
    return b.done(), root


def gfib_size(c: int, h: int) -> int:
    if h <= c:
        return 2 ** c
    return c + sum(gfib_size(c, h - i) for i in range(1, c + 1))


def gen_G(c: int, h: int, w: int) -> tuple[dict[int, list[int]], frozenset[int]]:
    """Chain of ``w`` nodes carrying ``c - w + 1`` marked leaves on its first node
    and a generalised Fibonacci tree of height ``h - c + w - i`` on node ``i``."""
    if c < 2 or h <= c or not 1 <= w <= c:
        raise ValueError("need c >= 2, h > c and 1 <= w <= c")
    b = _Builder()
    spine = b.chain(w)
    marked = []
    for _ in range(c - w + 1):
        s = b.node()
        b.link(spine[0], s)
        marked.append(s)
    for i, u in enumerate(spine, 1):
        b.link(u, _gfib(b, c, h - c + w - i))
    return b.done(), frozenset(marked)


def random_tree(n: int, seed: int, max_degree: int = 3) -> dict[int, list[int]]:
    """Random tree on ``n`` nodes with bounded degree (random attachment)."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    adj: dict[int, list[int]] = {1: []}
    open_nodes = [1]
    for v in range(2, n + 1):
        k = int(rng.integers(len(open_nodes)))
        u = open_nodes[k]
        adj[u].append(v)
        adj[v] = [u]
        if len(adj[u]) >= max_degree:
            open_nodes[k] = open_nodes[-1]
            open_nodes.pop()
        open_nodes.append(v)
    for nbrs in adj.values():
        nbrs.sort()
    return adj


def to_csr(adj: dict[int, list[int]]) -> tuple[np.ndarray, np.ndarray]:
    """Adjacency over ids 1..N as CSR arrays (row 0 unused)."""
    n = max(adj)
    indptr = np.zeros(n + 2, dtype=np.int64)
    for v, nbrs in adj.items():
        indptr[v + 1] = len(nbrs)
    np.cumsum(indptr, out=indptr)
    indices = np.empty(indptr[-1], dtype=np.int64)
    for v, nbrs in adj.items():
        indices[indptr[v]:indptr[v + 1]] = nbrs
    return indptr, indices


def as_decomposition(adj: dict[int, list[int]]) -> TreeDecomposition:
    """Tree with synthetic empty bags, for emitting tree-only benchmarks."""
    edges = tuple((a, b) for a, nbrs in adj.items() for b in nbrs if a < b)
    return TreeDecomposition({v: frozenset() for v in adj}, edges, 0)
