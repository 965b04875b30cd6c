"""Incidence graphs and tree/path decompositions over them.

Incidence vertices are numbered as in the ``.td`` files this package reads:
variable ``j`` is vertex ``j`` and clause ``i`` is vertex ``n + i``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .formula import CnfFormula, FormatError


class DecompositionError(ValueError):
    """A decomposition violates the tree-decomposition properties."""


class Kind(enum.Enum):
    VAR = "var"
    CLAUSE = "clause"


class IncidenceNode(NamedTuple):
    kind: Kind
    index: int

    def vertex(self, num_vars: int) -> int:
        return self.index if self.kind is Kind.VAR else num_vars + self.index

    @classmethod
    def from_vertex(cls, v: int, num_vars: int) -> "IncidenceNode":
        if v <= num_vars:
            return cls(Kind.VAR, v)
        return cls(Kind.CLAUSE, v - num_vars)


def build_incidence_graph(formula: CnfFormula) -> dict[int, set[int]]:
    """Adjacency over incidence vertices 1..n+m."""
    n = formula.num_vars
    adj: dict[int, set[int]] = {v: set() for v in range(1, formula.size + 1)}
    for i, clause in enumerate(formula.clauses, 1):
        c = n + i
        for lit in clause:
            adj[c].add(abs(lit))
            adj[abs(lit)].add(c)
    return adj


@dataclass(frozen=True)
class TreeDecomposition:
    bags: Mapping[int, frozenset[int]]
    edges: tuple[tuple[int, int], ...]
    num_vertices: int
    _adj: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        bags = {int(b): frozenset(int(v) for v in vs) for b, vs in sorted(self.bags.items())}
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        object.__setattr__(self, "bags", bags)
        object.__setattr__(self, "edges", edges)
        adj: dict[int, list[int]] = {b: [] for b in bags}
        for a, b in edges:
            if a not in adj or b not in adj:
                raise DecompositionError(f"edge ({a}, {b}) references an unknown bag")
            adj[a].append(b)
            adj[b].append(a)
        for nbrs in adj.values():
            nbrs.sort()
        object.__setattr__(self, "_adj", adj)

    @property
    def adjacency(self) -> dict[int, list[int]]:
        return self._adj

    @property
    def num_bags(self) -> int:
        return len(self.bags)

    @cached_property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    @cached_property
    def max_degree(self) -> int:
        return max((len(n) for n in self._adj.values()), default=0)

    @cached_property
    def is_path(self) -> bool:
        return self.max_degree <= 2 and _is_tree(self._adj)

    def degree(self, bag: int) -> int:
        return len(self._adj[bag])


def width(decomp: TreeDecomposition) -> int:
    return decomp.width


def _is_tree(adj: Mapping[int, list[int]]) -> bool:
    if not adj:
        return False
    nedges = sum(len(v) for v in adj.values()) // 2
    if nedges != len(adj) - 1:
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


@dataclass
class ValidationReport:
    ok: bool
    violation: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


def validate(decomp: TreeDecomposition, formula: CnfFormula) -> ValidationReport:
    """Check the three decomposition properties plus tree shape."""
    adj = decomp.adjacency
    if not adj:
        return ValidationReport(False, "empty decomposition")
    if not _is_tree(adj):
        return ValidationReport(False, "bag edges do not form a tree", decomp.edges)
    nv = formula.size
    if decomp.num_vertices != nv:
        return ValidationReport(False, "vertex count mismatch", (decomp.num_vertices, nv))
    for b, members in decomp.bags.items():
        for v in members:
            if not 1 <= v <= nv:
                return ValidationReport(False, "vertex out of range", (b, v))
    covered = set().union(*decomp.bags.values())
    for v in range(1, nv + 1):
        if v not in covered:
            node = IncidenceNode.from_vertex(v, formula.num_vars)
            return ValidationReport(False, "property 1: incidence node in no bag", node)
    n = formula.num_vars
    occurrences: dict[int, list[int]] = {v: [] for v in range(1, nv + 1)}
    for b, members in decomp.bags.items():
        for v in members:
            occurrences[v].append(b)
    for i, clause in enumerate(formula.clauses, 1):
        c = n + i
        cbags = set(occurrences[c])
        for x in sorted({abs(l) for l in clause}):
            if not cbags.intersection(occurrences[x]):
                witness = (IncidenceNode(Kind.VAR, x), IncidenceNode(Kind.CLAUSE, i))
                return ValidationReport(False, "property 2: incidence edge uncovered", witness)
    for v, occ in occurrences.items():
        if not _connected_in(adj, set(occ)):
            node = IncidenceNode.from_vertex(v, n)
            return ValidationReport(False, "property 3: occurrence bags disconnected", (node, sorted(occ)))
    return ValidationReport(True)


def check(decomp: TreeDecomposition, formula: CnfFormula) -> None:
    report = validate(decomp, formula)
    if not report:
        raise DecompositionError(f"{report.violation}: {report.witness}")


def _connected_in(adj: Mapping[int, list[int]], nodes: set[int]) -> bool:
    if len(nodes) <= 1:
        return True
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in nodes and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nodes)


def make_nice(decomp: TreeDecomposition) -> TreeDecomposition:
    """Bound the tree degree by 3 through bag duplication.

    A bag of degree k > 3 becomes a chain of k - 2 copies; the first and last
    copy take two of the original neighbours, inner copies take one.
    """
    if decomp.max_degree <= 3:
        return decomp
    bags = dict(decomp.bags)
    adj = decomp.adjacency
    next_id = max(bags) + 1
    edges: set[tuple[int, int]] = set()
    replaced: dict[tuple[int, int], int] = {}  # (bag, neighbour) -> copy holding that link
    for b, nbrs in adj.items():
        k = len(nbrs)
        if k <= 3:
            for w in nbrs:
                replaced[(b, w)] = b
            continue
        chain = [b]
        for _ in range(k - 3):
            bags[next_id] = bags[b]
            chain.append(next_id)
            next_id += 1
        for u, w in zip(chain, chain[1:]):
            edges.add((u, w))
        slots = [chain[0], chain[0]] + chain[1:-1] + [chain[-1], chain[-1]]
        for w, holder in zip(nbrs, slots):
            replaced[(b, w)] = holder
    for a, b in decomp.edges:
        edges.add((replaced[(a, b)], replaced[(b, a)]))
    return TreeDecomposition(bags, tuple(edges), decomp.num_vertices)


def single_bag(formula: CnfFormula) -> TreeDecomposition:
    return TreeDecomposition({1: frozenset(range(1, formula.size + 1))}, (), formula.size)


def from_members(bags: Mapping[int, Iterable[IncidenceNode]], edges: Iterable[tuple[int, int]],
                 formula: CnfFormula) -> TreeDecomposition:
    n = formula.num_vars
    return TreeDecomposition(
        {b: frozenset(node.vertex(n) for node in nodes) for b, nodes in bags.items()},
        tuple(edges), formula.size)


def parse_td(text: str | bytes) -> TreeDecomposition:
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None or len(parts) != 5 or parts[1] != "td":
                raise FormatError(f"line {lineno}: malformed solution line {line!r}")
            try:
                header = tuple(int(p) for p in parts[2:])
            except ValueError:
                raise FormatError(f"line {lineno}: malformed solution line {line!r}") from None
            continue
        if header is None:
            raise FormatError(f"line {lineno}: content before 's td' line")
        try:
            nums = [int(p) for p in parts[1:]] if parts[0] == "b" else [int(p) for p in parts]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer token in {line!r}") from None
        if parts[0] == "b":
            if not nums:
                raise FormatError(f"line {lineno}: bag line without id")
            bag_id, members = nums[0], nums[1:]
            if bag_id in bags:
                raise FormatError(f"line {lineno}: duplicate bag {bag_id}")
            for v in members:
                if not 1 <= v <= header[2]:
                    raise FormatError(f"line {lineno}: vertex {v} out of range 1..{header[2]}")
            bags[bag_id] = frozenset(members)
        else:
            if len(nums) != 2:
                raise FormatError(f"line {lineno}: malformed edge line {line!r}")
            edges.append((nums[0], nums[1]))
    if header is None:
        raise FormatError("missing 's td' line")
    num_bags, max_size, _ = header
    if len(bags) != num_bags:
        raise FormatError(f"header declares {num_bags} bags, found {len(bags)}")
    if bags and max(len(b) for b in bags.values()) != max_size:
        raise FormatError(f"header declares max bag size {max_size}, "
                          f"found {max(len(b) for b in bags.values())}")
    for a, b in edges:
        if a not in bags or b not in bags:
            raise FormatError(f"edge ({a}, {b}) references an unknown bag")
    td = TreeDecomposition(bags, tuple(edges), header[2])
    if not _is_tree(td.adjacency):
        raise FormatError("bag edges do not form a tree")
    return td


def emit_td(decomp: TreeDecomposition) -> str:
    lines = [f"s td {decomp.num_bags} {decomp.width + 1} {decomp.num_vertices}"]
    for b, members in decomp.bags.items():
        lines.append(" ".join(["b", str(b), *map(str, sorted(members))]))
    lines += [f"{a} {b}" for a, b in decomp.edges]
    return "\n".join(lines) + "\n"
