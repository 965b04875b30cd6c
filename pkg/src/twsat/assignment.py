"""Assignments over splitting-node bags and the consistency relation.

An assignment gives one bit to every variable and clause vertex of the
scope, the union of the bags of a view's splitting nodes.  A clause bit of 1
is an obligation: some variable inside the view must satisfy the clause.
Vertices use the incidence numbering of :mod:`twsat.decomp`, so within a
bag "variables first, then clauses, each ascending" is plain sorted order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .decomp import IncidenceNode
from .formula import CnfFormula
from .splitting import SplitResult, SubtreeView


class ConsistencyError(ValueError):
    pass


def bag_layout(bag, num_vars: int) -> list[IncidenceNode]:
    return [IncidenceNode.from_vertex(v, num_vars) for v in sorted(bag)]


def scope_of(splitting, bags: Mapping[int, frozenset[int]]) -> frozenset[int]:
    out: set[int] = set()
    for s in splitting:
        out |= bags[s]
    return frozenset(out)


def view_vertices(view: SubtreeView, bags) -> frozenset[int]:
    return scope_of(view.nodes, bags)


@dataclass(frozen=True)
class Assignment:
    """Bits over a scope; ``bits`` maps vertex -> 0/1 and its keys are the scope."""
    bits: Mapping[int, int]

    @property
    def scope(self) -> frozenset[int]:
        return frozenset(self.bits)

    def __getitem__(self, v: int) -> int:
        return self.bits[v]

    def __len__(self):
        return len(self.bits)


def empty_assignment() -> Assignment:
    return Assignment({})


def effective_parts(num_parts: int) -> int:
    """Base of the counting bounds: a leaf split still offers binary variable choices."""
    return max(2, num_parts)


@dataclass
class SplitFrame:
    """Scope bookkeeping for one split of one view."""
    split: SplitResult
    parent_scope: frozenset[int]
    child_scopes: tuple[frozenset[int], ...]
    split_bag: tuple[int, ...]
    num_vars: int

    @classmethod
    def build(cls, view: SubtreeView, split: SplitResult, bags, num_vars: int) -> "SplitFrame":
        parent_scope = scope_of(view.splitting, bags)
        child_scopes = tuple(scope_of(part.splitting, bags) for part in split.parts)
        return cls(split, parent_scope, child_scopes, tuple(sorted(bags[split.node])), num_vars)

    @property
    def num_parts(self) -> int:
        return len(self.child_scopes)

    @property
    def d(self) -> int:
        return effective_parts(self.num_parts)

    def is_var(self, v: int) -> bool:
        return v <= self.num_vars

    def owner(self, v: int) -> int:
        """Index of the single part whose scope holds a parent vertex outside the split bag."""
        for i, sc in enumerate(self.child_scopes):
            if v in sc:
                return i
        raise ConsistencyError(f"vertex {v} is in no part scope")


def enumerate_consistent(parent: Assignment, frame: SplitFrame) -> Iterator[tuple[Assignment, ...]]:
    """All tuples of part assignments consistent with ``parent``."""
    if parent.scope != frame.parent_scope:
        raise ConsistencyError("parent assignment scope does not match the view")
    k = frame.num_parts
    base: list[dict[int, int]] = [dict() for _ in range(k)]
    xp = set(frame.split_bag)
    for v, bit in parent.bits.items():
        if v not in xp:
            base[frame.owner(v)][v] = bit
    options: list[list[tuple[int, tuple[int, ...]]]] = []
    for v in frame.split_bag:
        options.append([(v, bits) for bits in _split_bag_options(v, parent.bits.get(v), frame.is_var(v), k)])
    for combo in itertools.product(*options):
        out = [dict(b) for b in base]
        for v, bits in combo:
            for i in range(k):
                out[i][v] = bits[i]
        yield tuple(Assignment(b) for b in out)


def _split_bag_options(v, parent_bit, is_var: bool, k: int) -> list[tuple[int, ...]]:
    if is_var:
        vals = (parent_bit,) if parent_bit is not None else (0, 1)
        return [(x,) * k for x in vals]
    if parent_bit == 0:
        return [(0,) * k]
    return [tuple(int(i == j) for i in range(k)) for j in range(k)]


def count_consistent(parent: Assignment, frame: SplitFrame) -> int:
    total = 1
    for v in frame.split_bag:
        total *= len(_split_bag_options(v, parent.bits.get(v), frame.is_var(v), frame.num_parts))
    return total


def consistent_bound(frame: SplitFrame) -> int:
    return frame.d ** len(frame.split_bag)


def base_satisfying_check(view_vars: frozenset[int], R: Assignment, formula: CnfFormula) -> bool:
    """Every clause carrying bit 1 is satisfied by a variable inside the view."""
    n = formula.num_vars
    bits = R.bits
    for v, bit in bits.items():
        if v > n and bit:
            for lit in formula.clauses[v - n - 1]:
                x = abs(lit)
                if x in view_vars and bits.get(x) == (1 if lit > 0 else 0):
                    break
            else:
                return False
    return True


def satisfying(view: SubtreeView, R: Assignment, formula: CnfFormula, bags) -> bool:
    """Definition-level predicate by enumerating the free variables of the view.

    Clauses carrying bit 1 in R and clauses of the view outside the splitting
    bags must all be satisfied by variables of the view.
    """
    n = formula.num_vars
    everything = view_vertices(view, bags)
    vv = sorted(x for x in everything if x <= n)
    free = [x for x in vv if x not in R.bits]
    duties = [formula.clauses[v - n - 1] for v, b in R.bits.items() if v > n and b]
    duties += [formula.clauses[v - n - 1] for v in everything if v > n and v not in R.bits]
    inside = set(vv)
    for vals in itertools.product((0, 1), repeat=len(free)):
        total = {x: b for x, b in R.bits.items() if x <= n}
        total.update(zip(free, vals))
        if all(any(abs(l) in inside and total[abs(l)] == (l > 0) for l in cl) for cl in duties):
            return True
    return False


# ---------------------------------------------------------------------------
# epsilon groups

def fixed_quota(k: int, epsilon: float) -> int:
    return math.ceil((1 - epsilon) * k - 1e-9)


def fixed_prefix(bag, epsilon: float) -> tuple[int, ...]:
    layout = sorted(bag)
    return tuple(layout[:fixed_quota(len(layout), epsilon)])


def fixed_vertices(splitting, bags, epsilon: float) -> frozenset[int]:
    """Vertices lying in the fixed prefix of every splitting bag that holds them."""
    prefix = {s: frozenset(fixed_prefix(bags[s], epsilon)) for s in splitting}
    out = set()
    for v in scope_of(splitting, bags):
        if all(v in prefix[s] for s in splitting if v in bags[s]):
            out.add(v)
    return frozenset(out)


@dataclass(frozen=True)
class AssignmentGroup:
    scope: tuple[int, ...]
    fixed: Mapping[int, int]
    free: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        scope = tuple(sorted(self.scope))
        object.__setattr__(self, "scope", scope)
        if not set(self.fixed) <= set(scope):
            raise ConsistencyError("fixed vertices outside the scope")
        free = tuple(v for v in scope if v not in self.fixed)
        if self.free is not None and tuple(self.free) != free:
            raise ConsistencyError("free vertices do not complement the fixed ones")
        object.__setattr__(self, "free", free)

    @classmethod
    def unchecked(cls, scope: tuple[int, ...], fixed: dict[int, int], free: tuple[int, ...]) -> "AssignmentGroup":
        """Build from already sorted, complementary parts (hot path)."""
        g = object.__new__(cls)
        object.__setattr__(g, "scope", scope)
        object.__setattr__(g, "fixed", fixed)
        object.__setattr__(g, "free", free)
        return g

    @property
    def size(self) -> int:
        return 1 << len(self.free)

    def position(self) -> dict[int, int]:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {v: t for t, v in enumerate(self.free)}
            object.__setattr__(self, "_pos", pos)
        return pos


def trivial_group() -> AssignmentGroup:
    return AssignmentGroup((), {})


def group_size(group: AssignmentGroup) -> int:
    return group.size


def group_member(group: AssignmentGroup, j: int) -> Assignment:
    """The ``j``-th member (1-based): bit t of ``j - 1`` is the t-th free vertex."""
    if not 1 <= j <= group.size:
        raise IndexError(f"member {j} out of range 1..{group.size}")
    bits = dict(group.fixed)
    m = j - 1
    for t, v in enumerate(group.free):
        bits[v] = (m >> t) & 1
    return Assignment(bits)


def member_index(group: AssignmentGroup, R: Assignment) -> int | None:
    """Inverse of :func:`group_member`; ``None`` when R is not in the group."""
    if R.scope != frozenset(group.scope):
        return None
    for v, b in group.fixed.items():
        if R.bits[v] != b:
            return None
    return 1 + sum(R.bits[v] << t for t, v in enumerate(group.free))


@dataclass
class GroupFrame:
    """Fixed/free structure of one split under a given epsilon."""
    frame: SplitFrame
    epsilon: float
    parent_fixed: frozenset[int]
    child_fixed: tuple[frozenset[int], ...]
    prefix: tuple[int, ...]

    def __post_init__(self):
        xp = set(self.frame.split_bag)
        k = self.frame.num_parts
        self.child_scope = tuple(tuple(sorted(sc)) for sc in self.frame.child_scopes)
        self.child_free = tuple(tuple(v for v in self.child_scope[i] if v not in self.child_fixed[i])
                                for i in range(k))
        self.child_inherit = tuple(tuple(sorted(v for v in self.child_fixed[i] if v not in xp))
                                   for i in range(k))
        self.holders = tuple((v, tuple(i for i in range(k) if v in self.child_fixed[i])) for v in self.prefix)

    @classmethod
    def build(cls, view: SubtreeView, split: SplitResult, bags, num_vars: int, epsilon: float) -> "GroupFrame":
        frame = SplitFrame.build(view, split, bags, num_vars)
        return cls(frame, epsilon,
                   fixed_vertices(view.splitting, bags, epsilon),
                   tuple(fixed_vertices(part.splitting, bags, epsilon) for part in split.parts),
                   fixed_prefix(bags[split.node], epsilon))

    def parent_group(self, fixed_values: Mapping[int, int]) -> AssignmentGroup:
        return AssignmentGroup(tuple(self.frame.parent_scope), dict(fixed_values))

    def fixing_options(self, parent: AssignmentGroup) -> list[tuple[int, list[tuple]]]:
        """Per prefix vertex fixed in some part: the list of per-part value tuples.

        Entries of a value tuple are ``None`` for parts where the vertex is free.
        """
        k = self.frame.num_parts
        pfixed = parent.fixed
        parent_scope = self.frame.parent_scope
        out = []
        for v, holders in self.holders:
            if not holders:
                continue
            pbit = pfixed.get(v)

            def spread(pick):
                return tuple(pick(i) if i in holders else None for i in range(k))

            if self.frame.is_var(v):
                vals = [pbit] if pbit is not None else [0, 1]
                opts = [spread(lambda i, x=x: x) for x in vals]
            elif pbit == 0:
                opts = [spread(lambda i: 0)]
            elif pbit == 1 or v not in parent_scope:
                opts = [spread(lambda i, j=j: int(i == j)) for j in holders]
            else:
                opts = [spread(lambda i: 0)]
                opts += [spread(lambda i, j=j: int(i == j)) for j in holders]
            out.append((v, opts))
        return out

    def fixings(self, parent: AssignmentGroup, options=None) -> Iterator[tuple[dict[int, int], ...]]:
        """Every fixing as one {vertex: bit} dict per part."""
        k = self.frame.num_parts
        opts = self.fixing_options(parent) if options is None else options
        verts = [v for v, _ in opts]
        for combo in itertools.product(*(o for _, o in opts)):
            per_part = [dict() for _ in range(k)]
            for v, vals in zip(verts, combo):
                for i, b in enumerate(vals):
                    if b is not None:
                        per_part[i][v] = b
            yield tuple(per_part)

    def fixing_count(self, parent: AssignmentGroup, options=None) -> int:
        opts = self.fixing_options(parent) if options is None else options
        return math.prod(len(o) for _, o in opts)

    def fixing_bound(self) -> int:
        return self.frame.d ** len(self.prefix)

    def child_groups(self, parent: AssignmentGroup, fixing) -> tuple[AssignmentGroup, ...]:
        """Unvalidated :func:`derive_child_groups` for fixings produced by :meth:`fixings`."""
        pf = parent.fixed
        out = []
        for i in range(self.frame.num_parts):
            fixed = {v: pf[v] for v in self.child_inherit[i]}
            fixed.update(fixing[i])
            out.append(AssignmentGroup.unchecked(self.child_scope[i], fixed, self.child_free[i]))
        return tuple(out)


def derive_child_groups(parent: AssignmentGroup, gframe: GroupFrame,
                        fixing: Sequence[Mapping[int, int]]) -> tuple[AssignmentGroup, ...]:
    frame = gframe.frame
    xp = set(frame.split_bag)
    out = []
    for i, scope in enumerate(frame.child_scopes):
        fixed = {}
        for v in gframe.child_fixed[i]:
            if v in xp:
                if v not in fixing[i]:
                    raise ConsistencyError(f"fixing leaves vertex {v} of part {i} unset")
                b = fixing[i][v]
                pb = parent.fixed.get(v)
                if pb is not None and (frame.is_var(v) or pb == 0) and b != pb:
                    raise ConsistencyError(f"fixing contradicts the parent on vertex {v}")
                fixed[v] = b
            else:
                fixed[v] = parent.fixed[v]
        out.append(AssignmentGroup(tuple(scope), fixed))
    for v in xp:
        if frame.is_var(v):
            continue
        pb = parent.fixed.get(v)
        ones = sum(fixing[i].get(v, 0) for i in range(frame.num_parts))
        if (pb == 0 and ones) or ones > 1:
            raise ConsistencyError(f"fixing breaks the clause rule on vertex {v}")
    return tuple(out)
