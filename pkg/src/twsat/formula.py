"""CNF formulas, DIMACS I/O and partial-assignment evaluation.

Literals are stored DIMACS style as signed non-zero integers; :class:`Literal`
is a thin view for callers that prefer named fields.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple


class FormatError(ValueError):
    """Raised on malformed DIMACS or .td input."""


class Literal(NamedTuple):
    variable: int
    positive: bool

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable


class ClauseStatus(enum.Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "unsatisfiable-under"
    UNDETERMINED = "undetermined"


def normalize_clause(lits: Iterable[int]) -> tuple[int, ...]:
    """Drop duplicate literals (first occurrence wins); reject tautologies."""
    seen: dict[int, None] = {}
    for lit in lits:
        lit = int(lit)
        if lit == 0:
            raise FormatError("literal 0 inside clause")
        if -lit in seen:
            raise FormatError(f"tautological clause: contains {abs(lit)} and -{abs(lit)}")
        seen.setdefault(lit, None)
    return tuple(seen)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise FormatError("negative variable count")
        clauses = tuple(normalize_clause(c) for c in self.clauses)
        for i, clause in enumerate(clauses, 1):
            for lit in clause:
                if abs(lit) > self.num_vars:
                    raise FormatError(f"clause {i}: literal {lit} out of range 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def size(self) -> int:
        return self.num_vars + len(self.clauses)

    def clause_vars(self, i: int) -> frozenset[int]:
        """Variables of clause ``i`` (1-based)."""
        return frozenset(abs(lit) for lit in self.clauses[i - 1])

    def literals(self, i: int) -> list[Literal]:
        return [Literal.from_int(lit) for lit in self.clauses[i - 1]]


def clause_satisfied(clause: Iterable[int], assignment: Mapping[int, bool | int]) -> ClauseStatus:
    undetermined = False
    for lit in clause:
        value = assignment.get(abs(lit))
        if value is None:
            undetermined = True
        elif bool(value) == (lit > 0):
            return ClauseStatus.SATISFIED
    return ClauseStatus.UNDETERMINED if undetermined else ClauseStatus.FALSIFIED


def evaluate(formula: CnfFormula, assignment: Mapping[int, bool | int]) -> bool:
    """True iff every clause is satisfied by a total assignment."""
    return all(clause_satisfied(c, assignment) is ClauseStatus.SATISFIED for c in formula.clauses)


def parse_dimacs(text: str | bytes) -> CnfFormula:
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise FormatError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise FormatError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                clauses.append(_checked_clause(current, header[0], len(clauses) + 1))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        raise FormatError("last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise FormatError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def _checked_clause(lits: list[int], n: int, index: int) -> tuple[int, ...]:
    for lit in lits:
        if abs(lit) > n:
            raise FormatError(f"clause {index}: literal {lit} out of range 1..{n}")
    return normalize_clause(lits)


def emit_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    lines += [" ".join(map(str, clause + (0,))) for clause in formula.clauses]
    return "\n".join(lines) + "\n"
