import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twsat.formula import (ClauseStatus, CnfFormula, FormatError, Literal, clause_satisfied, emit_dimacs,
                           evaluate, parse_dimacs)

from _instances import PHI1_DIMACS


def test_parse_smallest():
    f = parse_dimacs("p cnf 1 1\n1 0")
    assert (f.num_vars, f.num_clauses, f.clauses) == (1, 1, ((1,),))


def test_parse_two_clauses():
    f = parse_dimacs(b"c comment\np cnf 2 2\n1 2 0\n-1 0\n")
    assert f.clauses == ((1, 2), (-1,))
    assert f.size == 4


def test_parse_example_formula():
    f = parse_dimacs(PHI1_DIMACS)
    assert (f.num_vars, f.num_clauses) == (6, 7)
    assert f.clauses[0] == (1, 2, 4, 6)
    assert f.clause_vars(2) == {1, 3, 5}


def test_clauses_may_span_lines():
    f = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n0\n")
    assert f.clauses == ((1, 2, 3), (-1,))


@pytest.mark.parametrize("text", [
    "1 2 0",                      # no header
    "p cnf x 1\n1 0",             # malformed header
    "p dnf 1 1\n1 0",
    "p cnf 1 1\n2 0",             # literal out of range
    "p cnf 2 2\n1 0",             # clause count mismatch
    "p cnf 2 1\n1 -1 0",          # tautology
    "p cnf 2 1\n1 2",             # unterminated
    "p cnf 1 1\np cnf 1 1\n1 0",  # two headers
])
def test_parse_errors(text):
    with pytest.raises(FormatError):
        parse_dimacs(text)


def test_duplicates_dropped_and_duplicate_clauses_kept():
    f = parse_dimacs("p cnf 2 2\n1 1 2 0\n1 2 0\n")
    assert f.clauses == ((1, 2), (1, 2))


def test_empty_clause_is_allowed():
    f = parse_dimacs("p cnf 1 2\n0\n1 0\n")
    assert f.clauses == ((), (1,))


def test_emit_smallest():
    assert emit_dimacs(CnfFormula(1, ((1,),))) == "p cnf 1 1\n1 0\n"


def test_round_trip_example():
    f = parse_dimacs(PHI1_DIMACS)
    assert parse_dimacs(emit_dimacs(f)) == f


def test_literal_view():
    assert Literal.from_int(-3) == Literal(3, False)
    assert Literal(2, True).to_int() == 2
    with pytest.raises(ValueError):
        Literal.from_int(0)


@pytest.mark.parametrize("clause, values, expected", [
    ((1, 2), {1: 1}, ClauseStatus.SATISFIED),
    ((1, 2), {1: 0, 2: 0}, ClauseStatus.FALSIFIED),
    ((1, 2, 4, 6), {2: 0, 4: 0, 6: 0}, ClauseStatus.UNDETERMINED),
    ((-1,), {1: False}, ClauseStatus.SATISFIED),
    ((), {}, ClauseStatus.FALSIFIED),
])
def test_clause_status(clause, values, expected):
    assert clause_satisfied(clause, values) is expected


def test_evaluate():
    f = CnfFormula(2, ((1, 2), (-1,)))
    assert evaluate(f, {1: 0, 2: 1})
    assert not evaluate(f, {1: 1, 2: 1})


def test_out_of_range_literal_rejected():
    with pytest.raises(FormatError):
        CnfFormula(1, ((2,),))


clauses_st = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), max_size=4), max_size=8)))


def _clean(n, raw):
    out = []
    for c in raw:
        lits = []
        for lit in c:
            if -lit not in lits and lit not in lits:
                lits.append(lit)
        out.append(tuple(lits))
    return CnfFormula(n, tuple(out))


@settings(max_examples=200, deadline=None)
@given(clauses_st)
def test_round_trip_property(data):
    f = _clean(*data)
    assert parse_dimacs(emit_dimacs(f)) == f


@settings(max_examples=200, deadline=None)
@given(clauses_st, st.data())
def test_status_is_monotone(data, draw):
    n, raw = data
    f = _clean(n, raw)
    order = draw.draw(st.permutations(list(range(1, n + 1))))
    values = draw.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    for clause in f.clauses:
        partial = {}
        prev = clause_satisfied(clause, partial)
        for v in order:
            partial[v] = values[v - 1]
            cur = clause_satisfied(clause, partial)
            if prev is ClauseStatus.SATISFIED:
                assert cur is ClauseStatus.SATISFIED
            prev = cur
