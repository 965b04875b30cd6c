import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twsat.assignment import (Assignment, AssignmentGroup, ConsistencyError, GroupFrame, SplitFrame,
                              bag_layout, base_satisfying_check, consistent_bound, count_consistent,
                              derive_child_groups, enumerate_consistent, fixed_prefix, fixed_quota,
                              group_member, group_size, member_index, satisfying, scope_of, trivial_group)
from twsat.decomp import IncidenceNode, Kind, make_nice
from twsat.formula import CnfFormula
from twsat.oracle import GeneratorSpec, gen_bounded_width
from twsat.solvers import build_plan, make_splitter
from twsat.splitting import SubtreeView, split_at

# (x1 or x2) on the path {x1,C1} - {x1,x2,C1} - {x2,C1}; C1 is vertex 3
OR2 = CnfFormula(2, ((1, 2),))
BAGS = {1: frozenset({1, 3}), 2: frozenset({1, 2, 3}), 3: frozenset({2, 3})}
ADJ = {1: [2], 2: [1, 3], 3: [2]}


def frame(marks, p):
    view = SubtreeView(ADJ.keys(), marks, ADJ)
    return view, SplitFrame.build(view, split_at(view, p), BAGS, 2)


def tuples(parent, fr):
    return [tuple(tuple(sorted(a.bits.items())) for a in t) for t in enumerate_consistent(parent, fr)]


def test_bag_layout_orders_variables_first():
    assert bag_layout({5, 1, 3}, 3) == [IncidenceNode(Kind.VAR, 1), IncidenceNode(Kind.VAR, 3),
                                         IncidenceNode(Kind.CLAUSE, 2)]


def test_scope_is_node_union():
    assert scope_of({1, 3}, BAGS) == {1, 2, 3}


def test_fresh_split_counts():
    _, fr = frame((), 2)
    out = tuples(Assignment({}), fr)
    # x1, x2 free (2 each) and the new clause is claimed by exactly one of two parts
    assert len(out) == 8 == count_consistent(Assignment({}), fr) == consistent_bound(fr)
    for t in out:
        c_bits = [dict(part)[3] for part in t]
        assert sorted(c_bits) == [0, 1]
        assert dict(t[0])[1] == dict(t[1])[1] and dict(t[0])[2] == dict(t[1])[2]


def test_clause_with_parent_bit_zero_forced():
    _, fr = frame({1}, 2)
    out = tuples(Assignment({1: 1, 3: 0}), fr)
    assert len(out) == 2  # only x2 varies
    assert all(dict(part)[3] == 0 for t in out for part in t)


def test_clause_with_parent_bit_one_claimed_once():
    _, fr = frame({1}, 2)
    out = tuples(Assignment({1: 0, 3: 1}), fr)
    assert len(out) == 4
    assert all(sum(dict(part)[3] for part in t) == 1 for t in out)


def test_variable_in_split_bag_two_choices():
    _, fr = frame({1}, 2)
    vals = {dict(t[0])[2] for t in tuples(Assignment({1: 0, 3: 0}), fr)}
    assert vals == {0, 1}


def test_scope_mismatch():
    _, fr = frame({1}, 2)
    with pytest.raises(ConsistencyError):
        list(enumerate_consistent(Assignment({}), fr))


@pytest.mark.parametrize("bits, expected", [
    ({1: 1, 2: 1}, True),
    ({1: 0, 2: 1}, False),
    ({1: 0, 2: 0}, True),
])
def test_base_check(bits, expected):
    f = CnfFormula(1, ((1,),))
    assert base_satisfying_check(frozenset({1}), Assignment(bits), f) is expected


# -- groups ---------------------------------------------------------------------

def test_group_of_three_free_bits():
    g = AssignmentGroup((1, 2, 3), {})
    assert group_size(g) == 8
    assert group_member(g, 1).bits == {1: 0, 2: 0, 3: 0}
    assert group_member(g, 8).bits == {1: 1, 2: 1, 3: 1}


def test_worked_example_group():
    # four variables and three clauses; x1, x4, C2, C3 fixed to 1, 1, 0, 1
    g = AssignmentGroup(tuple(range(1, 8)), {1: 1, 4: 1, 6: 0, 7: 1})
    assert g.free == (2, 3, 5)
    assert group_size(g) == 8
    members = {tuple(sorted(group_member(g, j).bits.items())) for j in range(1, 9)}
    assert len(members) == 8


def test_group_without_free_bits():
    g = AssignmentGroup((1, 2), {1: 1, 2: 0})
    assert group_size(g) == 1
    assert group_member(g, 1).bits == {1: 1, 2: 0}
    assert group_size(trivial_group()) == 1


def test_member_out_of_range():
    with pytest.raises(IndexError):
        group_member(AssignmentGroup((1,), {}), 3)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 30), unique=True, max_size=8), st.data())
def test_member_index_round_trip(scope, data):
    fixed_keys = data.draw(st.sets(st.sampled_from(scope)) if scope else st.just(set()))
    fixed = {v: data.draw(st.integers(0, 1)) for v in fixed_keys}
    g = AssignmentGroup(tuple(scope), fixed)
    for j in range(1, g.size + 1):
        assert member_index(g, group_member(g, j)) == j


@pytest.mark.parametrize("k, eps, quota", [(5, 0.5, 3), (4, 0.5, 2), (5, 0.1, 5), (5, 0.9, 1), (3, 1.0, 0), (3, 0.0, 3)])
def test_fixed_quota(k, eps, quota):
    assert fixed_quota(k, eps) == quota
    assert len(fixed_prefix(range(1, k + 1), eps)) == quota


def gframe(marks, p, eps):
    view = SubtreeView(ADJ.keys(), marks, ADJ)
    return GroupFrame.build(view, split_at(view, p), BAGS, 2, eps)


def test_no_fixed_bits_one_fixing():
    gf = gframe((), 2, 1.0)
    parent = trivial_group()
    fixings = list(gf.fixings(parent))
    assert len(fixings) == 1
    children = derive_child_groups(parent, gf, fixings[0])
    assert [c.fixed for c in children] == [{}, {}]
    assert [c.size for c in children] == [2 ** 3, 2 ** 3]


@pytest.mark.parametrize("marks, p", [((), 2), ({1}, 2), ({3}, 2), ({1, 3}, 2)])
def test_all_fixed_matches_consistency(marks, p):
    gf = gframe(marks, p, 0.0)
    fr = gf.frame
    scope = tuple(sorted(fr.parent_scope))
    for vals in itertools.product((0, 1), repeat=len(scope)):
        bits = dict(zip(scope, vals))
        parent = AssignmentGroup(scope, bits)
        fixings = list(gf.fixings(parent))
        assert len(fixings) == count_consistent(Assignment(bits), fr)
        for fx in fixings:
            assert all(c.size == 1 for c in derive_child_groups(parent, gf, fx))


def test_fixed_clause_claimed_by_one_of_two_parts():
    # with S = {1, 3} the clause is fixed in the parent and in both parts
    gf = gframe({1, 3}, 2, 0.0)
    parent = AssignmentGroup((1, 2, 3), {1: 0, 2: 0, 3: 1})
    options = dict(gf.fixing_options(parent))
    assert len(options[3]) == 2
    assert gf.fixing_count(parent) == 2 <= gf.fixing_bound()


def test_inconsistent_fixing_rejected():
    gf = gframe({1, 3}, 2, 0.0)
    parent = AssignmentGroup((1, 2, 3), {1: 0, 2: 0, 3: 0})
    with pytest.raises(ConsistencyError):
        derive_child_groups(parent, gf, ({1: 0, 2: 0, 3: 1}, {2: 0, 3: 0}))


def _random_split_nodes(seed):
    rng = random.Random(seed)
    w = rng.randint(1, 4)
    n = rng.randint(max(2, w), 9)
    f, td = gen_bounded_width(GeneratorSpec(w, rng.choice(["path", "tree"]), n, rng.randint(1, 8),
                                            min(3, w, n), seed))
    nice = make_nice(td)
    plan = build_plan(nice, make_splitter("hc", 3), f.num_vars, 3)
    nodes = []
    stack = [plan.root]
    while stack:
        node = stack.pop()
        if not node.is_base:
            nodes.append(node)
            stack.extend(node.parts)
    return rng, f, nice, nodes


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0.2, 0.5, 0.8]))
def test_fixings_cover_every_consistent_tuple(seed, eps):
    rng, f, nice, nodes = _random_split_nodes(seed)
    for node in rng.sample(nodes, min(4, len(nodes))):
        gf = node.group_frame(nice.bags, f.num_vars, eps)
        fr = gf.frame
        scope = tuple(sorted(fr.parent_scope))
        parent = AssignmentGroup(scope, {v: rng.randint(0, 1) for v in gf.parent_fixed})
        R = group_member(parent, rng.randint(1, parent.size))
        children_per_fixing = [derive_child_groups(parent, gf, fx) for fx in gf.fixings(parent)]
        assert len(children_per_fixing) <= gf.fixing_bound()
        for parts in enumerate_consistent(R, fr):
            hits = sum(all(member_index(ch, Ri) is not None for ch, Ri in zip(children, parts))
                       for children in children_per_fixing)
            assert hits == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_counts_and_union_property(seed):
    rng, f, nice, nodes = _random_split_nodes(seed)
    n = f.num_vars
    for node in nodes[:6]:
        fr = node.frame
        scope = sorted(fr.parent_scope)
        R = Assignment({v: rng.randint(0, 1) for v in scope})
        count = 0
        for parts in enumerate_consistent(R, fr):
            count += 1
            union = {}
            for part in parts:
                for v, b in part.bits.items():
                    if v <= n:
                        assert union.setdefault(v, b) == b
        assert count == count_consistent(R, fr) <= consistent_bound(fr)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_recursion_matches_definition(seed):
    rng, f, nice, nodes = _random_split_nodes(seed)
    bags = nice.bags
    for node in nodes[:5]:
        scope = sorted(node.frame.parent_scope)
        R = Assignment({v: rng.randint(0, 1) for v in scope})
        direct = satisfying(node.view, R, f, bags)
        via_parts = any(all(satisfying(part.view, Ri, f, bags) for part, Ri in zip(node.parts, parts))
                        for parts in enumerate_consistent(R, node.frame))
        assert direct == via_parts
