import random

import pytest

from lshape_lab.errors import NoSupport
from lshape_lab.geom import Point, Relation, ground_segment, hseg, lshape, point_relation
from lshape_lab.keylemma.conditions import (
    check_condition, claim9_applies, claim9_counterexamples, claim9_holds, handle_of, hook_of,
    left_of_member, leftmost_support, lr_crossing_check, rightmost_support,
)
from lshape_lab.keylemma.instance import make_instance
from lshape_lab.keylemma.pipeline import reduce_condition

from conftest import grounded_case

L = lshape("l", 3, 4, 7, 9)


def test_supports():
    inst = make_instance(0, [L], [ground_segment("g", 5, 0, 10)])
    assert leftmost_support(inst, "l").x == rightmost_support(inst, "l").x == 5
    inst = make_instance(0, [L], [ground_segment("g4", 4, 0, 10), ground_segment("g6", 6, 0, 10)])
    assert leftmost_support(inst, "l").id == "g4" and rightmost_support(inst, "l").id == "g6"
    with pytest.raises(NoSupport):
        leftmost_support(make_instance(0, [L], [ground_segment("g", 8, 0, 10)]), "l")


def test_handle_and_hook():
    inst = make_instance(0, [L], [ground_segment("g", 5, 0, 10)])
    assert handle_of(inst, "l").parts == (L.v, hseg(3, 5, 4))
    hook = hook_of(inst, "l")
    assert hook.parts == (hseg(5, 7, 4),) and hook.open_left
    flush = make_instance(0, [lshape("l", 3, 4, 5, 9)], [ground_segment("g", 5, 0, 10)])
    assert hook_of(flush, "l").empty


def test_single_shape_and_hook_violation():
    inst = make_instance(0, [L], [ground_segment("g", 5, 0, 10)])
    assert check_condition(inst, 1) == []
    viol = check_condition(inst, 2)
    assert len(viol) == 1 and viol[0].members == ("l",) and viol[0].witness == Point(7, 4)


def test_configuration_e_violation():
    a, b = lshape("a", 0, 2, 12, 8), lshape("b", 4, 4, 10, 10)
    inst = make_instance(0, [a, b], [ground_segment("g1", 10, 0, 5), ground_segment("g2", 12, 0, 3)])
    viol = check_condition(inst, 6)
    assert len(viol) == 1 and set(viol[0].members) == {"a", "b"}
    assert check_condition(inst, 7) == []


def test_below_handle():
    big = lshape("big", 0, 10, 12, 15)
    small = lshape("small", 2, 4, 4, 8)
    inst = make_instance(0, [big, small], [ground_segment("g", 12, 0, 12), ground_segment("h", 4, 0, 5)])
    viol = check_condition(inst, 3)
    assert {v.members for v in viol} == {("big", "small")}
    assert {v.witness for v in viol} == {Point(2, 4), Point(4, 4), Point(2, 8)}


def test_endpoint_on_support_line_is_not_below_handle():
    big = lshape("big", 0, 10, 12, 15)
    flush = lshape("flush", -4, 3, 12, 6)
    inst = make_instance(0, [big, flush], [ground_segment("g", 12, 0, 12)])
    assert check_condition(inst, 3) == []


def _left_fixture():
    a = lshape("a", 10, 10, 20, 30)
    b = lshape("b", 2, 15, 4, 17)
    segs = [ground_segment("g1", 20, 0, 12), ground_segment("g2", 14, 0, 16), ground_segment("g3", 4, 0, 16)]
    return make_instance(0, [a, b], segs)


def test_corner_left_of_intersecting_pair():
    inst = _left_fixture()
    for k in (1, 2, 3):
        assert check_condition(inst, k) == []
    viol = check_condition(inst, 4)
    assert len(viol) == 1 and viol[0].members[0] == "b" and set(viol[0].members[1:]) == {"a", "g2"}
    out, cert = reduce_condition(inst, 4)
    assert check_condition(out, 4) == [] and cert.accepted
    assert out.graph.edges() == inst.graph.edges()


def test_vertical_left_of_intersecting_member():
    # v(a) is short and sits entirely left of the tall support it meets
    a = lshape("a", 0, 5, 6, 7)
    inst = make_instance(0, [a], [ground_segment("g", 6, 0, 20)])
    viol = check_condition(inst, 5)
    assert [v.members for v in viol] == [("a", "g")]
    assert check_condition(make_instance(0, [lshape("a", 0, 5, 6, 30)], [ground_segment("g", 6, 0, 20)]), 5) == []


def test_left_of_member_matches_point_relation():
    rng = random.Random(5)
    for _ in range(3000):
        cx, cy = rng.randint(0, 10), rng.randint(0, 10)
        m = lshape("m", cx, cy, cx + rng.randint(1, 6), cy + rng.randint(1, 6))
        g = ground_segment("g", rng.randint(0, 16), 0, rng.randint(1, 16))
        p = Point(rng.randint(-1, 17), rng.randint(-1, 17))
        assert left_of_member(p, m) == (Relation.LEFT_OF in point_relation(p, m))
        assert left_of_member(p, g) == (Relation.LEFT_OF in point_relation(p, g))


def test_lr_crossing_check():
    a = lshape("a", 0, 0, 10, 5)
    b = lshape("b", 6, -3, 8, 4)
    assert lr_crossing_check([a, lshape("c", 20, 20, 25, 25)], {"a": 5, "c": 22})
    # v(b) meets h(a) at x=6, left of a's hook boundary 8
    assert not lr_crossing_check([a, b], {"a": 8, "b": 8})
    # the same crossing inside a's hook
    assert lr_crossing_check([a, b], {"a": 5, "b": 8})


def test_claim9_examples():
    l1, l2 = lshape("l1", 0, 0, 10, 8), lshape("l2", 2, 2, 8, 10)
    above = lshape("l", -5, 20, 30, 25)
    below = lshape("l", -5, -3, 30, 25)
    inst = make_instance(-10, [l1, l2, above], [])
    assert claim9_applies(inst, "l1", "l2", "l") and claim9_holds(inst, "l1", "l2", "l")
    inst = make_instance(-10, [l1, l2, below], [])
    assert not claim9_applies(inst, "l1", "l2", "l") and claim9_holds(inst, "l1", "l2", "l")


def test_claim9_on_reduced_instances():
    checked = 0
    for seed in range(1000):
        inst = grounded_case(seed, 4 + seed % 30)
        for k in range(1, 6):
            inst, cert = reduce_condition(inst, k, check_input=False, chromatic_limit=0)
            assert cert.condition_now_holds and cert.prior_conditions_hold
        assert claim9_counterexamples(inst) == []
        checked += 1
    assert checked == 1000
