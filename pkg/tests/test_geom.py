import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lshape_lab.errors import DegenerateShape, TieViolation
from lshape_lab.geom import (
    BBox, ConfigClass, Point, Relation, bbox, classify, ground_segment, hseg, lshape,
    lshapes_intersect, make_lshape, point_relation, rat, scale, shape_seg_intersect,
    translate, vertical_lies_left_of, vseg,
)

from conftest import FIG1_PAIRS, fig1_pair


def brute_cross(a, b):
    """Four-way segment test written independently of lshapes_intersect."""
    def meet(s, t):
        (ax1, ay1), (ax2, ay2) = s
        (bx1, by1), (bx2, by2) = t
        return (max(min(ax1, ax2), min(bx1, bx2)) <= min(max(ax1, ax2), max(bx1, bx2))
                and max(min(ay1, ay2), min(by1, by2)) <= min(max(ay1, ay2), max(by1, by2)))
    parts = lambda s: [((s.cx, s.cy), (s.right_x, s.cy)), ((s.cx, s.cy), (s.cx, s.top_y))]
    return any(meet(p, q) for p in parts(a) for q in parts(b))


def test_rat_canonical():
    assert rat("6/3") == 2 and isinstance(rat("6/3"), int)
    assert rat(Fraction(3, 4)) == Fraction(3, 4)
    with pytest.raises(TypeError):
        rat(0.5)


def test_make_lshape():
    a = make_lshape("a", Point(0, 2), 10, 8)
    assert a.h == hseg(0, 10, 2) and a.v == vseg(0, 2, 8)
    assert lshape("b", 3, 4, 7, 9).right_end == Point(7, 4)
    with pytest.raises(DegenerateShape):
        make_lshape("z", Point(0, 0), 0, 1)
    with pytest.raises(DegenerateShape):
        make_lshape("z", Point(0, 0), 1, 0)


def test_intersect_examples():
    a, b = fig1_pair("a")
    assert lshapes_intersect(a, b)
    h1, h2 = fig1_pair("h")
    assert not lshapes_intersect(h1, h2)
    assert not lshapes_intersect(a, translate(a, 100, 100))


def test_shape_seg_intersect():
    s = lshape("l", 3, 4, 7, 9)
    assert shape_seg_intersect(s, ground_segment("g", 5, 0, 10))
    assert not shape_seg_intersect(s, ground_segment("g", 8, 0, 10))
    assert not shape_seg_intersect(s, ground_segment("g", 5, 0, 3))
    # closed semantics: endpoint on the segment counts
    assert shape_seg_intersect(s, ground_segment("g", 7, 0, 4))


def test_bbox():
    a, b = fig1_pair("a")
    assert bbox(a) == BBox(0, 10, 2, 8)
    assert bbox(b) == BBox(2, 8, 0, 10)
    assert bbox(a).intersects(bbox(b))


@pytest.mark.parametrize("letter", list(FIG1_PAIRS))
def test_fig1_classification(letter):
    a, b = fig1_pair(letter)
    assert classify(a, b) == ConfigClass[letter.upper()]
    assert classify(b, a) == ConfigClass[letter.upper()]
    assert lshapes_intersect(a, b) == (letter in "abcd")


@pytest.mark.parametrize("left, right, expected", [
    # right endpoints share x: (b), (c), (e), (h)
    ((0, 2, 10, 8), (2, 0, 10, 10), "B"),
    ((0, 2, 10, 10), (2, 0, 10, 8), "C"),
    ((0, 0, 10, 8), (2, 2, 10, 10), "E"),
    ((0, 0, 10, 10), (2, 2, 10, 8), "H"),
    # top endpoints share y: (c), (d), (g), (h)
    ((0, 2, 8, 10), (2, 0, 10, 10), "C"),
    ((0, 2, 10, 10), (2, 0, 8, 10), "D"),
    ((0, 0, 8, 10), (2, 2, 10, 10), "G"),
    ((0, 0, 10, 10), (2, 2, 8, 10), "H"),
])
def test_caption_tie_rules(left, right, expected):
    assert classify(lshape("l", *left), lshape("r", *right)) == ConfigClass[expected]


def test_classify_ties_and_disjoint():
    a = lshape("a", 0, 0, 5, 5)
    with pytest.raises(TieViolation):
        classify(a, lshape("b", 0, 1, 3, 3))
    assert classify(a, lshape("c", 10, 10, 12, 12)) is ConfigClass.BBOX_DISJOINT


def test_point_relation_examples():
    seg = hseg(0, 10, 2)
    assert point_relation(Point(5, 10), seg) == Relation.ABOVE
    assert point_relation(Point(5, 1), seg) == Relation.BELOW
    assert point_relation(Point(2, 2), lshape("l", 0, 2, 10, 8)) == Relation.ON
    assert point_relation(Point(-1, 5), lshape("l", 0, 2, 10, 8)) == Relation.LEFT_OF


def test_vertical_left_of():
    target = lshape("t", 5, 0, 9, 20)
    assert vertical_lies_left_of(vseg(1, 2, 10), target)
    assert not vertical_lies_left_of(vseg(1, -1, 10), target)
    assert vertical_lies_left_of(vseg(1, 2, 20), target)
    assert not vertical_lies_left_of(vseg(6, 2, 3), target)


coord = st.integers(min_value=-20, max_value=20)


@st.composite
def shapes(draw, ident):
    cx, cy = draw(coord), draw(coord)
    return lshape(ident, cx, cy, cx + draw(st.integers(1, 25)), cy + draw(st.integers(1, 25)))


@settings(max_examples=300, deadline=None)
@given(shapes("a"), shapes("b"), st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 7))
def test_classify_symmetric_and_invariant(a, b, dx, dy, k):
    if a.cx == b.cx or a.cy == b.cy:
        return
    c = classify(a, b)
    assert classify(b, a) == c
    assert classify(translate(a, dx, dy), translate(b, dx, dy)) == c
    assert classify(scale(a, Fraction(k, 3)), scale(b, Fraction(k, 3))) == c
    ba, bb = bbox(a), bbox(b)
    disjoint = ba.x_max < bb.x_min or bb.x_max < ba.x_min or ba.y_max < bb.y_min or bb.y_max < ba.y_min
    assert (c is ConfigClass.BBOX_DISJOINT) == disjoint


@settings(max_examples=200, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), shapes("t"))
def test_point_relation_never_both_sides(px, py, t):
    p = Point(px, py)
    rel_h = point_relation(p, t.h)
    assert not (Relation.ABOVE in rel_h and Relation.BELOW in rel_h)
    rel_v = point_relation(p, t.v)
    assert not (Relation.LEFT_OF in rel_v and Relation.RIGHT_OF in rel_v)
    if Relation.ON in point_relation(p, t):
        assert point_relation(p, t) == Relation.ON


def test_crossing_letter_coherence_10k():
    rng = random.Random(11)
    checked = 0
    while checked < 10_000:
        vals = [rng.randint(0, 40) for _ in range(4)]
        a = lshape("a", vals[0], vals[1], vals[0] + rng.randint(1, 30), vals[1] + rng.randint(1, 30))
        b = lshape("b", vals[2], vals[3], vals[2] + rng.randint(1, 30), vals[3] + rng.randint(1, 30))
        if a.cx == b.cx or a.cy == b.cy:
            continue
        checked += 1
        cross = brute_cross(a, b)
        assert lshapes_intersect(a, b) == cross
        assert classify(a, b).crossing == cross
