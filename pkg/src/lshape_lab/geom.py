"""Exact geometric primitives for L-shapes and vertical ground segments.

Coordinates are exact rationals: plain ``int`` when integral, otherwise
``fractions.Fraction``.  Floats are rejected so that every comparison made
by the classifier and the plane surgeries is exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Union

from .errors import DegenerateShape, TieViolation

Rat = Union[int, Fraction]
ShapeId = Hashable


def rat(value) -> Rat:
    """Coerce ``value`` to a canonical exact rational.

    Accepts ints, Fractions and strings such as ``"3"`` or ``"-7/4"``.
    Integral values come back as ``int``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        q = Fraction(value.strip())
        return q.numerator if q.denominator == 1 else q
    raise TypeError(f"not an exact rational: {value!r}")


def id_key(ident) -> tuple:
    """Total order on mixed int/str identifiers (ints first)."""
    if isinstance(ident, int):
        return (0, ident, "")
    return (1, 0, str(ident))


@dataclass(frozen=True, slots=True)
class Point:
    x: Rat
    y: Rat


@dataclass(frozen=True, slots=True)
class Seg:
    """Closed axis-parallel segment with ``x1 <= x2`` and ``y1 <= y2``."""

    x1: Rat
    y1: Rat
    x2: Rat
    y2: Rat

    @property
    def horizontal(self) -> bool:
        return self.y1 == self.y2

    @property
    def vertical(self) -> bool:
        return self.x1 == self.x2

    def contains(self, p: Point) -> bool:
        return self.x1 <= p.x <= self.x2 and self.y1 <= p.y <= self.y2


def hseg(x1: Rat, x2: Rat, y: Rat) -> Seg:
    return Seg(min(x1, x2), y, max(x1, x2), y)


def vseg(x: Rat, y1: Rat, y2: Rat) -> Seg:
    return Seg(x, min(y1, y2), x, max(y1, y2))


def segs_intersect(a: Seg, b: Seg) -> bool:
    # Axis-parallel closed segments meet iff their bounding boxes do.
    return a.x1 <= b.x2 and b.x1 <= a.x2 and a.y1 <= b.y2 and b.y1 <= a.y2


def seg_intersection(a: Seg, b: Seg) -> Seg | None:
    if not segs_intersect(a, b):
        return None
    return Seg(max(a.x1, b.x1), max(a.y1, b.y1), min(a.x2, b.x2), min(a.y2, b.y2))


@dataclass(frozen=True, slots=True)
class LShape:
    id: ShapeId
    corner: Point
    right_x: Rat
    top_y: Rat

    @property
    def cx(self) -> Rat:
        return self.corner.x

    @property
    def cy(self) -> Rat:
        return self.corner.y

    @property
    def h(self) -> Seg:
        return Seg(self.corner.x, self.corner.y, self.right_x, self.corner.y)

    @property
    def v(self) -> Seg:
        return Seg(self.corner.x, self.corner.y, self.corner.x, self.top_y)

    @property
    def parts(self) -> tuple[Seg, Seg]:
        return (self.h, self.v)

    @property
    def right_end(self) -> Point:
        return Point(self.right_x, self.corner.y)

    @property
    def top_end(self) -> Point:
        return Point(self.corner.x, self.top_y)

    def replace(self, *, corner: Point | None = None, right_x: Rat | None = None,
                top_y: Rat | None = None) -> "LShape":
        return make_lshape(
            self.id,
            corner if corner is not None else self.corner,
            right_x if right_x is not None else self.right_x,
            top_y if top_y is not None else self.top_y,
        )


@dataclass(frozen=True, slots=True)
class GroundSegment:
    id: ShapeId
    x: Rat
    y_bottom: Rat
    y_top: Rat

    def __post_init__(self):
        if not self.y_top > self.y_bottom:
            raise DegenerateShape(f"segment {self.id!r}: y_top must exceed y_bottom")

    @property
    def seg(self) -> Seg:
        return Seg(self.x, self.y_bottom, self.x, self.y_top)

    @property
    def parts(self) -> tuple[Seg]:
        return (self.seg,)


@dataclass(frozen=True, slots=True)
class BBox:
    x_min: Rat
    x_max: Rat
    y_min: Rat
    y_max: Rat

    def intersects(self, other: "BBox") -> bool:
        return (self.x_min <= other.x_max and other.x_min <= self.x_max
                and self.y_min <= other.y_max and other.y_min <= self.y_max)


class ConfigClass(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H = "H"
    BBOX_DISJOINT = "BBOX_DISJOINT"

    @property
    def letter(self) -> str:
        return self.value.lower() if len(self.value) == 1 else self.value

    @property
    def crossing(self) -> bool:
        return self in _CROSSING


_CROSSING = frozenset({ConfigClass.A, ConfigClass.B, ConfigClass.C, ConfigClass.D})


class Relation(enum.Flag):
    NONE = 0
    ABOVE = enum.auto()
    BELOW = enum.auto()
    LEFT_OF = enum.auto()
    RIGHT_OF = enum.auto()
    ON = enum.auto()


def make_lshape(id: ShapeId, corner: Point, right_x, top_y) -> LShape:
    corner = Point(rat(corner.x), rat(corner.y))
    right_x = rat(right_x)
    top_y = rat(top_y)
    if not right_x > corner.x:
        raise DegenerateShape(f"shape {id!r}: right_x {right_x} <= corner.x {corner.x}")
    if not top_y > corner.y:
        raise DegenerateShape(f"shape {id!r}: top_y {top_y} <= corner.y {corner.y}")
    return LShape(id, corner, right_x, top_y)


def lshape(id: ShapeId, cx, cy, right_x, top_y) -> LShape:
    """Shorthand for ``make_lshape(id, Point(cx, cy), right_x, top_y)``."""
    return make_lshape(id, Point(rat(cx), rat(cy)), right_x, top_y)


def ground_segment(id: ShapeId, x, y_bottom, y_top) -> GroundSegment:
    return GroundSegment(id, rat(x), rat(y_bottom), rat(y_top))


def bbox(a: LShape) -> BBox:
    return BBox(a.corner.x, a.right_x, a.corner.y, a.top_y)


def lshapes_intersect(a: LShape, b: LShape) -> bool:
    acx, acy, bcx, bcy = a.corner.x, a.corner.y, b.corner.x, b.corner.y
    # h(a) x v(b) and v(a) x h(b)
    if acx <= bcx <= a.right_x and bcy <= acy <= b.top_y:
        return True
    if bcx <= acx <= b.right_x and acy <= bcy <= a.top_y:
        return True
    # collinear overlaps, only possible outside general position
    if acy == bcy and acx <= b.right_x and bcx <= a.right_x:
        return True
    if acx == bcx and acy <= b.top_y and bcy <= a.top_y:
        return True
    return False


def shape_seg_intersect(a: LShape, s: GroundSegment) -> bool:
    if s.x == a.corner.x:
        return s.y_bottom <= a.top_y and a.corner.y <= s.y_top
    return a.corner.x <= s.x <= a.right_x and s.y_bottom <= a.corner.y <= s.y_top


def members_intersect(a, b) -> bool:
    """Closed-set intersection for any two members (shapes or segments)."""
    if isinstance(a, LShape):
        if isinstance(b, LShape):
            return lshapes_intersect(a, b)
        return shape_seg_intersect(a, b)
    if isinstance(b, LShape):
        return shape_seg_intersect(b, a)
    return segs_intersect(a.seg, b.seg)


def intersection_parts(a: LShape, b: LShape) -> list[tuple[str, str, Seg]]:
    """All pieces of ``a & b`` as ``(part of a, part of b, piece)`` triples."""
    out = []
    for na, sa in (("h", a.h), ("v", a.v)):
        for nb, sb in (("h", b.h), ("v", b.v)):
            piece = seg_intersection(sa, sb)
            if piece is not None:
                out.append((na, nb, piece))
    return out


def classify(a: LShape, b: LShape) -> ConfigClass:
    if a.corner.x == b.corner.x or a.corner.y == b.corner.y:
        raise TieViolation(f"shapes {a.id!r} and {b.id!r} share a corner coordinate")
    if not bbox(a).intersects(bbox(b)):
        return ConfigClass.BBOX_DISJOINT
    left, other = (a, b) if a.corner.x < b.corner.x else (b, a)
    top_less = left.top_y < other.top_y
    if left.corner.y > other.corner.y:
        if top_less:
            return ConfigClass.A if left.right_x > other.right_x else ConfigClass.B
        return ConfigClass.C if left.right_x <= other.right_x else ConfigClass.D
    if top_less:
        return ConfigClass.E if left.right_x >= other.right_x else ConfigClass.F
    return ConfigClass.G if left.right_x < other.right_x else ConfigClass.H


def _pieces(target) -> tuple[Seg, ...]:
    if isinstance(target, Seg):
        return (target,)
    parts = getattr(target, "parts", None)
    if parts is not None:
        return tuple(parts)
    return tuple(target)


def point_relation(p: Point, target) -> Relation:
    """Relation of ``p`` to a shape, segment, polyline part or iterable of segments.

    ``ABOVE`` means the downward ray from ``p`` meets the target, and so on;
    ``ON`` excludes everything else.
    """
    pieces = _pieces(target)
    if any(s.contains(p) for s in pieces):
        return Relation.ON
    rel = Relation.NONE
    for s in pieces:
        if s.x1 <= p.x <= s.x2:
            if s.y1 <= p.y:
                rel |= Relation.ABOVE
            if s.y2 >= p.y:
                rel |= Relation.BELOW
        if s.y1 <= p.y <= s.y2:
            if s.x1 >= p.x:
                rel |= Relation.LEFT_OF
            if s.x2 <= p.x:
                rel |= Relation.RIGHT_OF
    return rel


def point_left_of(p: Point, target) -> bool:
    return Relation.LEFT_OF in point_relation(p, target)


def point_below(p: Point, target) -> bool:
    return Relation.BELOW in point_relation(p, target)


def vertical_lies_left_of(s: Seg, target) -> bool:
    """True iff every point of the vertical segment ``s`` lies to the left of ``target``.

    Horizontal pieces of the target only reach isolated heights, so for a
    non-degenerate ``s`` coverage comes from vertical pieces strictly to its right.
    """
    pieces = _pieces(target)
    if any(segs_intersect(s, t) for t in pieces):
        return False
    if s.y1 == s.y2:
        return point_left_of(Point(s.x1, s.y1), pieces)
    spans = sorted((t.y1, t.y2) for t in pieces if t.vertical and t.x1 > s.x1)
    reach = s.y1  # [s.y1, reach] is covered once some span has started coverage
    for lo, hi in spans:
        if lo > reach:
            return False
        if hi >= reach:
            reach = hi
            if reach >= s.y2:
                return True
    return False


def translate(a: LShape, dx: Rat, dy: Rat) -> LShape:
    return LShape(a.id, Point(a.corner.x + dx, a.corner.y + dy), a.right_x + dx, a.top_y + dy)


def scale(a: LShape, factor: Rat) -> LShape:
    return LShape(a.id, Point(a.corner.x * factor, a.corner.y * factor),
                  a.right_x * factor, a.top_y * factor)


def extent(members: Iterable) -> BBox | None:
    """Bounding box of a collection of shapes and segments (None when empty)."""
    xs: list[Rat] = []
    ys: list[Rat] = []
    for m in members:
        if isinstance(m, LShape):
            xs += (m.corner.x, m.right_x)
            ys += (m.corner.y, m.top_y)
        else:
            xs.append(m.x)
            ys += (m.y_bottom, m.y_top)
    if not xs:
        return None
    return BBox(min(xs), max(xs), min(ys), max(ys))
