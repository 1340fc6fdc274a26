"""Cut-and-shift plane surgery.

A horizontal shift cuts the plane along a horizontal segment ``s``, the
upward ray from its left endpoint and the downward ray from its right
endpoint, then translates everything right of the cut by ``delta``.  A
vertical shift cuts along a vertical ``s``, the leftward ray from its top
and the rightward ray from its bottom, and lifts the upper part.  Points on
the cut belong to the moving side.  Members severed by a ray are stretched
across the gap, which keeps every intersection by id.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable

from ..errors import CutObstructed
from ..geom import (
    GroundSegment, LShape, Point, Rat, Seg, extent, rat, segs_intersect,
)
from .instance import GroundedInstance


class Orientation(enum.Enum):
    HORIZONTAL_SHIFT = "HORIZONTAL_SHIFT"
    VERTICAL_SHIFT = "VERTICAL_SHIFT"


@dataclass(frozen=True)
class CutSpec:
    orientation: Orientation
    cut_segment: Seg
    delta: Rat

    def __post_init__(self):
        object.__setattr__(self, "delta", rat(self.delta))
        if not self.delta > 0:
            raise ValueError("shift delta must be positive")
        s = self.cut_segment
        if self.orientation is Orientation.HORIZONTAL_SHIFT and not s.horizontal:
            raise ValueError("horizontal shift needs a horizontal cut segment")
        if self.orientation is Orientation.VERTICAL_SHIFT and not s.vertical:
            raise ValueError("vertical shift needs a vertical cut segment")

    def moving(self, p: Point) -> bool:
        s = self.cut_segment
        if self.orientation is Orientation.HORIZONTAL_SHIFT:
            return (p.y >= s.y1 and p.x >= s.x1) or (p.y <= s.y1 and p.x >= s.x2)
        return (p.x <= s.x1 and p.y >= s.y2) or (p.x >= s.x1 and p.y >= s.y1)

    def offset(self) -> tuple[Rat, Rat]:
        if self.orientation is Orientation.HORIZONTAL_SHIFT:
            return self.delta, 0
        return 0, self.delta


def move_point(p: Point, cut: CutSpec) -> Point:
    if not cut.moving(p):
        return p
    dx, dy = cut.offset()
    return Point(p.x + dx, p.y + dy)


def default_delta(members: Iterable, orientation: Orientation, ground_y: Rat | None = None) -> Rat:
    """Scene width (or height) plus one."""
    box = extent(members)
    if box is None:
        return 1
    if orientation is Orientation.HORIZONTAL_SHIFT:
        return box.x_max - box.x_min + 1
    low = box.y_min if ground_y is None else min(box.y_min, ground_y)
    return box.y_max - low + 1


def _shift_shape(a: LShape, cut: CutSpec) -> LShape:
    dx, dy = cut.offset()
    if cut.moving(a.corner):
        return LShape(a.id, Point(a.corner.x + dx, a.corner.y + dy), a.right_x + dx, a.top_y + dy)
    if segs_intersect(a.h, cut.cut_segment) or segs_intersect(a.v, cut.cut_segment):
        raise CutObstructed(f"shape {a.id!r} crosses the cut segment from the fixed side")
    right_x, top_y = a.right_x, a.top_y
    if cut.orientation is Orientation.HORIZONTAL_SHIFT:
        if cut.moving(a.right_end):
            right_x += dx
    elif cut.moving(a.top_end):
        top_y += dy
    return LShape(a.id, a.corner, right_x, top_y)


def _shift_segment(g: GroundSegment, cut: CutSpec) -> GroundSegment:
    bottom = Point(g.x, g.y_bottom)
    if cut.orientation is Orientation.HORIZONTAL_SHIFT:
        if cut.moving(bottom):
            return replace(g, x=g.x + cut.delta)
        if segs_intersect(g.seg, cut.cut_segment):
            raise CutObstructed(f"segment {g.id!r} crosses the cut segment from the fixed side")
        return g
    if cut.moving(bottom):
        raise CutObstructed(f"vertical shift would lift ground segment {g.id!r} off the ground")
    if segs_intersect(g.seg, cut.cut_segment):
        raise CutObstructed(f"segment {g.id!r} crosses the cut segment from the fixed side")
    if cut.moving(Point(g.x, g.y_top)):
        return replace(g, y_top=g.y_top + cut.delta)
    return g


def shift_members(members: Iterable, cut: CutSpec) -> list:
    """Apply the surgery to shapes and ground segments alike."""
    out = []
    for m in members:
        out.append(_shift_shape(m, cut) if isinstance(m, LShape) else _shift_segment(m, cut))
    return out


def shift_cut(inst: GroundedInstance, cut: CutSpec) -> GroundedInstance:
    if cut.orientation is Orientation.VERTICAL_SHIFT and cut.cut_segment.y1 <= inst.ground_y:
        raise CutObstructed("vertical cut must lie strictly above the ground line")
    shapes = shift_members(inst.shapes, cut)
    segments = shift_members(inst.segments, cut)
    return GroundedInstance(inst.ground_y, tuple(shapes), tuple(segments))


def horizontal_cut(x1: Rat, x2: Rat, y: Rat, delta: Rat) -> CutSpec:
    return CutSpec(Orientation.HORIZONTAL_SHIFT, Seg(min(x1, x2), y, max(x1, x2), y), delta)


def vertical_cut(x: Rat, y1: Rat, y2: Rat, delta: Rat) -> CutSpec:
    return CutSpec(Orientation.VERTICAL_SHIFT, Seg(x, min(y1, y2), x, max(y1, y2)), delta)
