"""Grounded instances: L-shapes above a ground line plus vertical ground segments."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from ..errors import DuplicateId, InvariantViolation
from ..geom import GroundSegment, LShape, Rat, extent, id_key, rat, shape_seg_intersect
from ..graph import IntersectionGraph, build_graph, triangle_witness

INVARIANTS = (
    "above_ground",
    "distinct_corner_y",
    "distinct_vertical_x",
    "supported",
    "triangle_free",
)


@dataclass(frozen=True)
class GroundedInstance:
    ground_y: Rat
    shapes: tuple[LShape, ...]
    segments: tuple[GroundSegment, ...]
    _graph: IntersectionGraph | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ground_y", rat(self.ground_y))
        object.__setattr__(self, "shapes", tuple(sorted(self.shapes, key=lambda s: id_key(s.id))))
        object.__setattr__(self, "segments", tuple(sorted(self.segments, key=lambda s: id_key(s.id))))
        ids = [m.id for m in self.shapes] + [m.id for m in self.segments]
        if len(ids) != len(set(ids)):
            raise DuplicateId("member ids must be distinct across shapes and segments")
        for s in self.segments:
            if s.y_bottom != self.ground_y:
                raise InvariantViolation("grounded", f"segment {s.id!r} does not start on the ground line")

    @property
    def graph(self) -> IntersectionGraph:
        if self._graph is None:
            object.__setattr__(self, "_graph", build_graph(self.shapes, self.segments))
        return self._graph

    @property
    def shape_ids(self) -> list:
        return [s.id for s in self.shapes]

    def shape(self, ident) -> LShape:
        for s in self.shapes:
            if s.id == ident:
                return s
        raise KeyError(ident)

    def shape_map(self) -> dict:
        return {s.id: s for s in self.shapes}

    def member_map(self) -> dict:
        out: dict = {s.id: s for s in self.shapes}
        out.update({s.id: s for s in self.segments})
        return out

    def shape_graph(self) -> IntersectionGraph:
        return self.graph.induced(self.shape_ids)

    def with_shapes(self, shapes: Sequence[LShape]) -> "GroundedInstance":
        return GroundedInstance(self.ground_y, tuple(shapes), self.segments)

    def restricted(self, keep) -> "GroundedInstance":
        keep = set(keep)
        return GroundedInstance(self.ground_y, tuple(s for s in self.shapes if s.id in keep), self.segments)

    def width(self) -> Rat:
        box = extent(list(self.shapes) + list(self.segments))
        return 0 if box is None else box.x_max - box.x_min

    def height(self) -> Rat:
        box = extent(list(self.shapes) + list(self.segments))
        return 0 if box is None else box.y_max - min(box.y_min, self.ground_y)


def make_instance(ground_y, shapes: Sequence[LShape], segments: Sequence[GroundSegment]) -> GroundedInstance:
    return GroundedInstance(rat(ground_y), tuple(shapes), tuple(segments))


def invariant_report(inst: GroundedInstance) -> dict[str, list[str]]:
    """Violations of each grounded-instance invariant (empty lists when all hold)."""
    out: dict[str, list[str]] = {name: [] for name in INVARIANTS}
    for s in inst.shapes:
        if not s.corner.y > inst.ground_y:
            out["above_ground"].append(f"{s.id!r} touches or crosses the ground line")
    ys: dict = {}
    for s in inst.shapes:
        if s.corner.y in ys:
            out["distinct_corner_y"].append(f"{ys[s.corner.y]!r} and {s.id!r} share y={s.corner.y}")
        ys[s.corner.y] = s.id
    xs: dict = {}
    for ident, x in [(s.id, s.corner.x) for s in inst.shapes] + [(g.id, g.x) for g in inst.segments]:
        if x in xs:
            out["distinct_vertical_x"].append(f"{xs[x]!r} and {ident!r} share x={x}")
        xs[x] = ident
    for s in inst.shapes:
        if not any(shape_seg_intersect(s, g) for g in inst.segments):
            out["supported"].append(f"{s.id!r} meets no ground segment")
    w = triangle_witness(inst.graph)
    if w is not None:
        out["triangle_free"].append(f"triangle {tuple(w)!r}")
    return out


def invariants_hold(inst: GroundedInstance) -> bool:
    return not any(invariant_report(inst).values())


def validate(inst: GroundedInstance) -> GroundedInstance:
    for name, problems in invariant_report(inst).items():
        if problems:
            raise InvariantViolation(name, problems[0])
    return inst


def replace_shapes(inst: GroundedInstance, changed: dict) -> GroundedInstance:
    """New snapshot with the shapes in ``changed`` (id -> LShape) swapped in."""
    return replace(inst, shapes=tuple(changed.get(s.id, s) for s in inst.shapes), _graph=None)
