"""Turn one class of a distance-2 family into a grounded instance.

Class 1 keeps the parts of the h-supports above the pivot's horizontal line
as ground segments.  Class 6 trims the v-supports at the pivot's vertical
line, opens a horizontal gap under each of them and drops a vertical
extension through that gap to the ground line.  Classes 4 and 3 are the
mirror images of 1 and 6 under the diagonal reflection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import CutObstructed, PrepFailed
from ..geom import GroundSegment, LShape, id_key, members_intersect
from ..keylemma.instance import GroundedInstance, invariant_report
from ..keylemma.surgery import Orientation, default_delta, horizontal_cut, shift_members
from ..scene import Scene
from .classes import reflect_diagonal, six_classes

PREP_CLASSES = (1, 3, 4, 6)


@dataclass(frozen=True)
class GroundPrep:
    class_index: int
    reflected: bool
    instance: GroundedInstance
    id_map: dict                        # member id in the instance -> shape id in the scene
    invariants: dict = field(default_factory=dict)
    dropped: tuple = ()                 # supports whose remaining part is a single point

    @property
    def ok(self) -> bool:
        return not any(self.invariants.values())


def _pairs(members_a, members_b) -> set:
    return {(a.id, b.id) for a in members_a for b in members_b if members_intersect(a, b)}


def _prep1(scene: Scene, pivot, cls: frozenset, hs: frozenset):
    shapes = scene.shape_map()
    ground = shapes[pivot].cy
    segs, dropped = [], []
    for i in sorted(hs, key=id_key):
        s = shapes[i]
        if s.top_y > ground:
            segs.append(GroundSegment(i, s.cx, ground, s.top_y))
        else:
            dropped.append(i)
    body = [shapes[i] for i in sorted(cls, key=id_key)]
    return GroundedInstance(ground, tuple(body), tuple(segs)), tuple(dropped)


def _prep6(scene: Scene, pivot, cls: frozenset, vs: frozenset):
    shapes = scene.shape_map()
    p = shapes[pivot]
    body = [shapes[i] for i in sorted(cls, key=id_key)]
    trimmed = [LShape(i, shapes[i].corner, p.cx, shapes[i].top_y) for i in sorted(vs, key=id_key)]
    before = _pairs(body, [shapes[i] for i in sorted(vs, key=id_key)])
    body_edges = _pairs(body, body)
    work = {m.id: m for m in body + trimmed + [p]}
    for s in trimmed:
        cur, piv = work[s.id], work[pivot]
        cut = horizontal_cut(cur.cx, piv.cx, cur.cy, default_delta(work.values(), Orientation.HORIZONTAL_SHIFT))
        try:
            moved = shift_members(work.values(), cut)
        except CutObstructed as exc:
            raise PrepFailed(f"class 6: cut under {s.id!r} obstructed ({exc})") from exc
        work = {m.id: m for m in moved}
    segs = [GroundSegment(s.id, work[s.id].cx, p.cy, work[s.id].top_y) for s in trimmed]
    new_body = [work[m.id] for m in body]
    if _pairs(new_body, segs) != before:
        raise PrepFailed("class 6: vertical extensions change the support edges")
    if _pairs(new_body, new_body) != body_edges:
        raise PrepFailed("class 6: surgery changed the edges inside the class")
    return GroundedInstance(p.cy, tuple(new_body), tuple(segs)), ()


def prepare_grounded(scene: Scene, pivot, class_index: int) -> GroundPrep:
    if class_index not in PREP_CLASSES:
        raise ValueError(f"class_index must be one of {PREP_CLASSES}")
    reflected = class_index in (3, 4)
    base = {3: 6, 4: 1}.get(class_index, class_index)
    work = reflect_diagonal(scene) if reflected else scene
    split = six_classes(work, pivot)
    cls = split[base]
    if reflected and cls != six_classes(scene, pivot)[class_index]:
        raise PrepFailed(f"class {class_index}: reflection does not map it onto class {base}")
    if not cls:
        raise PrepFailed("empty")
    if base == 1:
        inst, dropped = _prep1(work, pivot, cls, split.h_supports)
    else:
        inst, dropped = _prep6(work, pivot, cls, split.v_supports)
    report = invariant_report(inst)
    for name, problems in report.items():
        if problems:
            raise PrepFailed(f"{name}: {problems[0]}")
    id_map = {m.id: m.id for m in list(inst.shapes) + list(inst.segments)}
    return GroundPrep(class_index, reflected, inst, id_map, report, dropped)
