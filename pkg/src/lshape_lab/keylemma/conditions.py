"""Supports, handles and hooks, and checkers for the seven reduction conditions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..errors import NoSupport
from ..geom import (
    ConfigClass, GroundSegment, LShape, Point, Seg, bbox, classify, hseg, id_key,
    intersection_parts, lshapes_intersect, point_below, seg_intersection,
    vertical_lies_left_of,
)
from .instance import GroundedInstance

CONDITION_TEXT = {
    1: "no two handles intersect",
    2: "every hook is empty",
    3: "no corner or endpoint lies below a handle",
    4: "no corner lies to the left of two intersecting members",
    5: "no vertical part lies entirely to the left of a member it intersects",
    6: "no pair in configuration (e) or (f)",
    7: "no pair in configuration (g)",
}


@dataclass(frozen=True)
class PolyPart:
    owner: object
    parts: tuple[Seg, ...]
    open_left: bool = False

    @property
    def empty(self) -> bool:
        return not self.parts


@dataclass(frozen=True)
class Violation:
    condition: int
    members: tuple
    witness: Point | None
    detail: str = ""


def supports(inst: GroundedInstance, ident) -> list[GroundSegment]:
    """Ground segments meeting shape ``ident``, sorted by x."""
    seg_ids = {g.id for g in inst.segments}
    nbrs = inst.graph.adj.get(ident, frozenset()) & seg_ids
    members = inst.member_map()
    return sorted((members[i] for i in nbrs), key=lambda g: g.x)


def _shape(inst: GroundedInstance, ell) -> LShape:
    return ell if isinstance(ell, LShape) else inst.shape(ell)


def leftmost_support(inst: GroundedInstance, ell) -> GroundSegment:
    ell = _shape(inst, ell)
    sup = supports(inst, ell.id)
    if not sup:
        raise NoSupport(f"shape {ell.id!r} meets no ground segment")
    return sup[0]


def rightmost_support(inst: GroundedInstance, ell) -> GroundSegment:
    ell = _shape(inst, ell)
    sup = supports(inst, ell.id)
    if not sup:
        raise NoSupport(f"shape {ell.id!r} meets no ground segment")
    return sup[-1]


def handle_of(inst: GroundedInstance, ell) -> PolyPart:
    ell = _shape(inst, ell)
    x = leftmost_support(inst, ell).x
    return PolyPart(ell.id, (ell.v, hseg(ell.cx, x, ell.cy)))


def hook_of(inst: GroundedInstance, ell) -> PolyPart:
    """Part of h(ell) strictly right of the rightmost support (``open_left``)."""
    ell = _shape(inst, ell)
    x = rightmost_support(inst, ell).x
    if ell.right_x <= x:
        return PolyPart(ell.id, ())
    return PolyPart(ell.id, (hseg(x, ell.right_x, ell.cy),), open_left=True)


def _support_extremes(inst: GroundedInstance) -> dict:
    out = {}
    for s in inst.shapes:
        sup = supports(inst, s.id)
        if not sup:
            raise NoSupport(f"shape {s.id!r} meets no ground segment")
        out[s.id] = (sup[0].x, sup[-1].x)
    return out


def _check1(inst, ext) -> list[Violation]:
    handles = [(s, (s.v, hseg(s.cx, ext[s.id][0], s.cy))) for s in inst.shapes]
    out = []
    for i, (a, ha) in enumerate(handles):
        for b, hb in handles[i + 1:]:
            for pa in ha:
                hit = next((seg_intersection(pa, pb) for pb in hb if seg_intersection(pa, pb)), None)
                if hit is not None:
                    out.append(Violation(1, (a.id, b.id), Point(hit.x1, hit.y1), "handles intersect"))
                    break
    return out


def _check2(inst, ext) -> list[Violation]:
    return [Violation(2, (s.id,), s.right_end, f"hook beyond x={ext[s.id][1]}")
            for s in inst.shapes if s.right_x > ext[s.id][1]]


def _check3(inst, ext) -> list[Violation]:
    out = []
    points = [(s.id, name, p) for s in inst.shapes
              for name, p in (("corner", s.corner), ("right", s.right_end), ("top", s.top_end))]
    for s in inst.shapes:
        x_left = ext[s.id][0]
        # the point on the support line itself is excluded: the handle stops short of it
        for owner, name, p in points:
            if s.cx <= p.x < x_left and p.y < s.cy:
                out.append(Violation(3, (s.id, owner), p, f"{name} point below handle"))
    return out


def left_of_member(p: Point, m) -> bool:
    """Fast equivalent of ``point_left_of`` for a shape or ground segment."""
    if isinstance(m, LShape):
        on_v = p.x == m.cx and m.cy <= p.y <= m.top_y
        on_h = p.y == m.cy and m.cx <= p.x <= m.right_x
        if on_v or on_h:
            return False
        return (m.cx >= p.x and m.cy <= p.y <= m.top_y) or (p.y == m.cy and m.right_x >= p.x)
    return m.x > p.x and m.y_bottom <= p.y <= m.y_top


def _check4(inst, ext=None) -> list[Violation]:
    members = list(inst.shapes) + list(inst.segments)
    adj = inst.graph.adj
    out = []
    for s in inst.shapes:
        p = s.corner
        right_of_p = {m.id for m in members if m.id != s.id and left_of_member(p, m)}
        found = None
        for a in sorted(right_of_p, key=id_key):
            common = adj[a] & right_of_p
            if common:
                found = (a, min(common, key=id_key))
                break
        if found:
            out.append(Violation(4, (s.id,) + found, p, "corner left of two intersecting members"))
    return out


def _check5(inst, ext=None) -> list[Violation]:
    members = inst.member_map()
    out = []
    for s in inst.shapes:
        for other in sorted(inst.graph.adj[s.id], key=id_key):
            if vertical_lies_left_of(s.v, members[other]):
                out.append(Violation(5, (s.id, other), s.top_end, "vertical part left of an intersecting member"))
    return out


def config_pairs(inst_or_shapes, letters: Iterable[ConfigClass]) -> list[tuple[LShape, LShape, ConfigClass]]:
    """Pairs (left, right, class) whose classification is in ``letters``."""
    shapes = inst_or_shapes.shapes if isinstance(inst_or_shapes, GroundedInstance) else list(inst_or_shapes)
    letters = set(letters)
    order = sorted(shapes, key=lambda s: (s.cx, id_key(s.id)))
    out = []
    for i, a in enumerate(order):
        ba = bbox(a)
        for b in order[i + 1:]:
            if b.cx > ba.x_max:
                break
            c = classify(a, b)
            if c in letters:
                out.append((a, b, c))
    return out


def _check6(inst, ext=None) -> list[Violation]:
    return [Violation(6, (a.id, b.id), a.corner, f"configuration ({c.letter})")
            for a, b, c in config_pairs(inst, (ConfigClass.E, ConfigClass.F))]


def _check7(inst, ext=None) -> list[Violation]:
    return [Violation(7, (a.id, b.id), a.corner, "configuration (g)")
            for a, b, c in config_pairs(inst, (ConfigClass.G,))]


_CHECKS = {1: _check1, 2: _check2, 3: _check3, 4: _check4, 5: _check5, 6: _check6, 7: _check7}


def check_condition(inst: GroundedInstance, k: int) -> list[Violation]:
    if k not in _CHECKS:
        raise ValueError(f"condition index must be 1..7, got {k}")
    if not inst.shapes:
        return []
    ext = _support_extremes(inst) if k in (1, 2, 3) else None
    return _CHECKS[k](inst, ext)


def conditions_hold(inst: GroundedInstance, upto: int) -> dict[int, bool]:
    return {k: not check_condition(inst, k) for k in range(1, upto + 1)}


# -- structural helpers used by the reductions ------------------------------

def vertical_left_part(ell: LShape, other) -> Seg | None:
    """Part of v(ell) lying to the left of ``other`` (a member crossing h(ell))."""
    top = other.top_y if isinstance(other, LShape) else other.y_top
    hi = min(ell.top_y, top)
    if hi < ell.cy:
        return None
    return Seg(ell.cx, ell.cy, ell.cx, hi)


def crosses_h(other, ell: LShape) -> bool:
    """``other`` (shape or segment) meets the horizontal part of ``ell``."""
    if isinstance(other, LShape):
        return seg_intersection(other.v, ell.h) is not None or seg_intersection(other.h, ell.h) is not None
    return seg_intersection(other.seg, ell.h) is not None


# -- corners of an (e)/(f) pair below a third horizontal ------------------------

def claim9_applies(inst: GroundedInstance, l1, l2, ell) -> bool:
    l1, l2, ell = (_shape(inst, x) for x in (l1, l2, ell))
    if len({l1.id, l2.id, ell.id}) < 3:
        return False
    c = classify(l1, l2)
    if c not in (ConfigClass.E, ConfigClass.F):
        return False
    # l1 is the member with the lower horizontal segment
    if l1.cy > l2.cy:
        return False
    return point_below(l1.corner, ell.h)


def claim9_holds(inst: GroundedInstance, l1, l2, ell) -> bool:
    """Checks the conclusion directly; vacuously True when the hypothesis fails."""
    if not claim9_applies(inst, l1, l2, ell):
        return True
    l2, ell = _shape(inst, l2), _shape(inst, ell)
    return point_below(l2.corner, ell.h)


def claim9_counterexamples(inst: GroundedInstance) -> list[tuple]:
    out = []
    for a, b, _ in config_pairs(inst, (ConfigClass.E, ConfigClass.F)):
        l1, l2 = (a, b) if a.cy < b.cy else (b, a)
        for ell in inst.shapes:
            if ell.id in (l1.id, l2.id):
                continue
            if point_below(l1.corner, ell.h) and not point_below(l2.corner, ell.h):
                out.append((l1.id, l2.id, ell.id))
    return out


# -- LR-crossing structure --------------------------------------------------

def lr_crossing_violations(shapes: Sequence[LShape], hook_boundary: Mapping) -> list[tuple]:
    """Intersecting pairs that meet outside v(one) x hook(other)."""
    order = sorted(shapes, key=lambda s: (s.cx, id_key(s.id)))
    bad = []
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            if b.cx > a.right_x:
                break
            if not lshapes_intersect(a, b):
                continue
            for pa, pb, piece in intersection_parts(a, b):
                if pa == "h" and pb == "v" and piece.x1 > hook_boundary[a.id]:
                    continue
                if pa == "v" and pb == "h" and piece.x1 > hook_boundary[b.id]:
                    continue
                bad.append((a.id, b.id, Point(piece.x1, piece.y1)))
                break
    return bad


def lr_crossing_check(shapes: Sequence[LShape], hook_boundary: Mapping) -> bool:
    return not lr_crossing_violations(shapes, hook_boundary)
