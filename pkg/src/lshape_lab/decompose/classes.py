"""Pivots, supports and the six-way split of a distance-2 family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..errors import BudgetExceeded, CoverGap, EmptyScene, TriangleDetected, UnknownVertex
from ..geom import LShape, Point, Seg, id_key, segs_intersect
from ..graph import DEFAULT_NODE_BUDGET, chi_exact, dist2
from ..scene import Scene

EXACT = "EXACT"
HEURISTIC = "HEURISTIC"


class PivotChoice(NamedTuple):
    id: str
    method: str          # EXACT or HEURISTIC
    score: int           # chi of F(c) for EXACT, |F(c)| for HEURISTIC


def reflect_shape(a: LShape) -> LShape:
    return LShape(a.id, Point(a.cy, a.cx), a.top_y, a.right_x)


def reflect_diagonal(scene: Scene) -> Scene:
    """Mirror in the line y = x; horizontal and vertical parts trade places."""
    return Scene(tuple(reflect_shape(s) for s in scene.shapes))


def pick_pivot(scene: Scene, budget: int = DEFAULT_NODE_BUDGET) -> PivotChoice:
    """Shape whose distance-2 family has the largest chromatic number.

    Falls back to the largest distance-2 family, flagged HEURISTIC, as soon
    as one exact computation runs out of budget.  Ties go to the smallest id.
    """
    if not scene.shapes:
        raise EmptyScene("cannot pick a pivot in an empty scene")
    g = scene.graph
    fams = {c: dist2(g, c) for c in scene.ids}
    order = sorted(scene.ids, key=id_key)
    if budget > 0:
        try:
            scores = {c: chi_exact(g.induced(f), budget)[0] for c, f in fams.items()}
        except BudgetExceeded:
            pass
        else:
            top = max(scores.values())
            best = next(c for c in order if scores[c] == top)
            return PivotChoice(best, EXACT, top)
    top = max(len(f) for f in fams.values())
    best = next(c for c in order if len(fams[c]) == top)
    return PivotChoice(best, HEURISTIC, top)


def _meets(a: LShape, seg: Seg) -> bool:
    return segs_intersect(a.h, seg) or segs_intersect(a.v, seg)


def supports(scene: Scene, pivot) -> tuple[frozenset, frozenset]:
    """Shapes crossing h(pivot) and shapes crossing v(pivot)."""
    shapes = scene.shape_map()
    if pivot not in shapes:
        raise UnknownVertex(f"{pivot!r} is not in the scene")
    p = shapes[pivot]
    others = [s for s in scene.shapes if s.id != pivot]
    hs = frozenset(s.id for s in others if _meets(s, p.h))
    vs = frozenset(s.id for s in others if _meets(s, p.v))
    both = sorted(hs | vs, key=id_key)
    g = scene.graph
    for i, a in enumerate(both):
        for b in both[i + 1:]:
            if g.has_edge(a, b):
                raise TriangleDetected((pivot, a, b))
    if hs & vs:
        a = min(hs & vs, key=id_key)
        raise TriangleDetected((pivot, a, a))
    return hs, vs


@dataclass(frozen=True)
class SixClasses:
    pivot: str
    h_supports: frozenset
    v_supports: frozenset
    classes: tuple          # F1..F6 as frozensets, index 0..5
    family: frozenset       # dist2(pivot)

    def __getitem__(self, k: int) -> frozenset:
        """Class ``k`` counted from 1."""
        if not 1 <= k <= 6:
            raise IndexError("classes are numbered 1..6")
        return self.classes[k - 1]


def six_classes(scene: Scene, pivot) -> SixClasses:
    hs, vs = supports(scene, pivot)
    shapes = scene.shape_map()
    p = shapes[pivot]
    fam = frozenset(dist2(scene.graph, pivot))
    hsup = [shapes[i] for i in sorted(hs, key=id_key)]
    vsup = [shapes[i] for i in sorted(vs, key=id_key)]
    out = [set() for _ in range(6)]
    for ident in fam:
        s = shapes[ident]
        h_on_h = any(_meets(t, s.h) for t in hsup)
        h_on_v = any(_meets(t, s.v) for t in hsup)
        v_on_h = any(_meets(t, s.h) for t in vsup)
        v_on_v = any(_meets(t, s.v) for t in vsup)
        if h_on_h and s.cy > p.cy:
            out[0].add(ident)
        if h_on_h and s.cy < p.cy:
            out[1].add(ident)
        if h_on_v and not h_on_h:
            out[2].add(ident)
        if v_on_v and s.cx > p.cx:
            out[3].add(ident)
        if v_on_v and s.cx < p.cx:
            out[4].add(ident)
        if v_on_h and not v_on_v:
            out[5].add(ident)
    covered = set().union(*out)
    if covered != fam:
        missing = sorted(fam - covered, key=id_key)
        raise CoverGap(f"distance-2 members in no class: {missing}")
    return SixClasses(pivot, hs, vs, tuple(frozenset(c) for c in out), fam)
