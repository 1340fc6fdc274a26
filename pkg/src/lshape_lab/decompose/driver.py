"""Three-level decomposition driver and the final crossing-structure check."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import BudgetExceeded, HookUndefined, TriangleDetected
from ..geom import LShape, id_key, seg_intersection
from ..graph import chi_exact, triangle_witness
from ..keylemma.conditions import lr_crossing_violations
from ..keylemma.pipeline import PipelineReport, run_pipeline
from ..scene import Scene
from .classes import EXACT, PivotChoice, pick_pivot, reflect_diagonal, six_classes
from .prep import PREP_CLASSES, GroundPrep, prepare_grounded

DEFAULT_BUDGET = 200_000
DEFAULT_DEPTH = 3
HOOK_SOURCE = "level-j supports"


@dataclass
class LevelRecord:
    level: int
    pivot: PivotChoice
    h_supports: frozenset
    v_supports: frozenset
    classes: tuple
    family: frozenset
    k: int | None
    k_method: str
    preps: dict = field(default_factory=dict)       # class index -> GroundPrep
    grounded: dict = field(default_factory=dict)    # class index -> PipelineReport
    chromatic: dict = field(default_factory=dict)

    @property
    def cover_ok(self) -> bool:
        return frozenset().union(*self.classes) == self.family

    @property
    def supports_independent(self) -> bool:
        return not (self.h_supports & self.v_supports)

    @property
    def accepted(self) -> bool:
        return (self.cover_ok and self.supports_independent
                and all(p.ok for p in self.preps.values())
                and all(r.accepted for r in self.grounded.values())
                and self.chromatic.get("monotone", True) is not False)


@dataclass
class DecompositionReport:
    scene: Scene
    chain: tuple                    # id tuples F0, F1, ...
    levels: list
    pigeonhole: tuple | None
    f3_verdict: bool | None = None
    f3_log: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def final_family(self) -> tuple:
        return self.chain[-1]

    @property
    def chain_ok(self) -> bool:
        sets = [set(c) for c in self.chain]
        return all(b < a for a, b in zip(sets, sets[1:]) if a)

    @property
    def pigeonhole_ok(self) -> bool:
        if self.pigeonhole is None:
            return len(self.levels) < DEFAULT_DEPTH or any(r.k is None for r in self.levels) \
                or not self.final_family
        i, j = self.pigeonhole
        ki, kj = self.levels[i].k, self.levels[j].k
        return i < j and ki == kj and ki in (2, 5)

    @property
    def accepted(self) -> bool:
        return (self.chain_ok and self.pigeonhole_ok and self.f3_verdict is True
                and all(r.accepted for r in self.levels))


def _chi(scene: Scene, keep, budget: int):
    try:
        return chi_exact(scene.graph.induced(keep), budget)
    except BudgetExceeded:
        return None


def _choose_k(scene: Scene, split, budget: int) -> tuple[int | None, str]:
    two, five = split[2], split[5]
    if not two and not five:
        return None, "absent"
    c2, c5 = _chi(scene, two, budget), _chi(scene, five, budget)
    if c2 is not None and c5 is not None:
        return (2 if c2[0] >= c5[0] else 5), EXACT
    return (2 if len(two) >= len(five) else 5), "SIZE"


def _ledger(scene: Scene, fam: frozenset, nxt: frozenset, budget: int) -> dict:
    whole = _chi(scene, scene.ids, budget)
    if whole is None:
        return {"chi": None}
    chi, col = whole
    inner = _chi(scene, fam, budget)
    outside = len({col.assignment[v] for v in scene.ids if v not in fam})
    out = {"chi": chi, "outside_colors": outside}
    if inner is not None:
        out["chi_dist2"] = inner[0]
        out["bound_ok"] = chi <= inner[0] + outside
    sub = _chi(scene, nxt, budget)
    if sub is not None:
        out["chi_next"] = sub[0]
        out["monotone"] = sub[0] <= chi
    return out


def _pigeonhole(levels: list) -> tuple | None:
    ks = [r.k for r in levels]
    for j in range(len(ks)):
        for i in range(j):
            if ks[i] is not None and ks[i] == ks[j]:
                return i, j
    return None


def _normalize(scene: Scene) -> Scene:
    from ..gen import normalize
    return normalize(scene)


def run_decomposition(scene: Scene, budget: int = DEFAULT_BUDGET, *, depth: int = DEFAULT_DEPTH,
                      pipelines: bool = True) -> DecompositionReport:
    """Build the chain F0 > F1 > ... with per-level certificates.

    Coordinates are replaced by their ranks first.  ``pipelines`` runs the
    reduction pipeline on every prepared class.
    """
    scene = _normalize(scene)
    w = triangle_witness(scene.graph)
    if w is not None:
        raise TriangleDetected(tuple(w))
    cur = frozenset(scene.ids)
    chain = [tuple(sorted(cur, key=id_key))]
    levels = []
    for level in range(depth):
        if not cur:
            break
        sub = scene.restricted(cur)
        pivot = pick_pivot(sub, budget)
        split = six_classes(sub, pivot.id)
        k, how = _choose_k(sub, split, budget)
        rec = LevelRecord(level, pivot, split.h_supports, split.v_supports, split.classes,
                          split.family, k, how)
        for c in PREP_CLASSES:
            if split[c]:
                rec.preps[c] = prepare_grounded(sub, pivot.id, c)
                if pipelines:
                    rec.grounded[c] = run_pipeline(rec.preps[c].instance)
        nxt = split[k] if k is not None else frozenset()
        rec.chromatic = _ledger(sub, split.family, nxt, budget)
        levels.append(rec)
        cur = nxt
        chain.append(tuple(sorted(cur, key=id_key)))
    report = DecompositionReport(scene, tuple(chain), levels, _pigeonhole(levels),
                                 notes={"hook_source": HOOK_SOURCE})
    ok, log = f3_analysis(report)
    report.f3_verdict = ok
    report.f3_log = log
    return report


def _hook_boundary(shape: LShape, sups: list):
    xs = []
    for t in sups:
        for part in t.parts:
            piece = seg_intersection(shape.h, part)
            if piece is not None:
                xs.append(piece.x2)
    return max(xs) if xs else None


def f3_analysis(report: DecompositionReport) -> tuple[bool, list]:
    """Verdict plus a per-pair log of how the members of the final family cross."""
    final = report.final_family
    if not final or report.pigeonhole is None:
        return True, []
    _, j = report.pigeonhole
    rec = report.levels[j]
    level_scene = report.scene.restricted(report.chain[j])
    if rec.k == 5:
        level_scene = reflect_diagonal(level_scene)
        sup_ids = rec.v_supports
    else:
        sup_ids = rec.h_supports
    shapes = level_scene.shape_map()
    sups = [shapes[i] for i in sorted(sup_ids, key=id_key)]
    members = [shapes[i] for i in final]
    bounds = {}
    for m in members:
        b = _hook_boundary(m, sups)
        if b is None:
            raise HookUndefined(f"{m.id!r} meets no support of level {j}")
        bounds[m.id] = b
    bad = {(a, b) for a, b, _ in lr_crossing_violations(members, bounds)}
    g = level_scene.graph.induced(final)
    log = []
    for a, b in g.edge_list():
        kind = "other" if (a, b) in bad or (b, a) in bad else "v-hook"
        log.append((a, b, kind))
    return not bad, log


def f3_final_check(report: DecompositionReport) -> bool:
    return f3_analysis(report)[0]
