"""Reductions establishing Conditions 1-7, with per-step certificates.

Each reduction takes a snapshot and returns a new one.  The certificate
records which conditions hold afterwards, how the intersection graph of
L and S changed, whether it is still triangle-free, and (for small
families) whether the chromatic inequality the step relies on holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable

from ..errors import BudgetExceeded, InvariantViolation, NonTermination, PreconditionViolated
from ..geom import ConfigClass, LShape, id_key, seg_intersection
from ..graph import (
    DEFAULT_NODE_BUDGET, Coloring, IntersectionGraph, chi_exact, dsatur, is_proper,
    is_triangle_free,
)
from .conditions import (
    check_condition, config_pairs, crosses_h, handle_of, leftmost_support, lr_crossing_violations,
    rightmost_support,
)
from .instance import GroundedInstance, replace_shapes
from .surgery import Orientation, default_delta, horizontal_cut, shift_cut, vertical_cut

CHROMATIC_LIMIT = 40
FINAL_LETTERS = frozenset({ConfigClass.D, ConfigClass.H})
EXCLUDED_LETTERS = tuple(c for c in ConfigClass if c not in FINAL_LETTERS and c is not ConfigClass.BBOX_DISJOINT)


class GraphRelation(enum.Enum):
    IDENTICAL = "IDENTICAL"
    EDGE_SUPERSET = "EDGE_SUPERSET"
    EDGE_SUBSET = "EDGE_SUBSET"
    VERTEX_SUBSET = "VERTEX_SUBSET"
    INDEPENDENT_REMOVED = "INDEPENDENT_REMOVED"


@dataclass(frozen=True)
class ChromaticCheck:
    chi_before: int | None
    chi_after: int | None
    inequality: str
    inequality_ok: bool | None
    skipped: str = ""


@dataclass(frozen=True)
class ReductionCertificate:
    step: int
    condition_now_holds: bool
    prior_conditions_hold: bool
    graph_relation: GraphRelation
    graph_relation_ok: bool
    triangle_free_after: bool
    chromatic_check: ChromaticCheck | None
    partition: tuple[tuple, ...] | None
    node_budget: int
    notes: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        chrom_ok = self.chromatic_check is None or self.chromatic_check.inequality_ok is not False
        return (self.condition_now_holds and self.prior_conditions_hold and self.graph_relation_ok
                and self.triangle_free_after and chrom_ok and self.notes.get("lr_ok", True) is not False)


# -- helpers --------------------------------------------------------------

def _classes(assignment: dict) -> tuple[tuple, ...]:
    groups: dict = {}
    for v, c in assignment.items():
        groups.setdefault(c, []).append(v)
    return tuple(tuple(sorted(groups[c], key=id_key)) for c in sorted(groups))


def handle_graph(inst: GroundedInstance) -> IntersectionGraph:
    """Intersection graph of the handles of the shapes in ``inst``."""
    handles = [(s.id, handle_of(inst, s).parts) for s in inst.shapes]
    edges = []
    for i, (a, pa) in enumerate(handles):
        for b, pb in handles[i + 1:]:
            if any(seg_intersection(x, y) is not None for x in pa for y in pb):
                edges.append((a, b))
    return IntersectionGraph.from_edges([s.id for s in inst.shapes], edges)


def _relation_ok(rel: GraphRelation, before: GroundedInstance, after: GroundedInstance, removed=()) -> bool:
    gb, ga = before.graph, after.graph
    vb, va = set(gb.vertices), set(ga.vertices)
    if rel is GraphRelation.IDENTICAL:
        return vb == va and gb.edges() == ga.edges()
    if rel is GraphRelation.EDGE_SUPERSET:
        return vb == va and gb.edges() <= ga.edges()
    if rel is GraphRelation.EDGE_SUBSET:
        return vb == va and ga.edges() <= gb.edges()
    induced_ok = va <= vb and ga.edges() == gb.induced(va).edges()
    if rel is GraphRelation.VERTEX_SUBSET:
        return induced_ok
    removed = set(removed)
    independent = all(not (gb.adj[r] & removed) for r in removed)
    return induced_ok and independent and va == vb - removed


_INEQUALITY: dict[int, tuple[str, Callable]] = {
    1: ("chi_before <= classes * chi_after", lambda b, a, m: b <= m * a),
    2: ("chi_after <= chi_before", lambda b, a, m: a <= b),
    3: ("chi_before == chi_after", lambda b, a, m: a == b),
    4: ("chi_before == chi_after", lambda b, a, m: a == b),
    5: ("chi_before <= chi_after + 1", lambda b, a, m: b <= a + 1),
    6: ("chi_before <= chi_after", lambda b, a, m: b <= a),
    7: ("chi_before <= chi_after", lambda b, a, m: b <= a),
}


def _chromatic(step: int, before: GroundedInstance, after: GroundedInstance, budget: int,
               limit: int, classes: int = 1) -> ChromaticCheck:
    text, holds = _INEQUALITY[step]
    if len(before.shapes) > limit:
        return ChromaticCheck(None, None, text, None, f"more than {limit} shapes")
    try:
        b = chi_exact(before.shape_graph(), budget)[0]
        a = chi_exact(after.shape_graph(), budget)[0]
    except BudgetExceeded as exc:
        return ChromaticCheck(None, None, text, None, str(exc))
    return ChromaticCheck(b, a, text, holds(b, a, classes))


def _delta(inst: GroundedInstance, orientation: Orientation):
    return default_delta(list(inst.shapes) + list(inst.segments), orientation, inst.ground_y)


# -- the seven reductions ---------------------------------------------------

def _reduce1(inst, budget, limit):
    hg = handle_graph(inst)
    classes = _classes(dsatur(hg).assignment)
    if not classes:
        return inst, GraphRelation.VERTEX_SUBSET, (), {"kept_class": None, "classes": 0}
    how = "largest"
    sizes = [len(c) for c in classes]
    kept = sizes.index(max(sizes))
    if len(inst.shapes) <= limit:
        try:
            g = inst.shape_graph()
            chis = [chi_exact(g.induced(c), budget)[0] for c in classes]
            kept, how = chis.index(max(chis)), "chi_exact"
        except BudgetExceeded:
            pass
    notes = {"kept_class": kept, "classes": len(classes), "selection": how,
             "handle_coloring_proper": is_proper(hg, dict((v, i) for i, c in enumerate(classes) for v in c))}
    return inst.restricted(classes[kept]), GraphRelation.VERTEX_SUBSET, classes, notes


def hook_boundaries(inst: GroundedInstance) -> dict:
    return {s.id: rightmost_support(inst, s).x for s in inst.shapes}


def _reduce2(inst, budget, limit):
    bound = hook_boundaries(inst)
    trimmed = {s.id: s.replace(right_x=bound[s.id]) for s in inst.shapes if s.right_x > bound[s.id]}
    out = replace_shapes(inst, trimmed)
    partition = _classes(dsatur(out.shape_graph()).assignment)
    notes = {"trimmed": sorted(trimmed, key=id_key)}
    notes.update(_lr_notes(inst, partition, bound))
    return out, GraphRelation.EDGE_SUBSET, partition, notes


def _lr_notes(inst, partition, bound) -> dict:
    shapes = inst.shape_map()
    failures = []
    for cls in partition:
        failures += lr_crossing_violations([shapes[i] for i in cls], bound)
    return {"lr_ok": not failures, "lr_failures": [(a, b) for a, b, _ in failures]}


def _reduce3(inst, budget, limit):
    moves = []
    for _ in range(len(inst.shapes) ** 2 + 1):
        viol = check_condition(inst, 3)
        if not viol:
            return inst, GraphRelation.IDENTICAL, None, {"shifts": moves}
        owner = min((v.members[0] for v in viol), key=id_key)
        ell = inst.shape(owner)
        x_ls = leftmost_support(inst, ell).x
        inst = shift_cut(inst, horizontal_cut(ell.cx, x_ls, ell.cy, _delta(inst, Orientation.HORIZONTAL_SHIFT)))
        moves.append(owner)
    raise NonTermination("horizontal shifts did not settle Condition 3")


def _top(m):
    return m.top_y if isinstance(m, LShape) else m.y_top


def left4_pairs(inst: GroundedInstance) -> list[tuple]:
    """Pairs (l, m, y) with m crossing h(l) and a corner left of v(l) below height y."""
    members = inst.member_map()
    corners = [s.corner for s in inst.shapes]
    out = []
    for ell in inst.shapes:
        for mid in sorted(inst.graph.adj[ell.id], key=id_key):
            m = members[mid]
            if not crosses_h(m, ell):
                continue
            y2 = min(ell.top_y, _top(m))
            if any(q.x < ell.cx and ell.cy <= q.y <= y2 for q in corners):
                out.append((ell.id, mid, y2))
    return out


def _reduce4(inst, budget, limit):
    moves = []
    bound = len(inst.shapes) * (len(inst.shapes) + len(inst.segments)) + 1
    for _ in range(bound):
        if not check_condition(inst, 4):
            return inst, GraphRelation.IDENTICAL, None, {"shifts": moves}
        pairs = left4_pairs(inst)
        if not pairs:
            raise InvariantViolation("condition 4", "violation without a matching shift pair")
        lid, mid, y2 = pairs[0]
        ell = inst.shape(lid)
        inst = shift_cut(inst, vertical_cut(ell.cx, ell.cy, y2, _delta(inst, Orientation.VERTICAL_SHIFT)))
        moves.append((lid, mid))
    raise NonTermination("vertical shifts did not settle Condition 4")


def _reduce5(inst, budget, limit):
    removed = sorted({v.members[0] for v in check_condition(inst, 5)}, key=id_key)
    out = inst.restricted(set(inst.shape_ids) - set(removed))
    return out, GraphRelation.INDEPENDENT_REMOVED, None, {"removed": removed}


def _pull_loop(inst, letters, attr, target, label):
    lines = {getattr(s, attr) for s in inst.shapes}
    bound = len(inst.shapes) * max(1, len(lines)) + 1
    changes = []
    for _ in range(bound):
        pairs = config_pairs(inst, letters)
        if not pairs:
            return inst, changes
        cands = []
        for a, b, _ in pairs:
            l1, l2 = (a, b) if a.cy < b.cy else (b, a)
            cands.append(((getattr(l1, attr), id_key(l1.id), id_key(l2.id)), l1, l2))
        _, l1, l2 = min(cands, key=lambda c: c[0])
        new = target(inst, l2)
        if not new > getattr(l1, attr):
            raise InvariantViolation(label, f"pulling {l1.id!r} towards {l2.id!r} would not extend it")
        inst = replace_shapes(inst, {l1.id: l1.replace(**{attr: new})})
        changes.append((l1.id, l2.id, str(new)))
    raise NonTermination(f"{label} did not reach a fixpoint within {bound} pulls")


def _reduce6(inst, budget, limit):
    out, changes = _pull_loop(inst, (ConfigClass.E, ConfigClass.F), "top_y",
                              lambda i, l2: l2.top_y, "top-endpoint pulls")
    return out, GraphRelation.EDGE_SUPERSET, None, {"pulls": changes}


def _reduce7(inst, budget, limit):
    out, changes = _pull_loop(inst, (ConfigClass.G,), "right_x",
                              lambda i, l2: rightmost_support(i, l2).x, "right-endpoint pulls")
    return out, GraphRelation.EDGE_SUPERSET, None, {"pulls": changes}


_REDUCERS = {1: _reduce1, 2: _reduce2, 3: _reduce3, 4: _reduce4, 5: _reduce5, 6: _reduce6, 7: _reduce7}


def reduce_condition(inst: GroundedInstance, k: int, *, node_budget: int = DEFAULT_NODE_BUDGET,
                     chromatic_limit: int = CHROMATIC_LIMIT, check_input: bool = True
                     ) -> tuple[GroundedInstance, ReductionCertificate]:
    """Establish condition ``k`` on an instance satisfying conditions ``1..k-1``."""
    if k not in _REDUCERS:
        raise ValueError(f"step must be 1..7, got {k}")
    if check_input:
        failed = {j: v for j in range(1, k) if (v := check_condition(inst, j))}
        if failed:
            raise PreconditionViolated(k, failed)
    out, rel, partition, notes = _REDUCERS[k](inst, node_budget, chromatic_limit)
    holds = {j: not check_condition(out, j) for j in range(1, k + 1)}
    classes = len(partition) if (k == 1 and partition) else 1
    cert = ReductionCertificate(
        step=k,
        condition_now_holds=holds[k],
        prior_conditions_hold=all(holds[j] for j in range(1, k)),
        graph_relation=rel,
        graph_relation_ok=_relation_ok(rel, inst, out, notes.get("removed", ())),
        triangle_free_after=is_triangle_free(out.graph),
        chromatic_check=_chromatic(k, inst, out, node_budget, chromatic_limit, classes),
        partition=partition,
        node_budget=node_budget,
        notes=notes,
    )
    return out, cert


def final_structure_ok(inst: GroundedInstance) -> bool:
    """Only configurations (d) and (h) remain among bbox-intersecting pairs."""
    return not config_pairs(inst, EXCLUDED_LETTERS)


# -- driver -----------------------------------------------------------------

@dataclass
class ClassRun:
    index: int
    shape_ids: tuple
    steps: list = field(default_factory=list)
    failure: str | None = None
    final_ok: bool = False
    coloring: dict | None = None

    @property
    def final(self) -> GroundedInstance | None:
        return self.steps[-1][0] if self.steps else None

    @property
    def accepted(self) -> bool:
        return self.failure is None and self.final_ok and all(c.accepted for _, c in self.steps)


@dataclass
class PipelineReport:
    input: GroundedInstance
    steps: list
    class_runs: list
    final_verdict: bool
    coloring: Coloring | None
    coloring_proper: bool | None
    mode: str = "coloring"
    start: int = 1
    failure: str | None = None

    @property
    def certificates(self) -> list[ReductionCertificate]:
        return [c for _, c in self.steps]

    @property
    def accepted(self) -> bool:
        return (self.failure is None and self.final_verdict and self.coloring_proper is not False
                and all(c.accepted for c in self.certificates)
                and all(r.accepted for r in self.class_runs))


def _failed_certificate(exc: PreconditionViolated, inst: GroundedInstance, budget: int) -> ReductionCertificate:
    failed = {j: [list(v.members) for v in vs] for j, vs in exc.failed.items()}
    return ReductionCertificate(exc.step, False, False, GraphRelation.IDENTICAL, False,
                                is_triangle_free(inst.graph), None, None, budget,
                                {"failed_conditions": failed, "error": str(exc)})


def _run_chain(run: ClassRun, inst: GroundedInstance, first: int, budget: int, limit: int) -> None:
    cur = inst
    trusted = False
    for k in range(first, 8):
        try:
            out, cert = reduce_condition(cur, k, node_budget=budget, chromatic_limit=limit,
                                         check_input=not trusted)
        except PreconditionViolated as exc:
            run.steps.append((cur, _failed_certificate(exc, cur, budget)))
            run.failure = str(exc)
            return
        run.steps.append((out, cert))
        trusted = cert.condition_now_holds and cert.prior_conditions_hold
        cur = out
    run.final_ok = final_structure_ok(cur)


def _lift(run: ClassRun, inst: GroundedInstance) -> dict:
    """Colour the final family and carry the colouring back to ``inst``."""
    final = run.final if run.steps else inst
    col = dict(dsatur(final.shape_graph()).assignment)
    chain_inputs = [inst] + [snap for snap, _ in run.steps[:-1]]
    for idx in range(len(run.steps) - 1, -1, -1):
        snap_in = chain_inputs[idx]
        cert = run.steps[idx][1]
        if cert.step == 5:
            fresh = max(col.values(), default=-1) + 1
            for r in cert.notes["removed"]:
                col[r] = fresh
        elif cert.step == 2:
            psi = _classes(col)
            notes = dict(cert.notes)
            notes.update(_lr_notes(snap_in, psi, hook_boundaries(snap_in)))
            notes["partition_source"] = "lifted final colouring"
            run.steps[idx] = (run.steps[idx][0], replace(cert, partition=psi, notes=notes))
            g = snap_in.shape_graph()
            combined = {}
            for pi, cls in enumerate(psi):
                inner = dsatur(g.induced(cls)).assignment
                for v in cls:
                    combined[v] = (pi, inner[v])
            col = combined
    return {v: (c if isinstance(c, tuple) else (c,)) for v, c in col.items()}


def run_pipeline(inst: GroundedInstance, *, node_budget: int = DEFAULT_NODE_BUDGET,
                 chromatic_limit: int = CHROMATIC_LIMIT, mode: str = "coloring",
                 start: int = 1) -> PipelineReport:
    """Run steps ``start..7``; in coloring mode every handle class is carried through."""
    if mode not in ("coloring", "analysis"):
        raise ValueError("mode must be 'coloring' or 'analysis'")
    if not 1 <= start <= 7:
        raise ValueError("start must be 1..7")
    steps: list = []
    if start == 1:
        out1, cert1 = reduce_condition(inst, 1, node_budget=node_budget, chromatic_limit=chromatic_limit)
        steps.append((out1, cert1))
        classes = cert1.partition or ()
        kept = cert1.notes["kept_class"]
    else:
        classes = (tuple(inst.shape_ids),) if inst.shapes else ()
        kept = 0
    runs = []
    for ci, cls in enumerate(classes):
        if mode == "analysis" and ci != kept:
            continue
        sub = inst.restricted(cls) if start == 1 else inst
        run = ClassRun(ci, cls)
        _run_chain(run, sub, max(start, 2), node_budget, chromatic_limit)
        if mode == "coloring" and run.failure is None:
            run.coloring = _lift(run, sub)
        runs.append(run)
        if ci == kept:
            steps.extend(run.steps)
    failure = next((r.failure for r in runs if r.failure), None)
    verdict = failure is None and all(r.final_ok for r in runs)
    coloring = proper = None
    if mode == "coloring" and failure is None:
        joint = {v: (r.index,) + c for r in runs for v, c in r.coloring.items()}
        palette = {t: i for i, t in enumerate(sorted(set(joint.values())))}
        coloring = Coloring.from_assignment({v: palette[t] for v, t in joint.items()})
        proper = is_proper(inst.shape_graph(), coloring)
    return PipelineReport(inst, steps, runs, verdict, coloring, proper, mode, start, failure)
