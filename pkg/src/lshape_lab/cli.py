"""``lshape-lab`` command line.

Exit codes: 0 success, 1 check or certificate failure, 2 usage or parse
error, 3 I/O error, 4 exact colouring ran out of budget.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import serialize as ser
from .decompose import run_decomposition
from .decompose.driver import DEFAULT_BUDGET
from .errors import BudgetExceeded, FormatError, LShapeLabError, TriangleDetected
from .gen import TOWER_MAX_K, GenParams, random_grounded, random_scene, tower
from .geom import bbox, classify, id_key, lshapes_intersect
from .graph import DEFAULT_NODE_BUDGET, chi_exact, dsatur, greedy_clique, is_proper, triangle_witness
from .keylemma.conditions import CONDITION_TEXT, check_condition
from .keylemma.instance import GroundedInstance, invariant_report
from .keylemma.pipeline import run_pipeline
from .scene import Scene

OK, FAIL, USAGE, IO, BUDGET = 0, 1, 2, 3, 4
THREADS_ENV = "LSHAPE_LAB_THREADS"


class UsageError(Exception):
    pass


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        ser.write_atomic(out, text)


def _load(path) -> Scene | GroundedInstance:
    return ser.read_scene(path)


def _load_grounded(path) -> GroundedInstance:
    obj = _load(path)
    if not isinstance(obj, GroundedInstance):
        raise FormatError(f"{path}: expected a grounded instance (ground_y is null)")
    return obj


def _load_scene(path) -> Scene:
    obj = _load(path)
    if isinstance(obj, GroundedInstance):
        return Scene(obj.shapes)
    return obj


def _params(args) -> GenParams:
    try:
        return GenParams(seed=args.seed, n=args.n, coordinate_span=args.span, density=args.density)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- gen ------------------------------------------------------------------------

def _generate(kind: str, params: GenParams, m: int, k: int):
    if kind == "scene":
        return random_scene(params)
    if kind == "grounded":
        if m < 1:
            raise UsageError("--m must be at least 1")
        return random_grounded(params, m)
    if not 1 <= k <= TOWER_MAX_K:
        raise UsageError(f"--k must lie in 1..{TOWER_MAX_K}")
    return tower(k)


def cmd_generate(args) -> int:
    obj = _generate(args.kind, _params(args), args.m, args.k)
    _emit(ser.dump_scene(obj), args.out)
    return OK


def _corpus_item(job):
    kind, seed, n, span, density, m, path = job
    obj = _generate(kind, GenParams(seed=seed, n=n, coordinate_span=span, density=density), m, 1)
    ser.write_atomic(path, ser.dump_scene(obj))
    return path


def _workers() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError as exc:
            raise UsageError(f"{THREADS_ENV} must be an integer") from exc
    return n


def cmd_corpus(args) -> int:
    if args.out in (None, "-"):
        raise UsageError("corpus needs -o DIRECTORY")
    if args.kind_of not in ("scene", "grounded"):
        raise UsageError("corpus kind must be scene or grounded")
    _params(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(args.kind_of, args.seed + i, args.n, args.span, args.density, args.m,
             str(out / f"{args.kind_of}_{i:04d}.json")) for i in range(args.count)]
    workers = min(_workers(), max(1, len(jobs)))
    if workers == 1:
        for job in jobs:
            _corpus_item(job)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            list(pool.map(_corpus_item, jobs))
    return OK


# -- check ----------------------------------------------------------------------

def _scene_invariants(scene: Scene) -> dict:
    w = triangle_witness(scene.graph)
    return {"distinct_corner_x": [], "distinct_corner_y": [],
            "triangle_free": [] if w is None else [f"triangle {tuple(w)!r}"]}


def cmd_check(args) -> int:
    obj = _load(args.path)
    what = args.what
    lines: list[str] = []
    ok = True
    if what == "invariants":
        rep = invariant_report(obj) if isinstance(obj, GroundedInstance) else _scene_invariants(obj)
        for name, problems in rep.items():
            lines.append(f"{name}\t{'ok' if not problems else 'FAIL'}")
            lines += [f"  {p}" for p in problems]
            ok &= not problems
    elif what == "triangle":
        w = triangle_witness(obj.graph)
        ok = w is None
        lines.append("triangle-free" if ok else f"triangle\t{w.a}\t{w.b}\t{w.c}")
    elif what == "conditions":
        if not isinstance(obj, GroundedInstance):
            raise FormatError("conditions need a grounded instance")
        for k in range(1, 8):
            viol = check_condition(obj, k)
            lines.append(f"condition {k}\t{'ok' if not viol else 'FAIL'}\t{CONDITION_TEXT[k]}")
            lines += [f"  {' '.join(map(str, v.members))}\t{v.detail}" for v in viol]
            ok &= not viol
    else:
        shapes = sorted(obj.shapes, key=lambda s: id_key(s.id))
        for i, a in enumerate(shapes):
            for b in shapes[i + 1:]:
                if not bbox(a).intersects(bbox(b)):
                    continue
                letter = classify(a, b)
                left, right = (a, b) if a.cx < b.cx else (b, a)
                cross = "crossing" if lshapes_intersect(a, b) else "disjoint"
                lines.append(f"{left.id}\t{right.id}\t{letter.letter}\t{cross}")
    _emit("\n".join(lines) + ("\n" if lines else ""), args.out)
    return OK if ok else FAIL


# -- color ----------------------------------------------------------------------

def cmd_color(args) -> int:
    obj = _load(args.path)
    g = obj.shape_graph() if isinstance(obj, GroundedInstance) else obj.graph
    doc = {"schema_version": ser.SCHEMA_VERSION, "kind": "coloring", "mode": args.mode}
    if args.mode == "dsatur":
        col = dsatur(g)
        doc.update(status="HEURISTIC", lower_bound=_clique_bound(g))
    else:
        try:
            chi, col = chi_exact(g, args.budget)
            doc.update(status="OPTIMAL", lower_bound=chi)
        except BudgetExceeded:
            if not args.allow_bound:
                sys.stderr.write(f"exact colouring exceeded node budget {args.budget}\n")
                return BUDGET
            col = dsatur(g)
            doc.update(status="BUDGET", lower_bound=_clique_bound(g))
    doc["coloring"] = ser.coloring_dict(col, is_proper(g, col))
    _emit(ser.dumps(doc), args.out)
    sys.stderr.write(f"{doc['status'].lower()}: {col.color_count} colours\n")
    return OK


def _clique_bound(g) -> int:
    return len(greedy_clique(g)) if g.vertices else 0


# -- pipelines ----------------------------------------------------------------------

def cmd_keylemma(args) -> int:
    inst = _load_grounded(args.path)
    report = run_pipeline(inst, node_budget=args.budget, mode=args.mode, start=args.from_step)
    _emit(ser.dumps(ser.pipeline_report_dict(report)), args.out)
    return OK if report.accepted else FAIL


def cmd_decompose(args) -> int:
    scene = _load_scene(args.path)
    try:
        report = run_decomposition(scene, args.budget)
    except TriangleDetected as exc:
        doc = {"schema_version": ser.SCHEMA_VERSION, "kind": "decomposition", "accepted": False,
               "error": str(exc), "witness": list(exc.witness)}
        _emit(ser.dumps(doc), args.out)
        return FAIL
    _emit(ser.dumps(ser.decomposition_report_dict(report)), args.out)
    return OK if report.accepted else FAIL


def experiment_rows(max_k: int, budget: int) -> list[dict]:
    rows = []
    for k in range(1, max_k + 1):
        t0 = time.perf_counter()
        scene = tower(k)
        g = scene.graph
        try:
            chi = chi_exact(g, budget)[0]
            lower, shown = chi, str(chi)
        except BudgetExceeded:
            lower = max(_clique_bound(g), 1)
            shown = f">={lower}"
        used = dsatur(g).color_count
        rows.append({"k": k, "n": len(scene), "chi_lower": lower, "chi_exact_or_bound": shown,
                     "colors_used": used, "runtime_ms": round((time.perf_counter() - t0) * 1000)})
    return rows


def plot_rows(rows: list[dict]) -> str:
    out = ["k\tn\tloglog_n\tcolors_used"]
    for r in rows:
        n = r["n"]
        ll = f"{math.log(math.log(n)):.6f}" if n > math.e else "NA"
        out.append(f"{r['k']}\t{n}\t{ll}\t{r['colors_used']}")
    return "\n".join(out) + "\n"


def cmd_experiment(args) -> int:
    if not 1 <= args.max_k <= TOWER_MAX_K:
        raise UsageError(f"--max-k must lie in 1..{TOWER_MAX_K}")
    rows = experiment_rows(args.max_k, args.budget)
    if args.format == "json":
        _emit(ser.dumps({"schema_version": ser.SCHEMA_VERSION, "kind": "experiment", "rows": rows}), args.out)
    else:
        _emit(ser.tsv(rows), args.out)
    if args.plot_data:
        ser.write_atomic(args.plot_data, plot_rows(rows))
    return OK


def cmd_export_dimacs(args) -> int:
    obj = _load(args.path)
    g = obj.shape_graph() if isinstance(obj, GroundedInstance) else obj.graph
    _emit(ser.dimacs(g), args.out)
    return OK


# -- parser -------------------------------------------------------------------------

def _out(p):
    p.add_argument("-o", "--out", default=None, help="output file (stdout when omitted)")


def _gen_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--span", type=int, default=0, help="grid lines per axis (0: sized from n)")
    p.add_argument("--density", type=float, default=0.15, help="maximum arm length as a fraction of the span")
    p.add_argument("--m", type=int, default=3, help="ground segments for grounded instances")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lshape-lab", description="L-shape intersection graph toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate scenes, grounded instances, towers or corpora")
    gsub = gen.add_subparsers(dest="kind", required=True)
    for kind in ("scene", "grounded", "tower"):
        p = gsub.add_parser(kind)
        _gen_flags(p)
        p.add_argument("--k", type=int, default=1)
        _out(p)
        p.set_defaults(func=cmd_generate)
    p = gsub.add_parser("corpus")
    _gen_flags(p)
    p.add_argument("--kind", dest="kind_of", default="scene", choices=("scene", "grounded"))
    p.add_argument("--count", type=int, default=10)
    _out(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("check", help="run a check on a scene file")
    p.add_argument("what", choices=("invariants", "triangle", "conditions", "classify-all"))
    p.add_argument("path")
    _out(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("color", help="colour the intersection graph")
    p.add_argument("mode", choices=("exact", "dsatur"))
    p.add_argument("path")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--allow-bound", action="store_true", help="fall back to DSATUR bounds on budget exhaustion")
    _out(p)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("keylemma", help="run the reduction pipeline on a grounded instance")
    p.add_argument("path")
    p.add_argument("--from-step", type=int, default=1, choices=range(1, 8))
    p.add_argument("--mode", default="coloring", choices=("coloring", "analysis"))
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    _out(p)
    p.set_defaults(func=cmd_keylemma)

    p = sub.add_parser("decompose", help="run the three-level decomposition on a scene")
    p.add_argument("path")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _out(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("experiment", help="tower size versus chromatic number table")
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--format", default="tsv", choices=("tsv", "json"))
    p.add_argument("--plot-data", default=None, help="also write k, n, log log n, colours to this file")
    _out(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("export-dimacs", help="write the intersection graph in DIMACS format")
    p.add_argument("path")
    _out(p)
    p.set_defaults(func=cmd_export_dimacs)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return USAGE
    except FormatError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return USAGE
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return IO
    except LShapeLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
