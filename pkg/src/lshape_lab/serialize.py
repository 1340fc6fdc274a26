"""JSON scene files, JSON reports, TSV tables and DIMACS export.

Rationals are written as bare integers or ``"p/q"`` strings.  Field order is
fixed, so equal objects always serialize to equal bytes.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .errors import FormatError, LShapeLabError
from .geom import GroundSegment, LShape, Point, Seg, id_key, make_lshape, rat
from .graph import Coloring, IntersectionGraph, dimacs_lines
from .keylemma.instance import GroundedInstance
from .scene import Scene

SCHEMA_VERSION = 1
TSV_COLUMNS = ("k", "n", "chi_lower", "chi_exact_or_bound", "colors_used", "runtime_ms")


def format_rat(v):
    v = rat(v)
    if isinstance(v, int):
        return v
    return f"{v.numerator}/{v.denominator}"


def parse_rat(v):
    if isinstance(v, bool) or v is None:
        raise FormatError(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return rat(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational string {v!r}") from exc
    raise FormatError(f"rationals must be integers or 'p/q' strings, got {v!r}")


# -- scene files --------------------------------------------------------------

def _shape_dict(s: LShape) -> dict:
    return {"id": s.id, "corner": [format_rat(s.cx), format_rat(s.cy)],
            "right_x": format_rat(s.right_x), "top_y": format_rat(s.top_y)}


def scene_to_dict(obj: Scene | GroundedInstance) -> dict:
    grounded = isinstance(obj, GroundedInstance)
    return {
        "ground_y": format_rat(obj.ground_y) if grounded else None,
        "shapes": [_shape_dict(s) for s in obj.shapes],
        "segments": [{"id": g.id, "x": format_rat(g.x), "y_top": format_rat(g.y_top)}
                     for g in (obj.segments if grounded else ())],
    }


def scene_from_dict(doc) -> Scene | GroundedInstance:
    if not isinstance(doc, dict) or "shapes" not in doc:
        raise FormatError("scene file must be an object with a 'shapes' list")
    try:
        shapes = []
        for item in doc["shapes"]:
            x, y = item["corner"]
            shapes.append(make_lshape(str(item["id"]), Point(parse_rat(x), parse_rat(y)),
                                      parse_rat(item["right_x"]), parse_rat(item["top_y"])))
        ground = doc.get("ground_y")
        segs = doc.get("segments") or []
        if ground is None:
            if segs:
                raise FormatError("segments need a ground_y")
            return Scene(tuple(shapes))
        g = parse_rat(ground)
        segments = [GroundSegment(str(d["id"]), parse_rat(d["x"]), g, parse_rat(d["y_top"])) for d in segs]
        return GroundedInstance(g, tuple(shapes), tuple(segments))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed scene file: {exc!r}") from exc
    except LShapeLabError as exc:
        raise FormatError(f"invalid geometry: {exc}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def dump_scene(obj: Scene | GroundedInstance) -> str:
    return dumps(scene_to_dict(obj))


def load_scene(text: str) -> Scene | GroundedInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not JSON: {exc}") from exc
    return scene_from_dict(doc)


def read_scene(path) -> Scene | GroundedInstance:
    return load_scene(Path(path).read_text(encoding="utf-8"))


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- reports ------------------------------------------------------------------

def jsonable(x):
    """Plain JSON value for report content (sets become id-sorted lists)."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return format_rat(x)
    if isinstance(x, float):
        return x
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, Point):
        return [format_rat(x.x), format_rat(x.y)]
    if isinstance(x, Seg):
        return [format_rat(c) for c in (x.x1, x.y1, x.x2, x.y2)]
    if isinstance(x, (LShape, GroundSegment)):
        return x.id
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x, key=_sort_key)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if dataclasses.is_dataclass(x):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x) if not f.name.startswith("_")}
    return str(x)


def _sort_key(v):
    return id_key(v) if isinstance(v, str) else (1, repr(v))


def coloring_dict(col: Coloring | None, proper: bool | None = None) -> dict | None:
    if col is None:
        return None
    out = {"colors": col.color_count}
    if proper is not None:
        out["proper"] = proper
    out["assignment"] = {str(k): col.assignment[k] for k in sorted(col.assignment, key=_sort_key)}
    return out


def certificate_dict(cert) -> dict:
    chk = cert.chromatic_check
    return {
        "step": cert.step,
        "accepted": cert.accepted,
        "condition_now_holds": cert.condition_now_holds,
        "prior_conditions_hold": cert.prior_conditions_hold,
        "graph_relation": cert.graph_relation.value,
        "graph_relation_ok": cert.graph_relation_ok,
        "triangle_free_after": cert.triangle_free_after,
        "chromatic_check": None if chk is None else jsonable(chk),
        "partition": jsonable(cert.partition),
        "node_budget": cert.node_budget,
        "notes": jsonable(cert.notes),
    }


def pipeline_report_dict(report) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "keylemma",
        "mode": report.mode,
        "start": report.start,
        "accepted": report.accepted,
        "final_verdict": report.final_verdict,
        "failure": report.failure,
        "coloring": coloring_dict(report.coloring, report.coloring_proper),
        "steps": [certificate_dict(c) for c in report.certificates],
        "class_runs": [
            {"index": r.index, "shape_ids": list(r.shape_ids), "accepted": r.accepted,
             "failure": r.failure, "final_ok": r.final_ok,
             "steps": [certificate_dict(c) for _, c in r.steps]}
            for r in report.class_runs
        ],
    }


def decomposition_report_dict(report) -> dict:
    levels = []
    for rec in report.levels:
        levels.append({
            "level": rec.level,
            "pivot": {"id": rec.pivot.id, "method": rec.pivot.method, "score": rec.pivot.score},
            "h_supports": jsonable(rec.h_supports),
            "v_supports": jsonable(rec.v_supports),
            "classes": [jsonable(c) for c in rec.classes],
            "k": rec.k,
            "k_method": rec.k_method,
            "cover_ok": rec.cover_ok,
            "supports_independent": rec.supports_independent,
            "preps": {str(c): {"reflected": p.reflected, "ok": p.ok, "dropped": list(p.dropped),
                               "instance": scene_to_dict(p.instance)}
                      for c, p in sorted(rec.preps.items())},
            "grounded": {str(c): {"accepted": r.accepted, "final_verdict": r.final_verdict,
                                  "colors": r.coloring.color_count if r.coloring else None}
                         for c, r in sorted(rec.grounded.items())},
            "chromatic": jsonable(rec.chromatic),
            "accepted": rec.accepted,
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "decomposition",
        "accepted": report.accepted,
        "chain": [list(c) for c in report.chain],
        "pigeonhole": list(report.pigeonhole) if report.pigeonhole else None,
        "f3_verdict": report.f3_verdict,
        "f3_log": [list(e) for e in report.f3_log],
        "notes": jsonable(report.notes),
        "levels": levels,
    }


# -- tables and graphs ----------------------------------------------------------

def tsv(rows: list[dict], columns=TSV_COLUMNS) -> str:
    lines = ["\t".join(columns)]
    lines += ["\t".join(str(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln]
    if not lines:
        return []
    head = lines[0].split("\t")
    return [dict(zip(head, ln.split("\t"))) for ln in lines[1:]]


def dimacs(g: IntersectionGraph) -> str:
    return "\n".join(dimacs_lines(g)) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[tuple[int, int]]]:
    n, edges = None, []
    for ln in text.splitlines():
        parts = ln.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise FormatError(f"unexpected DIMACS line {ln!r}")
    if n is None:
        raise FormatError("DIMACS problem line missing")
    return n, edges
