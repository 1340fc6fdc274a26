"""Acceptance criteria 1-8, one test each, with a pass/fail line per criterion."""

import random
import time

from lshape_lab.cli import main
from lshape_lab.decompose import run_decomposition
from lshape_lab.errors import BudgetExceeded
from lshape_lab.gen import GenParams, random_scene, tower
from lshape_lab.geom import classify, lshapes_intersect
from lshape_lab.graph import chi_exact, dist2, is_proper, is_triangle_free
from lshape_lab.keylemma.conditions import check_condition
from lshape_lab.keylemma.instance import invariant_report, invariants_hold
from lshape_lab.keylemma.pipeline import final_structure_ok, run_pipeline
from lshape_lab.keylemma.surgery import Orientation, default_delta, horizontal_cut, shift_cut, vertical_cut
from lshape_lab.serialize import dump_scene, load_scene, parse_tsv, read_scene

from conftest import (
    ACCEPTANCE_LINES, FIXTURES, bfs_dist2, brute_chi, grounded_case, random_graph, random_valid_cut,
)


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_criterion_1_fig1_golden():
    t0 = time.perf_counter()
    scene = read_scene(FIXTURES / "fig1_pairs.json")
    shapes = scene.shape_map()
    letters, crossing = [], set()
    for letter in "abcdefgh":
        a, b = shapes[f"{letter}1"], shapes[f"{letter}2"]
        letters.append(classify(a, b).letter)
        if lshapes_intersect(a, b):
            crossing.add(letter)
    elapsed = time.perf_counter() - t0
    ok = letters == list("abcdefgh") and crossing == set("abcd") and elapsed < 1
    record(1, ok, f"classes={''.join(letters)} crossing={''.join(sorted(crossing))} {elapsed:.3f}s")
    assert ok


def test_criterion_2_oracle_equivalence():
    rng = random.Random(2)
    t0 = time.perf_counter()
    chi_ok = 0
    for _ in range(500):
        g = random_graph(rng, rng.randint(1, 8), rng.random())
        chi, col = chi_exact(g)
        chi_ok += chi == brute_chi(g) and is_proper(g, col)
    d2_ok = 0
    for _ in range(300):
        g = random_graph(rng, rng.randint(1, 14), rng.random() * 0.5)
        d2_ok += all(dist2(g, v) == bfs_dist2(g, v) for v in g.vertices)
    elapsed = time.perf_counter() - t0
    ok = chi_ok == 500 and d2_ok == 300 and elapsed < 120
    record(2, ok, f"chi {chi_ok}/500, dist2 {d2_ok}/300, {elapsed:.1f}s")
    assert ok


def _cut(inst, spec):
    kind, c, lo, hi = spec
    members = list(inst.shapes) + list(inst.segments)
    if kind == "H":
        return horizontal_cut(lo, hi, c, default_delta(members, Orientation.HORIZONTAL_SHIFT))
    return vertical_cut(c, lo, hi, default_delta(members, Orientation.VERTICAL_SHIFT, inst.ground_y))


def test_criterion_3_surgery_invariance():
    rng = random.Random(3)
    t0 = time.perf_counter()
    good = 0
    for trial in range(500):
        inst = grounded_case(1000 + trial, rng.randint(1, 50))
        out = shift_cut(inst, _cut(inst, random_valid_cut(inst, rng)))
        good += out.graph.edges() == inst.graph.edges() and not any(invariant_report(out).values())
    elapsed = time.perf_counter() - t0
    ok = good == 500 and elapsed < 120
    record(3, ok, f"{good}/500 cuts kept edges and invariants, {elapsed:.1f}s")
    assert ok


def _chain_problems(inst, run) -> list[str]:
    problems = []
    prev = inst.restricted(run.shape_ids)
    for snap, cert in run.steps:
        k = cert.step
        if not invariants_hold(snap):
            problems.append(f"step {k}: invariants")
        problems += [f"step {k}: condition {j}" for j in range(1, k + 1) if check_condition(snap, j)]
        before, after = prev.shape_graph().edges(), snap.shape_graph().edges()
        if k in (3, 4) and before != after:
            problems.append(f"step {k}: graph changed")
        if k in (6, 7) and not (before <= after and is_triangle_free(snap.graph)):
            problems.append(f"step {k}: not a triangle-free edge superset")
        if k == 5:
            g = prev.shape_graph()
            removed = cert.notes["removed"]
            if any(g.has_edge(a, b) for a in removed for b in removed):
                problems.append("step 5: removed set not independent")
        prev = snap
    if not final_structure_ok(run.final):
        problems.append("final: configurations other than (d)/(h)")
    return problems


def test_criterion_4_pipeline_soundness():
    t0 = time.perf_counter()
    problems, small, verified, unverified = [], 0, 0, 0
    for seed in range(200):
        n = 4 + (seed * 37) % 97
        inst = grounded_case(seed, n)
        report = run_pipeline(inst)
        if not report.accepted:
            problems.append(f"seed {seed}: rejected")
        if not is_proper(inst.shape_graph(), report.coloring):
            problems.append(f"seed {seed}: lifted colouring not proper")
        for run in report.class_runs:
            problems += [f"seed {seed} {p}" for p in _chain_problems(inst, run)]
            if n <= 40:
                for _, cert in run.steps:
                    chk = cert.chromatic_check
                    if chk is None:
                        continue
                    if chk.skipped:
                        unverified += 1
                    elif chk.inequality_ok:
                        verified += 1
                    else:
                        problems.append(f"seed {seed} step {cert.step}: {chk.inequality} fails")
        small += n <= 40
    elapsed = time.perf_counter() - t0
    ok = not problems and unverified == 0 and elapsed < 600
    record(4, ok, f"200 instances, {small} with n<=40: {verified} chromatic checks verified, "
                  f"{unverified} unverified, {len(problems)} problems, {elapsed:.1f}s")
    assert ok, problems[:10]


def test_criterion_5_towers():
    parts, ok = [], True
    for k in (1, 2, 3):
        t0 = time.perf_counter()
        g = tower(k).graph
        chi = chi_exact(g)[0]
        good = is_triangle_free(g) and chi == k and time.perf_counter() - t0 < 300
        ok &= good
        parts.append(f"k={k}: n={len(g)} chi={chi}")
    t0 = time.perf_counter()
    g4 = tower(4).graph
    ok &= is_triangle_free(g4)
    try:
        chi4 = chi_exact(g4, 10**7)[0]
        parts.append(f"k=4: n={len(g4)} chi={chi4} ({time.perf_counter() - t0:.1f}s)")
    except BudgetExceeded:
        parts.append(f"k=4: n={len(g4)} chi>=4 undecided within budget")
    record(5, ok, "; ".join(parts))
    assert ok


def test_criterion_6_decomposition():
    t0 = time.perf_counter()
    failures = []
    report = run_decomposition(tower(3))
    if not report.accepted:
        failures.append("tower(3)")
    depth, pairs = 0, 0
    for seed in range(50):
        scene = random_scene(GenParams(seed=seed, n=20 + (seed * 37) % 101, density=0.5))
        rep = run_decomposition(scene)
        depth = max(depth, sum(1 for c in rep.chain[1:] if c))
        pairs += rep.pigeonhole is not None
        if not rep.accepted:
            failures.append(f"seed {seed}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 900
    record(6, ok, f"tower(3) + 50 random scenes, rejected={failures}, deepest nonempty level={depth}, "
                  f"pigeonhole pairs={pairs} (chains end before three defined levels), {elapsed:.1f}s")
    assert ok


def test_criterion_7_growth(tmp_path):
    out = tmp_path / "growth.tsv"
    assert main(["experiment", "--max-k", "3", "-o", str(out)]) == 0
    rows = parse_tsv(out.read_text())
    ns = [int(r["n"]) for r in rows]
    chis = [int(r["chi_lower"]) for r in rows]
    ratios = [b / a for a, b in zip(ns, ns[1:])]
    ok = (chis == [1, 2, 3] and all(b > a for a, b in zip(ns, ns[1:]))
          and all(b > a for a, b in zip(ratios, ratios[1:])))
    record(7, ok, f"n={ns} chi_lower={chis}")
    assert ok


def test_criterion_8_determinism(tmp_path):
    t0 = time.perf_counter()
    dirs = [tmp_path / "a", tmp_path / "b"]
    for d in dirs:
        for kind in ("scene", "grounded"):
            assert main(["gen", "corpus", "--kind", kind, "--count", "20", "--n", "25", "--seed", "77",
                         "-o", str(d)]) == 0
    names = sorted(p.name for p in dirs[0].iterdir())
    same = names == sorted(p.name for p in dirs[1].iterdir()) and all(
        (dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() for n in names)
    round_trips = 0
    for seed in range(100):
        obj = random_scene(GenParams(seed=seed, n=seed % 40)) if seed % 2 else grounded_case(seed, 1 + seed % 40)
        text = dump_scene(obj)
        round_trips += load_scene(text) == obj and dump_scene(load_scene(text)) == text
    elapsed = time.perf_counter() - t0
    ok = same and len(names) == 40 and round_trips == 100 and elapsed < 60
    record(8, ok, f"corpus identical={same} ({len(names)} files), round trips {round_trips}/100, {elapsed:.1f}s")
    assert ok
