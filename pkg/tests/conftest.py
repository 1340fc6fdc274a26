import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest

from lshape_lab.gen import GenParams, random_grounded
from lshape_lab.geom import lshape
from lshape_lab.graph import IntersectionGraph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Reference pairs for configurations (a)..(h), scaled by 10: (cx, cy, right_x, top_y) for left and right shape.
FIG1_PAIRS = {
    "a": ((0, 2, 10, 8), (2, 0, 8, 10)),
    "b": ((0, 2, 8, 8), (2, 0, 10, 10)),
    "c": ((0, 2, 8, 10), (2, 0, 10, 8)),
    "d": ((0, 2, 10, 10), (2, 0, 8, 8)),
    "e": ((0, 0, 10, 8), (2, 2, 8, 10)),
    "f": ((0, 0, 8, 8), (2, 2, 10, 10)),
    "g": ((0, 0, 8, 10), (2, 2, 10, 8)),
    "h": ((0, 0, 10, 10), (2, 2, 8, 8)),
}


def fig1_pair(letter):
    l, r = FIG1_PAIRS[letter]
    return lshape(f"{letter}1", *l), lshape(f"{letter}2", *r)


def staircase():
    return [lshape("s0", 0, 5, 30, 30), lshape("s1", 2, 3, 28, 25), lshape("s2", 4, 1, 26, 20)]


def path5():
    """Five shapes whose intersection graph is the path p0-p1-p2-p3-p4."""
    return [lshape(f"p{i}", 3 * i, 10 - 2 * i, 3 * i + 4, 13 - 2 * i) for i in range(5)]


def random_graph(rng: random.Random, n: int, p: float) -> IntersectionGraph:
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    return IntersectionGraph.from_edges(range(n), edges)


def brute_chi(g: IntersectionGraph) -> int:
    """Exhaustive search: plain backtracking over all assignments for k = 1, 2, ..."""
    verts = list(g.vertices)
    if not verts:
        return 0
    index = {v: i for i, v in enumerate(verts)}
    earlier = [[index[w] for w in g.adj[v] if index[w] < i] for i, v in enumerate(verts)]

    def colorable(k, colors):
        i = len(colors)
        if i == len(verts):
            return True
        for c in range(k):
            if all(colors[j] != c for j in earlier[i]):
                colors.append(c)
                if colorable(k, colors):
                    return True
                colors.pop()
        return False

    k = 1
    while not colorable(k, []):
        k += 1
    return k


def bfs_dist2(g: IntersectionGraph, v):
    dist = {v: 0}
    frontier = [v]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return {u for u, d in dist.items() if d == 2}


def petersen() -> IntersectionGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return IntersectionGraph.from_edges(range(10), outer + spokes + inner)


def cycle(n: int) -> IntersectionGraph:
    return IntersectionGraph.from_edges(range(n), [(i, (i + 1) % n) for i in range(n)])


def grounded_case(seed: int, n: int):
    """Random grounded instance with enough segments for n shapes (at most 15)."""
    m = min(15, max(2, n // 6) + seed % 5)
    return random_grounded(GenParams(seed=seed, n=n), m)


def _gaps(coords, lo, hi):
    cuts = sorted({c for c in coords if lo < c < hi} | {lo, hi})
    return [(a, b) for a, b in zip(cuts, cuts[1:]) if b - a > 0]


def random_valid_cut(inst, rng: random.Random):
    """A cut segment that crosses no member, in a random gap, at half-integer offsets.

    Returns (orientation_name, fixed_coordinate, lo, hi).
    """
    xs = [c for s in inst.shapes for c in (s.cx, s.right_x)] + [g.x for g in inst.segments]
    ys = [c for s in inst.shapes for c in (s.cy, s.top_y)] + [g.y_top for g in inst.segments]
    x_lo, x_hi = min(xs, default=0) - 3, max(xs, default=0) + 3
    y_lo, y_hi = max(inst.ground_y, min(ys, default=1) - 3), max(ys, default=1) + 3
    half = Fraction(1, 2)
    while True:
        if rng.random() < 0.5:
            y = rng.randint(y_lo, y_hi - 1) + half
            blocked = [s.cx for s in inst.shapes if s.cy <= y <= s.top_y]
            blocked += [g.x for g in inst.segments if g.y_top >= y]
            a, b = rng.choice(_gaps(blocked, x_lo, x_hi))
            x1, x2 = sorted(rng.sample(_half_points(a, b), 2)) if b - a > 1 else (None, None)
            if x1 is not None:
                return "H", y, x1, x2
        else:
            x = rng.randint(x_lo, x_hi - 1) + half
            blocked = [s.cy for s in inst.shapes if s.cx <= x <= s.right_x] + [inst.ground_y]
            a, b = rng.choice(_gaps(blocked, inst.ground_y, y_hi))
            y1, y2 = sorted(rng.sample(_half_points(a, b), 2)) if b - a > 1 else (None, None)
            if y1 is not None:
                return "V", x, y1, y2


def _half_points(a, b):
    return [Fraction(2 * i + 1, 2) for i in range(int(a), int(b))]


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
