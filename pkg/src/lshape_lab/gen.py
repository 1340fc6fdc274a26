"""Instance generators.

Random families use :class:`random.Random` (Mersenne Twister) seeded from
``GenParams.seed``, so a seed reproduces the same family on every platform.
Generated coordinates follow a parity scheme: corners and ground segments
sit on even coordinates, right and top endpoints on odd ones.  That keeps
every generated family free of accidental endpoint-on-segment contacts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import AmbiguousTangency, GenerationStalled, InvariantViolation, Unsupported
from .geom import GroundSegment, LShape, Point, members_intersect
from .graph import build_graph
from .keylemma.instance import GroundedInstance
from .scene import Scene

MAX_ATTEMPTS = 500
RESTARTS = 20
TOWER_MAX_K = 4


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    n: int = 10
    coordinate_span: int = 0
    density: float = 0.15

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")
        if self.coordinate_span < 0:
            raise ValueError("coordinate_span must be non-negative")

    @property
    def span(self) -> int:
        """Number of even grid lines per axis; defaults to a size-proportional grid."""
        return self.coordinate_span or max(16, 4 * self.n)

    @property
    def max_extent(self) -> int:
        return max(1, round(self.density * self.span))


def _ids(prefix: str, count: int) -> list[str]:
    width = max(3 if prefix == "L" else 2, len(str(max(count - 1, 0))))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


class _Family:
    """Incremental triangle-free family with an adjacency map."""

    def __init__(self):
        self.members: list = []
        self.adj: dict = {}

    def try_add(self, m) -> bool:
        nbrs = [o.id for o in self.members if members_intersect(m, o)]
        for i, a in enumerate(nbrs):
            if any(b in self.adj[a] for b in nbrs[i + 1:]):
                return False
        self.members.append(m)
        self.adj[m.id] = set(nbrs)
        for a in nbrs:
            self.adj[a].add(m.id)
        return True


def _with_restarts(build, rng: random.Random):
    """Run ``build(rng)``; a stalled placement restarts on the same stream."""
    for _ in range(RESTARTS):
        try:
            return build(rng)
        except GenerationStalled:
            continue
    raise GenerationStalled(f"placement stalled in {RESTARTS} consecutive restarts")


def _place(fam: _Family, ident, draw, used_x: set, used_y: set) -> None:
    for _ in range(MAX_ATTEMPTS):
        shape = draw()
        if shape.cx in used_x or shape.cy in used_y:
            continue
        if fam.try_add(shape):
            used_x.add(shape.cx)
            used_y.add(shape.cy)
            return
    raise GenerationStalled(f"could not place {ident} after {MAX_ATTEMPTS} attempts")


def random_scene(params: GenParams) -> Scene:
    span, ext = params.span, params.max_extent

    def build(rng):
        fam = _Family()
        used_x: set = set()
        used_y: set = set()
        for ident in _ids("L", params.n):
            def draw():
                cx, cy = 2 * rng.randrange(span), 2 * rng.randrange(span)
                return LShape(ident, Point(cx, cy), cx + 2 * rng.randrange(ext) + 1, cy + 2 * rng.randrange(ext) + 1)
            _place(fam, ident, draw, used_x, used_y)
        return Scene(tuple(fam.members))

    return _with_restarts(build, random.Random(params.seed))


def random_grounded(params: GenParams, m_segments: int) -> GroundedInstance:
    if m_segments < 1:
        raise ValueError("need at least one ground segment")
    span, ext = params.span, params.max_extent
    # enough distinct corner columns to the left of each support
    reach = max(ext, 2 * (params.n // m_segments) + 4)

    def build(rng):
        fam = _Family()
        used_x: set = set()
        used_y: set = set()
        segments = []
        for ident in _ids("S", m_segments):
            for _ in range(MAX_ATTEMPTS):
                x = 2 * rng.randrange(span)
                if x not in used_x:
                    break
            else:
                raise GenerationStalled("could not place ground segments at distinct x")
            used_x.add(x)
            g = GroundSegment(ident, x, 0, 2 * rng.randrange(span // 4, span) + 1)
            segments.append(g)
            fam.try_add(g)
        for ident in _ids("L", params.n):
            def draw():
                # aim at one segment and put the corner up-left of it
                g = rng.choice(segments)
                cy = 2 * rng.randint(1, max(1, (g.y_top - 1) // 2))
                cx = g.x - 2 * rng.randint(1, reach)
                rx = g.x + 2 * rng.randrange(ext) + 1
                # short verticals are favoured so that many shapes can share a support
                ty = cy + 2 * int(ext * rng.random() ** 2) + 1
                return LShape(ident, Point(cx, cy), rx, ty)
            _place(fam, ident, draw, used_x, used_y)
        shapes = tuple(m for m in fam.members if isinstance(m, LShape))
        return GroundedInstance(0, shapes, tuple(segments))

    return _with_restarts(build, random.Random(params.seed))


def normalize(scene: Scene | Iterable[LShape]) -> Scene:
    """Remap coordinates to per-axis ranks; every order relation is kept."""
    shapes = list(scene.shapes if isinstance(scene, Scene) else scene)
    for attr in ("x", "y"):
        seen: dict = {}
        for s in shapes:
            v = getattr(s.corner, attr)
            if v in seen:
                raise AmbiguousTangency(f"corners of {seen[v]!r} and {s.id!r} share {attr}={v}")
            seen[v] = s.id
    xs = {v: i for i, v in enumerate(sorted({c for s in shapes for c in (s.cx, s.right_x)}))}
    ys = {v: i for i, v in enumerate(sorted({c for s in shapes for c in (s.cy, s.top_y)}))}
    return Scene(tuple(LShape(s.id, Point(xs[s.cx], ys[s.cy]), xs[s.right_x], ys[s.top_y]) for s in shapes))


# -- tower families -------------------------------------------------------
#
# A probe is a rectangle crossed, bottom to top and by nothing else, by the
# vertical parts of its roots; the half-strip left of a probe meets nothing.
# In every proper colouring some probe sees at least k colours on its roots.
# Step: put a copy of the family inside every probe P (right of P's roots),
# and for each probe Q of that copy add a diagonal hitting exactly roots(Q).
# Either roots(P) and roots(Q) together see k+1 colours, or the diagonal
# adds a colour unseen by roots(P); each case yields a new probe.


@dataclass(frozen=True)
class _Probe:
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction
    roots: tuple


@dataclass
class _Tower:
    shapes: dict       # int id -> (cx, cy, rx, ty)
    probes: list
    edges: set


def _candidates():
    yield Fraction(1, 2)
    d = 3
    while True:
        for num in range(1, d):
            yield Fraction(num, d)
        d += 1


def _pick(lo, hi, used):
    for t in _candidates():
        v = lo + (hi - lo) * t
        if v not in used:
            return v


def _base() -> _Tower:
    return _Tower({0: (Fraction(0), Fraction(0), Fraction(1), Fraction(10))},
                  [_Probe(Fraction(-1), Fraction(1, 2), Fraction(2), Fraction(8), (0,))], set())


def _bounds(t: _Tower):
    xs = [c for s in t.shapes.values() for c in (s[0], s[2])] + [c for p in t.probes for c in (p.x0, p.x1)]
    ys = [c for s in t.shapes.values() for c in (s[1], s[3])] + [c for p in t.probes for c in (p.y0, p.y1)]
    return min(xs), max(xs), min(ys), max(ys)


def _step(t: _Tower) -> _Tower:
    shapes = dict(t.shapes)
    edges = set(t.edges)
    used_x = {s[0] for s in shapes.values()}
    used_y = {s[1] for s in shapes.values()}
    next_id = max(shapes) + 1
    bx0, bx1, by0, by1 = _bounds(t)
    probes = []
    for P in t.probes:
        r = max(shapes[i][0] for i in P.roots)
        for a in _candidates():
            # affine copy of the whole family into P, right of its roots
            X0 = r + (P.x1 - r) * a / 2
            X1 = P.x1 - (P.x1 - r) * a / 4
            Y0 = P.y0 + (P.y1 - P.y0) * a / 4
            Y1 = P.y1 - (P.y1 - P.y0) * a / 4
            sx, sy = (X1 - X0) / (bx1 - bx0), (Y1 - Y0) / (by1 - by0)
            fx = lambda x: X0 + (x - bx0) * sx
            fy = lambda y: Y0 + (y - by0) * sy
            mapped = {i: (fx(s[0]), fy(s[1]), fx(s[2]), fy(s[3])) for i, s in t.shapes.items()}
            if not ({m[0] for m in mapped.values()} & used_x or {m[1] for m in mapped.values()} & used_y):
                break
        rename = {}
        for i in sorted(mapped):
            rename[i] = next_id
            shapes[next_id] = mapped[i]
            used_x.add(mapped[i][0])
            used_y.add(mapped[i][1])
            next_id += 1
        edges |= {frozenset((rename[a], rename[b])) for a, b in map(tuple, t.edges)}
        for q in t.probes:
            Q = _Probe(fx(q.x0), fx(q.x1), fy(q.y0), fy(q.y1), tuple(rename[i] for i in q.roots))
            h = Q.y1 - Q.y0
            lo = min(shapes[i][0] for i in Q.roots)
            hi = max(shapes[i][0] for i in Q.roots)
            xd = _pick(Q.x0, lo, used_x)
            yd = _pick(Q.y0 + 3 * h / 8, Q.y0 + 5 * h / 8, used_y)
            d = next_id
            next_id += 1
            shapes[d] = (xd, yd, (hi + Q.x1) / 2, Q.y0 + 7 * h / 8)
            used_x.add(xd)
            used_y.add(yd)
            edges |= {frozenset((d, i)) for i in Q.roots}
            probes.append(_Probe(P.x0, Q.x1, Q.y0 + h / 8, yd - h / 16, P.roots + Q.roots))
            probes.append(_Probe(P.x0, (xd + lo) / 2, yd + h / 16, Q.y0 + 13 * h / 16, P.roots + (d,)))
    return _Tower(shapes, probes, edges)


def tower_size(k: int) -> int:
    n, p = 1, 1
    for _ in range(k - 1):
        n, p = n + p * (n + p), 2 * p * p
    return n


def tower(k: int) -> Scene:
    """Triangle-free family whose chromatic number is at least ``k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > TOWER_MAX_K:
        raise Unsupported(f"tower families are built up to k={TOWER_MAX_K}")
    t = _base()
    for _ in range(k - 1):
        t = _step(t)
    width = max(4, len(str(len(t.shapes) - 1)))
    name = {i: f"T{i:0{width}d}" for i in t.shapes}
    shapes = [LShape(name[i], Point(s[0], s[1]), s[2], s[3]) for i, s in t.shapes.items()]
    g = build_graph(shapes)
    expected = {frozenset((name[a], name[b])) for a, b in map(tuple, t.edges)}
    if {frozenset(e) for e in g.edges()} != expected:
        raise InvariantViolation("tower", "geometric graph differs from the tracked construction")
    return normalize(shapes)
