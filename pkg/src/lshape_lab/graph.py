"""Intersection graphs, triangle detection and chromatic-number oracles.

Graphs are immutable adjacency-set maps keyed by member id.  The exact
solver is a DSATUR branch-and-bound run per connected component, testing
k-colourability from the heuristic upper bound downwards.  Vertices of
degree < k are peeled off before each k-test and re-coloured greedily.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import BudgetExceeded, DuplicateId, MissingAssignment, UnknownVertex
from .geom import GroundSegment, LShape, id_key, members_intersect

DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class IntersectionGraph:
    vertices: tuple
    adj: Mapping[Hashable, frozenset]

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "IntersectionGraph":
        verts = sorted(set(vertices), key=id_key)
        nbrs: dict = {v: set() for v in verts}
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at {a!r}")
            if a not in nbrs or b not in nbrs:
                raise UnknownVertex(f"edge ({a!r}, {b!r}) leaves the vertex set")
            nbrs[a].add(b)
            nbrs[b].add(a)
        return cls(tuple(verts), {v: frozenset(n) for v, n in nbrs.items()})

    def __len__(self) -> int:
        return len(self.vertices)

    def has_edge(self, a, b) -> bool:
        return b in self.adj.get(a, ())

    def degree(self, v) -> int:
        return len(self.adj[v])

    def edges(self) -> frozenset:
        """Edge set as frozensets of two ids (order-free, comparable by value)."""
        return frozenset(frozenset((a, b)) for a in self.vertices for b in self.adj[a])

    def edge_list(self) -> list[tuple]:
        out = []
        for a in self.vertices:
            ka = id_key(a)
            for b in self.adj[a]:
                if ka < id_key(b):
                    out.append((a, b))
        out.sort(key=lambda e: (id_key(e[0]), id_key(e[1])))
        return out

    def edge_count(self) -> int:
        return sum(len(n) for n in self.adj.values()) // 2

    def induced(self, keep: Iterable) -> "IntersectionGraph":
        keep = set(keep)
        verts = tuple(v for v in self.vertices if v in keep)
        return IntersectionGraph(verts, {v: frozenset(self.adj[v] & keep) for v in verts})

    def components(self) -> list[list]:
        seen: set = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = [v]
            seen.add(v)
            queue = deque([v])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp, key=id_key))
        return comps


@dataclass(frozen=True)
class Coloring:
    assignment: Mapping[Hashable, int]
    color_count: int

    @classmethod
    def from_assignment(cls, assignment: Mapping) -> "Coloring":
        return cls(dict(assignment), len(set(assignment.values())))


@dataclass(frozen=True)
class TriangleWitness:
    a: Hashable
    b: Hashable
    c: Hashable

    def __iter__(self):
        return iter((self.a, self.b, self.c))


def build_graph(shapes: Sequence[LShape] = (), segments: Sequence[GroundSegment] = ()) -> IntersectionGraph:
    """Intersection graph of shapes and segments under closed-set semantics.

    Members are swept by the left edge of their bounding boxes so only
    x-overlapping pairs are tested.
    """
    members = list(shapes) + list(segments)
    ids = [m.id for m in members]
    if len(set(ids)) != len(ids):
        seen: set = set()
        dup = next(i for i in ids if i in seen or seen.add(i))
        raise DuplicateId(f"duplicate member id {dup!r}")
    spans = []
    for m in members:
        if isinstance(m, LShape):
            spans.append((m.corner.x, m.right_x, m))
        else:
            spans.append((m.x, m.x, m))
    spans.sort(key=lambda t: t[0])
    nbrs: dict = {i: set() for i in ids}
    active: list = []
    for x0, x1, m in spans:
        active = [t for t in active if t[1] >= x0]
        for _, _, other in active:
            if members_intersect(m, other):
                nbrs[m.id].add(other.id)
                nbrs[other.id].add(m.id)
        active.append((x0, x1, m))
    verts = tuple(sorted(ids, key=id_key))
    return IntersectionGraph(verts, {v: frozenset(nbrs[v]) for v in verts})


def triangle_witness(g: IntersectionGraph) -> TriangleWitness | None:
    for a in g.vertices:
        ka = id_key(a)
        higher = [b for b in g.adj[a] if id_key(b) > ka]
        for b in sorted(higher, key=id_key):
            common = g.adj[a] & g.adj[b]
            for c in sorted(common, key=id_key):
                if id_key(c) > id_key(b):
                    return TriangleWitness(a, b, c)
    return None


def is_triangle_free(g: IntersectionGraph) -> bool:
    return triangle_witness(g) is None


def dist2(g: IntersectionGraph, v) -> set:
    """Vertices at shortest-path distance exactly 2 from ``v``."""
    if v not in g.adj:
        raise UnknownVertex(f"{v!r} is not a vertex")
    first = g.adj[v]
    out: set = set()
    for u in first:
        out |= g.adj[u]
    out -= first
    out.discard(v)
    return out


def is_proper(g: IntersectionGraph, coloring: Coloring | Mapping) -> bool:
    assignment = coloring.assignment if isinstance(coloring, Coloring) else coloring
    missing = [v for v in g.vertices if v not in assignment]
    if missing:
        raise MissingAssignment(f"no color for {missing[0]!r}")
    return all(assignment[a] != assignment[b] for a, b in g.edge_list())


# -- heuristic -------------------------------------------------------------

def _indexed(g: IntersectionGraph, verts: Sequence | None = None):
    verts = list(g.vertices if verts is None else verts)
    index = {v: i for i, v in enumerate(verts)}
    nb = [[index[w] for w in g.adj[v] if w in index] for v in verts]
    return verts, nb


def _dsatur_indices(nb: list[list[int]]) -> list[int]:
    n = len(nb)
    color = [-1] * n
    sat: list[set] = [set() for _ in range(n)]
    deg = [len(x) for x in nb]
    for _ in range(n):
        best = -1
        for v in range(n):
            if color[v] >= 0:
                continue
            if best < 0 or (len(sat[v]), deg[v]) > (len(sat[best]), deg[best]):
                best = v
        c = 0
        while c in sat[best]:
            c += 1
        color[best] = c
        for w in nb[best]:
            sat[w].add(c)
    return color


def dsatur(g: IntersectionGraph) -> Coloring:
    """DSATUR greedy coloring; ties broken by degree, then id order."""
    verts, nb = _indexed(g)
    colors = _dsatur_indices(nb)
    return Coloring.from_assignment({verts[i]: c for i, c in enumerate(colors)})


def greedy_clique(g: IntersectionGraph, verts: Sequence | None = None) -> list:
    verts = list(g.vertices if verts is None else verts)
    best: list = []
    vs = set(verts)
    for start in verts:
        clique = [start]
        cand = set(g.adj[start]) & vs
        while cand:
            nxt = max(sorted(cand, key=id_key), key=lambda w: len(g.adj[w] & cand))
            clique.append(nxt)
            cand &= g.adj[nxt]
        if len(clique) > len(best):
            best = clique
    return best


# -- exact -------------------------------------------------------------------

class _Counter:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget: int):
        self.nodes = 0
        self.budget = budget

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget, self.nodes)


def _peel(nb: list[list[int]], k: int) -> tuple[list[int], list[int]]:
    """Split vertices into a k-core and a removal order of low-degree vertices."""
    n = len(nb)
    deg = [len(x) for x in nb]
    removed = [False] * n
    order: list[int] = []
    stack = [v for v in range(n) if deg[v] < k]
    while stack:
        v = stack.pop()
        if removed[v]:
            continue
        removed[v] = True
        order.append(v)
        for w in nb[v]:
            if not removed[w]:
                deg[w] -= 1
                if deg[w] == k - 1:
                    stack.append(w)
    core = [v for v in range(n) if not removed[v]]
    return core, order


def _k_color_core(nb: list[list[int]], core: list[int], k: int, counter: _Counter) -> dict | None:
    """DSATUR backtracking on the core; returns {vertex: color} or None."""
    if not core:
        return {}
    pos = {v: i for i, v in enumerate(core)}
    m = len(core)
    cnb = [[pos[w] for w in nb[v] if w in pos] for v in core]
    color = [-1] * m
    # counts[v][c] = number of colored neighbours of v with color c
    counts = [[0] * k for _ in range(m)]
    satmask = [0] * m
    deg = [len(x) for x in cnb]

    def assign(v, c):
        color[v] = c
        for w in cnb[v]:
            cw = counts[w]
            if cw[c] == 0:
                satmask[w] |= 1 << c
            cw[c] += 1

    def unassign(v, c):
        color[v] = -1
        for w in cnb[v]:
            cw = counts[w]
            cw[c] -= 1
            if cw[c] == 0:
                satmask[w] &= ~(1 << c)

    full = (1 << k) - 1

    def pick():
        best = -1
        bsat = -1
        bdeg = -1
        for v in range(m):
            if color[v] >= 0:
                continue
            s = bin(satmask[v]).count("1")
            if s > bsat or (s == bsat and deg[v] > bdeg):
                best, bsat, bdeg = v, s, deg[v]
        return best

    def solve(colored: int, used: int) -> bool:
        if colored == m:
            return True
        counter.tick()
        v = pick()
        if satmask[v] == full:
            return False
        limit = min(used + 1, k)
        for c in range(limit):
            if satmask[v] >> c & 1:
                continue
            assign(v, c)
            if solve(colored + 1, max(used, c + 1)):
                return True
            unassign(v, c)
        return False

    import sys
    old = sys.getrecursionlimit()
    if old < m + 100:
        sys.setrecursionlimit(m + 1000)
    try:
        ok = solve(0, 0)
    finally:
        sys.setrecursionlimit(old)
    if not ok:
        return None
    return {core[i]: color[i] for i in range(m)}


def _k_color(nb: list[list[int]], k: int, counter: _Counter) -> list[int] | None:
    core, order = _peel(nb, k)
    sub = _k_color_core(nb, core, k, counter)
    if sub is None:
        return None
    color = [-1] * len(nb)
    for v, c in sub.items():
        color[v] = c
    for v in reversed(order):
        taken = {color[w] for w in nb[v] if color[w] >= 0}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return color


def chi_exact(g: IntersectionGraph, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, Coloring]:
    """Exact chromatic number with a witnessing optimal coloring.

    Raises BudgetExceeded once the branch-and-bound has expanded more than
    ``node_budget`` nodes in total.
    """
    counter = _Counter(node_budget)
    assignment: dict = {}
    chi = 0
    for comp in g.components():
        verts, nb = _indexed(g, comp)
        if len(verts) == 1:
            assignment[verts[0]] = 0
            chi = max(chi, 1)
            continue
        upper = _dsatur_indices(nb)
        ub = max(upper) + 1
        lb = max(len(greedy_clique(g, verts)), 2)
        best = upper
        k = ub - 1
        while k >= lb and k >= max(chi, 1):
            trial = _k_color(nb, k, counter)
            if trial is None:
                break
            best = trial
            ub = k
            k -= 1
        # a component needing fewer colours than the running max cannot lower chi
        assignment.update({verts[i]: c for i, c in enumerate(best)})
        chi = max(chi, max(best) + 1)
    return chi, Coloring.from_assignment(assignment)


def dimacs_lines(g: IntersectionGraph) -> list[str]:
    index = {v: i + 1 for i, v in enumerate(g.vertices)}
    edges = g.edge_list()
    lines = [f"c vertex {index[v]} {v}" for v in g.vertices]
    lines.append(f"p edge {len(g.vertices)} {len(edges)}")
    lines += [f"e {index[a]} {index[b]}" for a, b in edges]
    return lines
