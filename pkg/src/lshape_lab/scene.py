"""Free-standing L-shape families in general position."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateId, TieViolation
from .geom import LShape, id_key
from .graph import IntersectionGraph, build_graph


@dataclass(frozen=True)
class Scene:
    shapes: tuple[LShape, ...]
    _graph: IntersectionGraph | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        shapes = tuple(sorted(self.shapes, key=lambda s: id_key(s.id)))
        object.__setattr__(self, "shapes", shapes)
        if len({s.id for s in shapes}) != len(shapes):
            raise DuplicateId("shape ids must be distinct")
        for attr in ("x", "y"):
            seen: dict = {}
            for s in shapes:
                v = getattr(s.corner, attr)
                if v in seen:
                    raise TieViolation(f"corner {attr} of {seen[v]!r} and {s.id!r} coincide at {v}")
                seen[v] = s.id

    @property
    def graph(self) -> IntersectionGraph:
        if self._graph is None:
            object.__setattr__(self, "_graph", build_graph(self.shapes))
        return self._graph

    @property
    def ids(self) -> list:
        return [s.id for s in self.shapes]

    def shape_map(self) -> dict:
        return {s.id: s for s in self.shapes}

    def restricted(self, keep) -> "Scene":
        keep = set(keep)
        return Scene(tuple(s for s in self.shapes if s.id in keep))

    def __len__(self) -> int:
        return len(self.shapes)
