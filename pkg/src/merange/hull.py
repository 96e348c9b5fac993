"""Convex hulls with open-interior tests and a dynamic member set."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .kernel import Point, Segment, cross, side_form

__all__ = [
    "Hull",
    "DynamicHull",
    "NotAVertex",
    "RemoveAbsent",
    "build_hull",
    "strictly_inside",
    "contains_closed",
    "support_edges_at",
    "interior_clip",
    "hull_boundary_hits_segment",
]


class RemoveAbsent(KeyError):
    pass


class NotAVertex(ValueError):
    pass


@dataclass(frozen=True)
class Hull:
    """Strictly convex CCW vertex cycle of a point set.

    ``indices`` parallels ``vertices``; ``member_count`` counts every point
    of the underlying set, including interior and collinear boundary ones.
    """

    vertices: tuple[Point, ...]
    indices: tuple[int, ...]
    member_count: int

    @property
    def has_interior(self) -> bool:
        return len(self.vertices) >= 3

    def edges(self):
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            yield vs[i], vs[(i + 1) % n]

    def canonical(self) -> tuple[Point, ...]:
        """Vertex cycle rotated to start at its lexicographic minimum."""
        vs = self.vertices
        if not vs:
            return ()
        k = vs.index(min(vs))
        return vs[k:] + vs[:k]


def build_hull(points: Sequence[Point], indices: Sequence[int] | None = None) -> Hull:
    """Andrew's monotone chain; duplicates collapse onto the first index."""
    if indices is None:
        indices = range(len(points))
    seen: dict[Point, int] = {}
    for i, p in zip(indices, points):
        seen.setdefault(p, i)
    pts = sorted(seen)
    if len(pts) <= 2:
        # a pair (or single point) is its own degenerate hull
        return Hull(tuple(pts), tuple(seen[p] for p in pts), len(points))

    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    cycle = lower[:-1] + upper[:-1]
    if len(cycle) < 3:
        # all collinear: keep the two extremes
        cycle = [pts[0], pts[-1]]
    return Hull(tuple(cycle), tuple(seen[p] for p in cycle), len(points))


def strictly_inside(h: Hull, q: Point) -> bool:
    """True iff ``q`` lies in the open interior of ``h``."""
    if len(h.vertices) < 3:
        return False
    return all(cross(u, v, q) > 0 for u, v in h.edges())


def contains_closed(h: Hull, q: Point) -> bool:
    """True iff ``q`` lies in the closed hull (boundary included)."""
    vs = h.vertices
    if not vs:
        return False
    if len(vs) == 1:
        return q == vs[0]
    if len(vs) == 2:
        u, v = vs
        if cross(u, v, q) != 0:
            return False
        return min(u, v) <= q <= max(u, v)
    return all(cross(u, v, q) >= 0 for u, v in h.edges())


def support_edges_at(h: Hull, f: Point) -> tuple[tuple[Point, Point], tuple[Point, Point]]:
    """The two hull edges incident to vertex ``f``, in CCW order."""
    try:
        k = h.vertices.index(f)
    except ValueError:
        raise NotAVertex(f"{f} is not a hull vertex") from None
    vs = h.vertices
    n = len(vs)
    if n < 2:
        raise NotAVertex(f"hull with {n} vertices has no edges")
    return (vs[k - 1], f), (f, vs[(k + 1) % n])


def interior_clip(h: Hull, s: Segment) -> tuple[Fraction | None, Fraction | None] | None:
    """Open parameter interval ``(lo, hi)`` of the supporting line inside ``int(h)``.

    ``None`` stands for an unbounded side; the whole result is ``None`` when
    the line misses the interior.
    """
    if len(h.vertices) < 3:
        return None
    lo = hi = None
    for u, v in h.edges():
        A, B = side_form(u, v, s)
        if B == 0:
            if A <= 0:
                return None
            continue
        t = Fraction(-A) / B
        if B > 0:
            if lo is None or t > lo:
                lo = t
        elif hi is None or t < hi:
            hi = t
    if lo is not None and hi is not None and lo >= hi:
        return None
    return lo, hi


def hull_boundary_hits_segment(h: Hull, s: Segment, window=(0, 1)) -> list[Fraction]:
    """Parameters in ``window`` (closed) where ``s`` crosses the boundary of ``h``."""
    clip = interior_clip(h, s)
    if clip is None:
        return []
    t_lo, t_hi = window
    return [t for t in clip if t is not None and t_lo <= t <= t_hi]


class DynamicHull:
    """Hull of a mutable member set keyed by source index.

    Inserting a point already covered by the hull, or removing a point that
    is not a vertex, leaves the vertex cycle untouched; other updates rebuild
    from the smallest set that determines the new hull.
    """

    def __init__(self, members: Iterable[tuple[int, Point]] = ()):
        self._members: dict[int, Point] = dict(members)
        self._rebuild(self._members)

    def _rebuild(self, pool: dict[int, Point]) -> None:
        idx = list(pool)
        self.hull = build_hull([pool[i] for i in idx], idx)
        self.hull = Hull(self.hull.vertices, self.hull.indices, len(self._members))
        self._vertex_ids = set(self.hull.indices)

    @property
    def members(self) -> dict[int, Point]:
        return dict(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __contains__(self, index: int) -> bool:
        return index in self._members

    def insert(self, index: int, p: Point) -> None:
        if index in self._members:
            raise ValueError(f"index {index} is already a member")
        self._members[index] = p
        h = self.hull
        if h.has_interior and contains_closed(h, p):
            self.hull = Hull(h.vertices, h.indices, len(self._members))
            return
        pool = dict(zip(h.indices, h.vertices))
        pool[index] = p
        self._rebuild(pool)

    def remove(self, index: int) -> None:
        if index not in self._members:
            raise RemoveAbsent(index)
        del self._members[index]
        if index not in self._vertex_ids:
            h = self.hull
            self.hull = Hull(h.vertices, h.indices, len(self._members))
            return
        self._rebuild(self._members)
