"""Brute-force references for the fast paths.

Only :func:`build_hull`, :func:`strictly_inside` and kernel predicates are
shared with the code under test.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .evoronoi import EVoronoiCell, EVoronoiDiagram, Breakpoint
from .hull import build_hull, strictly_inside
from .kernel import (
    CollinearBisector,
    Overlap,
    Point,
    Segment,
    SqrtCoord,
    bisector_hits_segment,
    circle_hits_segment,
    dist2,
    dist2_minus_at,
    exact,
    line_hits_segment,
    rational_between,
    side_form,
    side_sign_at,
)
from .point import UNBOUNDED, MerResult, Unbounded

__all__ = [
    "oracle_mer_point",
    "oracle_decide_segment",
    "oracle_diagram",
    "oracle_mer_segment",
    "candidate_breakpoints",
]


def _in_triangle(F, tri, p) -> bool:
    return strictly_inside(build_hull([F[i] for i in tri]), p)


def oracle_mer_point(F: Sequence[Point], p: Point) -> MerResult | Unbounded:
    """Grow the distance-ordered prefix until it strictly contains ``p``."""
    F = list(F)
    order = sorted(range(len(F)), key=lambda i: (dist2(p, F[i]), i))
    for k in range(3, len(order) + 1):
        prefix = order[:k]
        if strictly_inside(build_hull([F[i] for i in prefix]), p):
            site = prefix[-1]
            mer2 = dist2(p, F[site])
            cet = None
            for a, b in combinations(sorted(prefix[:-1]), 2):
                tri = tuple(sorted((a, b, site)))
                if _in_triangle(F, tri, p):
                    cet = tri
                    break
            return MerResult(mer2=mer2, site=site, cet=cet, embracing_prefix_size=k)
    return UNBOUNDED


def _ranges(F, r2):
    if isinstance(r2, (list, tuple)):
        return [exact(r) for r in r2]
    return [exact(r2)] * len(F)


def _embraced_at(F, reach, s: Segment, t) -> bool:
    h = build_hull([F[i] for i in reach])
    if not h.has_interior:
        return False
    return all(side_sign_at(*side_form(u, v, s), t) > 0 for u, v in h.edges())


def _closed_at(h, s: Segment, t) -> bool:
    return all(side_sign_at(*side_form(u, v, s), t) >= 0 for u, v in h.edges())


def oracle_decide_segment(F: Sequence[Point], s: Segment, r2) -> bool:
    """Check endpoints, every event point and every elementary interval from scratch."""
    F = list(F)
    rs = _ranges(F, r2)
    ts = set()
    for i, f in enumerate(F):
        for t, _ in circle_hits_segment(f, rs[i], s):
            if 0 < t < 1:
                ts.add(t)
    inner = sorted(ts)
    positions = [SqrtCoord(0), *inner, SqrtCoord(1)]

    for t in positions:
        reach = [i for i, f in enumerate(F) if dist2_minus_at(f, rs[i], s, t) <= 0]
        if not _embraced_at(F, reach, s, t):
            return False
    for a, b in zip(positions, positions[1:]):
        m = rational_between(a, b)
        q = s.at(m)
        active = [i for i, f in enumerate(F) if dist2(q, f) <= rs[i]]
        h = build_hull([F[i] for i in active])
        if not strictly_inside(h, q):
            return False
        if not (_closed_at(h, s, a) and _closed_at(h, s, b)):
            return False
    return True


def candidate_breakpoints(F: Sequence[Point], s: Segment) -> list[Fraction]:
    """All crossings of ``s`` with pairwise bisectors and lines, inside (0, 1)."""
    F = list(F)
    ts = set()
    for i, j in combinations(range(len(F)), 2):
        for hit in (bisector_hits_segment, line_hits_segment):
            try:
                t = hit(F[i], F[j], s)
            except (CollinearBisector, Overlap):
                continue
            if t is not None and 0 < t < 1:
                ts.add(t)
    return sorted(ts)


def oracle_diagram(F: Sequence[Point], s: Segment) -> EVoronoiDiagram | Unbounded:
    """Label every elementary interval by its midpoint and merge equal neighbours."""
    F = list(F)
    if len(F) < 3:
        return UNBOUNDED
    for t in (0, 1):
        if not isinstance(oracle_mer_point(F, s.at(t)), MerResult):
            return UNBOUNDED
    positions = [Fraction(0), *candidate_breakpoints(F, s), Fraction(1)]
    runs: list[list] = []
    for a, b in zip(positions, positions[1:]):
        res = oracle_mer_point(F, s.at((a + b) / 2))
        if not isinstance(res, MerResult):
            return UNBOUNDED
        if runs and runs[-1][2] == res.site:
            runs[-1][1] = b
        else:
            runs.append([a, b, res.site])
    cells = []
    for lo, hi, site in runs:
        lo2, hi2 = dist2(s.at(lo), F[site]), dist2(s.at(hi), F[site])
        peak2, peak_t = (lo2, lo) if lo2 >= hi2 else (hi2, hi)
        cells.append(EVoronoiCell(lo, hi, site, peak2, peak_t))
    notes = []
    for left, right in zip(cells, cells[1:]):
        q = s.at(left.t_hi)
        tie = dist2(q, F[left.site]) == dist2(q, F[right.site])
        notes.append(Breakpoint(left.t_hi, "bisector" if tie else "hull", left.site, right.site))
    return EVoronoiDiagram(tuple(cells), tuple(n.t for n in notes), tuple(notes))


def oracle_mer_segment(F: Sequence[Point], s: Segment):
    """Largest point MER over the endpoints and every candidate breakpoint."""
    F = list(F)
    best = None
    for t in [Fraction(0), *candidate_breakpoints(F, s), Fraction(1)]:
        res = oracle_mer_point(F, s.at(t))
        if not isinstance(res, MerResult):
            return UNBOUNDED
        if best is None or res.mer2 > best:
            best = res.mer2
    return best
