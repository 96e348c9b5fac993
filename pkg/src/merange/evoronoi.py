"""E-Voronoi diagram of a source set restricted to a segment.

For each source ``f`` the segment is swept outward from the foot of ``f``,
stopping at the bisectors between ``f`` and every other source. Between two
stops the set of sources closer than ``f`` is fixed, so two hulls are fixed:
``H`` (those sources plus ``f``) and ``H*`` (without ``f``). A point belongs
to the region of ``f`` exactly when it is inside ``H`` but not inside
``H*``. The places where the sweep enters or leaves ``H`` (support-line
crossings) and where it enters or leaves ``H*`` are found inside each stride
and split it into at most two pieces of the region.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hull import DynamicHull, interior_clip
from .kernel import (
    Number,
    Point,
    Segment,
    bisector_form,
    common_scale,
    dist2,
    foot_parameter,
    scale_point,
)
from .point import UNBOUNDED, Unbounded, embraces

__all__ = [
    "EVoronoiCell",
    "EVoronoiDiagram",
    "Breakpoint",
    "TilingGap",
    "sweep_source",
    "build_diagram",
    "query",
    "diagram_mer",
    "assemble_cells",
]


class TilingGap(RuntimeError):
    """Per-source regions failed to tile the segment (a sweep defect)."""


@dataclass(frozen=True)
class EVoronoiCell:
    t_lo: Fraction
    t_hi: Fraction
    site: int
    peak2: Number
    peak_t: Fraction  # the end of the cell where peak2 is attained


@dataclass(frozen=True)
class Breakpoint:
    t: Fraction
    kind: str  # "bisector" or "hull"
    left: int
    right: int


@dataclass(frozen=True)
class EVoronoiDiagram:
    cells: tuple[EVoronoiCell, ...]
    breakpoints: tuple[Fraction, ...]
    annotations: tuple[Breakpoint, ...] = ()
    # source pairs whose bisector contains the segment; ties broken by index
    tied_pairs: tuple[tuple[int, int], ...] = ()

    def sites(self) -> list[int]:
        return [c.site for c in self.cells]


def _sweep_forward(G: Sequence[Point], seg: Segment, f: int, t_start: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Region pieces of ``f`` on ``[t_start, 1]``, sweeping toward ``t = 1``."""
    if t_start >= 1:
        return []
    fp = G[f]
    forms = {}
    stops: dict[Fraction, list[int]] = {}
    for g, pt in enumerate(G):
        if g == f:
            continue
        C, D = bisector_form(fp, pt, seg)
        forms[g] = (C, D)
        if D != 0:
            t = Fraction(-C) / D
            if t_start < t < 1:
                stops.setdefault(t, []).append(g)
    positions = [t_start, *sorted(stops), Fraction(1)]

    m = (positions[0] + positions[1]) / 2
    closer = set()
    for g, (C, D) in forms.items():
        v = C + D * m
        # v == 0 inside a stride only for a bisector containing the segment
        if v < 0 or (v == 0 and g < f):
            closer.add(g)
    h_star = DynamicHull((g, G[g]) for g in closer)
    h_full = DynamicHull([(f, fp), *((g, G[g]) for g in closer)])

    pieces = []
    for k in range(len(positions) - 1):
        a, b = positions[k], positions[k + 1]
        if k:
            for g in stops[a]:
                if g in closer:
                    closer.discard(g)
                    h_star.remove(g)
                    h_full.remove(g)
                else:
                    closer.add(g)
                    h_star.insert(g, G[g])
                    h_full.insert(g, G[g])
        clip = interior_clip(h_full.hull, seg)
        if clip is None:
            continue  # the whole stride lies outside H
        # support lines of f cut the stride where it enters or leaves H
        lo = a if clip[0] is None or clip[0] < a else clip[0]
        hi = b if clip[1] is None or clip[1] > b else clip[1]
        if lo >= hi:
            continue
        inner = interior_clip(h_star.hull, seg)
        if inner is None:
            pieces.append((lo, hi))
            continue
        # inside H*, f is not needed; keep what lies before and after it
        s_lo, s_hi = inner
        if s_lo is not None and s_lo > lo:
            pieces.append((lo, min(hi, s_lo)))
        if s_hi is not None and s_hi < hi:
            pieces.append((max(lo, s_hi), hi))
    return [(x, y) for x, y in pieces if x < y]


def _merge(pieces: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    out: list[list[Fraction]] = []
    for lo, hi in sorted(pieces):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def _scaled_scene(F: Sequence[Point], s: Segment) -> tuple[list[Point], Segment]:
    k = common_scale(list(F) + [s.a, s.b])
    if k == 1:
        return list(F), s
    return [scale_point(p, k) for p in F], Segment(scale_point(s.a, k), scale_point(s.b, k))


def _sweep_scaled(G: Sequence[Point], seg: Segment, f: int) -> list[tuple[Fraction, Fraction]]:
    t_f = foot_parameter(G[f], seg)
    t_f = min(max(t_f, Fraction(0)), Fraction(1))
    right = _sweep_forward(G, seg, f, t_f)
    # the backward sweep is the forward sweep on the reversed segment
    left = _sweep_forward(G, seg.reversed(), f, 1 - t_f)
    return _merge(right + [(1 - hi, 1 - lo) for lo, hi in left])


def sweep_source(F: Sequence[Point], s: Segment, f: int) -> list[tuple[Fraction, Fraction]]:
    """Closed components of the region of source ``f`` on ``s``."""
    if len(F) < 3:
        return []
    G, seg = _scaled_scene(F, s)
    return _sweep_scaled(G, seg, f)


def assemble_cells(F: Sequence[Point], s: Segment, comps: dict[int, list[tuple[Fraction, Fraction]]]) -> EVoronoiDiagram:
    """Validate that per-source components tile ``[0, 1]`` and annotate them."""
    cells = sorted((lo, hi, site) for site, cs in comps.items() for lo, hi in cs)
    if not cells:
        raise TilingGap("no source owns any part of the segment")
    out = []
    prev_hi = Fraction(0)
    prev_site = None
    for lo, hi, site in cells:
        if lo != prev_hi:
            kind = "gap" if lo > prev_hi else "overlap"
            raise TilingGap(f"{kind} at t={prev_hi} .. {lo} (sites {prev_site}, {site})")
        if site == prev_site:
            raise TilingGap(f"site {site} owns two adjacent cells at t={lo}")
        lo2, hi2 = dist2(s.at(lo), F[site]), dist2(s.at(hi), F[site])
        peak2, peak_t = (lo2, lo) if lo2 >= hi2 else (hi2, hi)
        out.append(EVoronoiCell(lo, hi, site, peak2, peak_t))
        prev_hi, prev_site = hi, site
    if prev_hi != 1:
        raise TilingGap(f"cells end at t={prev_hi}")

    notes = []
    for left, right in zip(out, out[1:]):
        q = s.at(left.t_hi)
        tie = dist2(q, F[left.site]) == dist2(q, F[right.site])
        notes.append(Breakpoint(left.t_hi, "bisector" if tie else "hull", left.site, right.site))

    tied = []
    for i in range(len(F)):
        for j in range(i + 1, len(F)):
            C, D = bisector_form(F[i], F[j], s)
            if C == 0 and D == 0:
                tied.append((i, j))
    return EVoronoiDiagram(
        cells=tuple(out),
        breakpoints=tuple(n.t for n in notes),
        annotations=tuple(notes),
        tied_pairs=tuple(tied),
    )


def build_diagram(F: Sequence[Point], s: Segment) -> EVoronoiDiagram | Unbounded:
    """Sweep every source and assemble the restricted diagram."""
    F = list(F)
    if len(F) < 3 or not (embraces(F, s.a) and embraces(F, s.b)):
        return UNBOUNDED
    G, seg = _scaled_scene(F, s)
    comps = {}
    for f in range(len(F)):
        cs = _sweep_scaled(G, seg, f)
        if cs:
            comps[f] = cs
    return assemble_cells(F, s, comps)


def query(d: EVoronoiDiagram, F: Sequence[Point], s: Segment, t) -> tuple[int, Number]:
    """Closest embracing site of ``q(t)`` and its squared range.

    A breakpoint belongs to the cell on its left.
    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"t={t} outside [0, 1]")
    k = bisect.bisect_left(d.breakpoints, t)
    site = d.cells[k].site
    return site, dist2(s.at(t), F[site])


def diagram_mer(d: EVoronoiDiagram) -> tuple[Number, Fraction, int]:
    """Largest cell peak as ``(mer2, t, site)``; ``t`` is a cell endpoint.

    Equal peaks resolve to the cell furthest along the segment.
    """
    best = max(reversed(d.cells), key=lambda c: c.peak2)
    return best.peak2, best.peak_t, best.site
