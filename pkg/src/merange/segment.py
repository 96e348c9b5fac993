"""Illumination of a segment: event sweep decision and minimum range."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby
from typing import Sequence

from .hull import DynamicHull, build_hull, interior_clip
from .kernel import (
    Number,
    Point,
    Segment,
    SqrtCoord,
    Side,
    circle_hits_segment,
    common_scale,
    dist2,
    exact,
    rational_between,
    scale_point,
    side_form,
    side_sign_at,
)
from .point import MerResult, Unbounded, embraces, in_range, mer_point

__all__ = [
    "EventKind",
    "EventPoint",
    "IlluminationInterval",
    "DecisionReport",
    "UnboundedSegment",
    "build_events",
    "sweep_intervals",
    "decide_segment",
    "mer_segment_bisect",
    "mer_segment_exact",
    "embraceable_segment",
]


class UnboundedSegment(ValueError):
    """Some point of the segment is not embraceable at any range."""


class EventKind(enum.Enum):
    CIRCLE_LEFTMOST = "leftmost"
    CIRCLE_RIGHTMOST = "rightmost"
    ENDPOINT = "endpoint"


@dataclass(frozen=True)
class EventPoint:
    t: SqrtCoord
    kind: EventKind
    source: int | None = None


@dataclass(frozen=True)
class IlluminationInterval:
    from_event: EventPoint
    to_event: EventPoint
    active: frozenset[int]


@dataclass(frozen=True)
class DecisionReport:
    verdict: bool
    witness: Fraction | None = None
    reason: str | None = None
    intervals: tuple[IlluminationInterval, ...] = field(default=(), repr=False, compare=False)

    def __bool__(self) -> bool:
        return self.verdict


def _ranges(F: Sequence[Point], r2) -> list:
    if isinstance(r2, (list, tuple)):
        if len(r2) != len(F):
            raise ValueError("need one squared range per source")
        rs = [exact(r) for r in r2]
    else:
        rs = [exact(r2)] * len(F)
    if any(r < 0 for r in rs):
        raise ValueError("negative squared range")
    return rs


def build_events(F: Sequence[Point], s: Segment, r2) -> list[EventPoint]:
    """Sorted circle/segment crossings strictly inside (0, 1), plus both endpoints.

    A tangency yields a leftmost and a rightmost event at the same position.
    """
    rs = _ranges(F, r2)
    events = [EventPoint(SqrtCoord(0), EventKind.ENDPOINT), EventPoint(SqrtCoord(1), EventKind.ENDPOINT)]
    for i, f in enumerate(F):
        for t, side in circle_hits_segment(f, rs[i], s):
            if not (0 < t < 1):
                continue
            if side is not Side.RIGHTMOST:
                events.append(EventPoint(t, EventKind.CIRCLE_LEFTMOST, i))
            if side is not Side.LEFTMOST:
                events.append(EventPoint(t, EventKind.CIRCLE_RIGHTMOST, i))
    order = {EventKind.ENDPOINT: 0, EventKind.CIRCLE_LEFTMOST: 1, EventKind.CIRCLE_RIGHTMOST: 2}
    # stable sort on t keeps a deterministic order inside equal-t batches
    events.sort(key=lambda e: (order[e.kind], -1 if e.source is None else e.source))
    events.sort(key=lambda e: e.t)
    return events


def _scaled(F: Sequence[Point], s: Segment, rs: list):
    k = common_scale(list(F) + [s.a, s.b])
    if k == 1:
        return list(F), s, rs
    return (
        [scale_point(f, k) for f in F],
        Segment(scale_point(s.a, k), scale_point(s.b, k)),
        [r * k * k for r in rs],
    )


def _covers(f: Point, r2: Number, s: Segment, t: Fraction) -> bool:
    return dist2(s.at(t), f) <= r2


def sweep_intervals(F: Sequence[Point], s: Segment, r2) -> list[tuple[SqrtCoord, SqrtCoord, frozenset[int], list[EventPoint]]]:
    """Elementary open intervals with their active sets.

    Each item is ``(t_from, t_to, active, batch)`` where ``batch`` holds the
    events at ``t_to`` that turn ``active`` into the next interval's set.
    """
    rs = _ranges(F, r2)
    events = build_events(F, s, rs)
    inner = [e for e in events if e.kind is not EventKind.ENDPOINT]
    batches = [list(g) for _, g in groupby(inner, key=lambda e: e.t)]
    stops = [b[0].t for b in batches] + [SqrtCoord(1)]

    probe = rational_between(0, stops[0])
    active = {i for i, f in enumerate(F) if _covers(f, rs[i], s, probe)}
    out = []
    prev = SqrtCoord(0)
    for k, t in enumerate(stops):
        batch = batches[k] if k < len(batches) else []
        out.append((prev, t, frozenset(active), batch))
        for e in batch:
            if e.kind is EventKind.CIRCLE_RIGHTMOST:
                active.discard(e.source)
            else:
                active.add(e.source)
        prev = t
    return out


def _witness_in(t_from: SqrtCoord, t_to: SqrtCoord, clip) -> Fraction:
    """A rational in the open interval that is not inside the clip interval."""
    if clip is not None:
        lo, hi = clip
        if lo is not None and t_from < lo < t_to:
            return lo
        if hi is not None and t_from < hi < t_to:
            return hi
    return rational_between(t_from, t_to)


def decide_segment(F: Sequence[Point], s: Segment, r2) -> DecisionReport:
    """Decide whether every point of ``s`` is 1-well illuminated.

    ``r2`` is the squared range, shared or per source. Disks are closed and
    hull interiors open.
    """
    rs = _ranges(F, r2)
    G, seg, rs_scaled = _scaled(F, s, rs)

    for t in (0, 1):
        q = seg.at(t)
        if not embraces([G[i] for i in in_range(G, q, rs_scaled)], q):
            return DecisionReport(False, Fraction(t), "endpoint")

    intervals = sweep_intervals(G, seg, rs_scaled)
    dh = DynamicHull((i, G[i]) for i in intervals[0][2])
    records = []
    pending = None  # event point awaiting its right-hand neighbour
    for t_from, t_to, active, batch in intervals:
        if set(dh.members) != active:
            raise AssertionError("active set out of sync with the dynamic hull")
        clip = interior_clip(dh.hull, seg)
        # both ends in the closed hull and the open interval in its interior
        ok = (
            clip is not None
            and (clip[0] is None or clip[0] <= t_from)
            and (clip[1] is None or t_to <= clip[1])
        )
        records.append(
            IlluminationInterval(
                EventPoint(t_from, EventKind.ENDPOINT),
                EventPoint(t_to, EventKind.ENDPOINT),
                active,
            )
        )
        if not ok:
            return DecisionReport(False, _witness_in(t_from, t_to, clip), "interval", tuple(records))
        if pending is not None and not _embraces_at(G, pending[1], seg, pending[0]):
            raise AssertionError(f"event point t={pending[0]!r} failed between two accepted intervals")
        if not batch:
            continue
        for e in batch:
            if e.kind is EventKind.CIRCLE_RIGHTMOST:
                if e.source in dh:
                    dh.remove(e.source)
            elif e.source not in dh:
                dh.insert(e.source, G[e.source])
        # closed disks: the event point is reached by both neighbours' sources
        pending = (t_to, set(active) | set(dh.members) | {e.source for e in batch})
    return DecisionReport(True, None, None, tuple(records))


def _embraces_at(G: Sequence[Point], reach, seg: Segment, t: SqrtCoord) -> bool:
    """Strict containment of the possibly irrational point ``q(t)``."""
    idx = sorted(reach)
    h = build_hull([G[i] for i in idx], idx)
    if not h.has_interior:
        return False
    return all(side_sign_at(*side_form(u, v, seg), t) > 0 for u, v in h.edges())


def embraceable_segment(F: Sequence[Point], s: Segment) -> bool:
    """True iff the closed segment lies inside the open hull of ``F``."""
    return embraces(list(F), s.a) and embraces(list(F), s.b)


def _max_reach2(F: Sequence[Point], s: Segment) -> Number:
    return max(max(dist2(s.a, f), dist2(s.b, f)) for f in F)


def mer_segment_bisect(F: Sequence[Point], s: Segment, tol=Fraction(1, 10**9)) -> tuple[Fraction, Fraction]:
    """Bracket ``[lo2, hi2]`` of the squared MER, ``hi2 - lo2 <= tol``.

    The decision is monotone in the range, so plain bisection on the squared
    range converges to the smallest accepted value.
    """
    tol = Fraction(exact(tol))
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not embraceable_segment(F, s):
        raise UnboundedSegment("segment leaves the interior of the source hull")
    lo, hi = Fraction(0), Fraction(_max_reach2(F, s))
    if decide_segment(F, s, lo):
        return lo, lo
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if decide_segment(F, s, mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def mer_segment_exact(F: Sequence[Point], s: Segment) -> tuple[Number, Fraction, int]:
    """Exact squared MER of ``s`` with a witness parameter and its site."""
    from .evoronoi import build_diagram, diagram_mer

    d = build_diagram(F, s)
    if isinstance(d, Unbounded):
        raise UnboundedSegment("segment leaves the interior of the source hull")
    best = diagram_mer(d)
    # an endpoint on a line through two sources can need more than its cell
    for t in (0, 1):
        res = mer_point(F, s.at(t))
        assert isinstance(res, MerResult)
        if res.mer2 > best[0]:
            best = (res.mer2, Fraction(t), res.site)
    return best
