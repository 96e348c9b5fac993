"""Minimum embracing range of a single point.

The closest embracing site of ``p`` is found by halving the distance-sorted
source list: the closer half is tested for strict containment of ``p`` and
the search recurses into whichever half holds the boundary of the minimal
embracing prefix.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

from .kernel import Number, Orientation, Point, common_scale, cross, dist2, orientation

__all__ = [
    "MerResult",
    "Unbounded",
    "UNBOUNDED",
    "CetUnavailable",
    "embraces",
    "mer_point",
    "is_well_illuminated_point",
    "extract_cet",
    "in_range",
]


class CetUnavailable(RuntimeError):
    """The supplied site and range do not admit a closest embracing triangle."""


class Unbounded:
    """Marker: the point is not strictly inside the hull of all sources."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __bool__(self) -> bool:
        return False


UNBOUNDED = Unbounded()


@dataclass(frozen=True)
class MerResult:
    mer2: Number
    site: int
    # None only when p sits on a line through f_p and two other in-range
    # sources in such a way that no triangle through f_p encloses it.
    cet: tuple[int, int, int] | None
    embracing_prefix_size: int


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else 1 if c < 0 else 0


_angle_key = functools.cmp_to_key(_angle_cmp)


def _frame(points: Sequence[Point], p: Point) -> list[tuple[int, int]]:
    """Integer vectors ``k * (q - p)`` for a common denominator ``k``."""
    k = common_scale([*points, p])
    px, py = p
    if k == 1:
        return [(x - px, y - py) for x, y in points]
    return [(int((x - px) * k), int((y - py) * k)) for x, y in points]


def _embraces_vecs(vecs) -> bool:
    vs = [v for v in vecs if v[0] or v[1]]
    if len(vs) < 3:
        return False
    vs.sort(key=_angle_key)
    dirs = [vs[0]]
    for v in vs[1:]:
        if _angle_cmp(dirs[-1], v) != 0:
            dirs.append(v)
    k = len(dirs)
    if k < 3:
        return False
    for i in range(k):
        (ux, uy), (vx, vy) = dirs[i], dirs[(i + 1) % k]
        if ux * vy - uy * vx <= 0:
            return False
    return True


def embraces(points: Sequence[Point], p: Point) -> bool:
    """True iff ``p`` lies in the open interior of the hull of ``points``.

    Angular test: the directions from ``p`` must leave no gap of half a
    turn or more.
    """
    return _embraces_vecs(_frame(list(points), p))


def _select_lower(keyed: list, m: int) -> tuple[list, list]:
    """Split ``keyed`` into its ``m`` smallest elements and the rest."""
    lower: list = []
    upper: list = []
    items = keyed
    while True:
        pivot = items[len(items) // 2]
        lt = [it for it in items if it < pivot]
        eq = [it for it in items if it == pivot]
        gt = [it for it in items if it > pivot]
        if m < len(lt):
            upper.extend(eq)
            upper.extend(gt)
            items = lt
        elif m <= len(lt) + len(eq):
            k = m - len(lt)
            lower.extend(lt)
            lower.extend(eq[:k])
            upper.extend(eq[k:])
            upper.extend(gt)
            return lower, upper
        else:
            lower.extend(lt)
            lower.extend(eq)
            m -= len(lt) + len(eq)
            items = gt


def mer_point(F: Sequence[Point], p: Point) -> MerResult | Unbounded:
    """Squared MER of ``p``, its closest embracing site and a CET."""
    sources = list(F)
    vecs = _frame(sources, p)
    if len(vecs) < 3 or not _embraces_vecs(vecs):
        return UNBOUNDED
    # keys in the scaled frame order exactly like true squared distances
    keyed = [(x * x + y * y, i) for i, (x, y) in enumerate(vecs)]

    base: list = []
    cand = keyed
    while len(cand) > 1:
        lower, upper = _select_lower(cand, (len(cand) + 1) // 2)
        trial = base + [vecs[i] for _, i in lower]
        if _embraces_vecs(trial):
            cand = lower
        else:
            base = trial
            cand = upper
    _, site = cand[0]
    d2 = dist2(p, sources[site])
    cet = extract_cet(sources, p, site, d2)
    return MerResult(mer2=d2, site=site, cet=cet, embracing_prefix_size=len(base) + 1)


def extract_cet(F: Sequence[Point], p: Point, site: int, mer2: Number) -> tuple[int, int, int] | None:
    """Pick one source on each side of line(p, f_p) completing a triangle around p.

    Sources within range that lie on line(p, f_p) can never complete such a
    triangle and are skipped. Returns ``None`` when every pair leaves ``p``
    on an edge (``p`` on a diagonal of a quadrilateral, say); raises :class:`CetUnavailable` when one side is empty, which
    contradicts ``site`` being the closest embracing site.
    """
    fp = F[site]
    key = (mer2, site)
    left: list[int] = []
    right: list[int] = []
    for i, g in enumerate(F):
        if i == site or (dist2(p, g), i) > key:
            continue
        o = orientation(p, fp, g)
        if o is Orientation.LEFT:
            left.append(i)
        elif o is Orientation.RIGHT:
            right.append(i)
    if not left or not right:
        raise CetUnavailable(f"source {site} does not embrace {p} at range^2 {mer2}")

    def encloses(i: int, j: int) -> bool:
        a, b = F[i], F[j]
        tri = (fp, b, a) if cross(fp, b, a) > 0 else (fp, a, b)
        return all(cross(tri[k], tri[(k + 1) % 3], p) > 0 for k in range(3))

    # p lands on edge (f_l, f_r) only when f_l, p, f_r are collinear
    for i in left:
        for j in right:
            if orientation(F[i], p, F[j]) is not Orientation.COLLINEAR and encloses(i, j):
                return tuple(sorted((i, site, j)))
    return None


def in_range(F: Sequence[Point], p: Point, r2) -> list[int]:
    """Indices of sources whose closed disk reaches ``p``.

    ``r2`` is a single squared range or one per source.
    """
    if isinstance(r2, (list, tuple)):
        return [i for i, f in enumerate(F) if dist2(p, f) <= r2[i]]
    return [i for i, f in enumerate(F) if dist2(p, f) <= r2]


def is_well_illuminated_point(F: Sequence[Point], p: Point, r2) -> bool:
    """Closed-disk decision at a single point."""
    if not isinstance(r2, (list, tuple)):
        if r2 < 0:
            raise ValueError("negative squared range")
        res = mer_point(F, p)
        return isinstance(res, MerResult) and res.mer2 <= r2
    return embraces([F[i] for i in in_range(F, p, r2)], p)
