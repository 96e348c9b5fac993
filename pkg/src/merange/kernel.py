"""Exact geometric predicates and constructions.

Every coordinate is an ``int`` or a ``fractions.Fraction``; no float ever
reaches a predicate. Positions on a segment are addressed by the parameter
``t`` with ``q(t) = a + t * (b - a)``. Circle crossings produce quadratic
irrationals which are kept symbolic as :class:`SqrtCoord`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple, Union

Number = Union[int, Fraction]


class GeometryError(Exception):
    """Base class for degenerate-configuration errors raised by the kernel."""


class CollinearBisector(GeometryError):
    """The whole segment is equidistant from both points."""


class Overlap(GeometryError):
    """The line through two points contains the segment."""


def exact(value) -> Number:
    """Convert ``value`` to an exact number, preferring ``int`` when integral.

    Strings are read as decimals (``"0.1"`` is exactly 1/10) and floats by
    their shortest repr, so ``0.1`` also means 1/10.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        q = value
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        q = Fraction(repr(value))
    elif isinstance(value, (str, Decimal)):
        q = Fraction(str(value).strip())
    else:
        raise TypeError(f"cannot read {value!r} as an exact number")
    return q.numerator if q.denominator == 1 else q


class Point(NamedTuple):
    x: Number
    y: Number

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(exact(x), exact(y))


# ScenePoint is the name used throughout the docs; both are the same type.
ScenePoint = Point


class LightSet:
    """An indexed, duplicate-free collection of light sources."""

    __slots__ = ("sources",)

    def __init__(self, sources):
        pts = tuple(p if isinstance(p, Point) else Point.of(*p) for p in sources)
        if not pts:
            raise ValueError("a light set needs at least one source")
        if len(set(pts)) != len(pts):
            raise ValueError("light sources must be pairwise distinct")
        self.sources = pts

    @property
    def n(self) -> int:
        return len(self.sources)

    def __len__(self) -> int:
        return len(self.sources)

    def __getitem__(self, i):
        return self.sources[i]

    def __iter__(self):
        return iter(self.sources)

    def __eq__(self, other) -> bool:
        return isinstance(other, LightSet) and self.sources == other.sources

    def __hash__(self) -> int:
        return hash(self.sources)

    def __repr__(self) -> str:
        return f"LightSet({list(self.sources)!r})"


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate segment: endpoints coincide")

    @property
    def dx(self) -> Number:
        return self.b.x - self.a.x

    @property
    def dy(self) -> Number:
        return self.b.y - self.a.y

    def at(self, t: Number) -> Point:
        a = self.a
        return Point(_norm(a.x + t * self.dx), _norm(a.y + t * self.dy))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def locate(self, p: Point) -> Fraction | None:
        """Parameter of ``p`` on the closed segment, or ``None`` if off it."""
        dx, dy = self.dx, self.dy
        t = Fraction((p.x - self.a.x) * dx + (p.y - self.a.y) * dy, 1) / (dx * dx + dy * dy)
        if 0 <= t <= 1 and self.at(t) == p:
            return t
        return None


def _norm(v: Number) -> Number:
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


def cross(a: Point, b: Point, c: Point) -> Number:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def orientation(a: Point, b: Point, c: Point) -> Orientation:
    d = cross(a, b, c)
    return Orientation.LEFT if d > 0 else Orientation.RIGHT if d < 0 else Orientation.COLLINEAR


def dist2(a: Point, b: Point) -> Number:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def sign_sqrt(a: Number, b: Number, c: Number) -> int:
    """Sign of ``a + b*sqrt(c)`` for rationals with ``c >= 0``."""
    sa = _sgn(a)
    sb = _sgn(b) if c else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs = a * a
    rhs = b * b * c
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def _rational_sqrt(v: Fraction) -> Fraction | None:
    n, d = v.numerator, v.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@total_ordering
class SqrtCoord:
    """The exact value ``u + sign * sqrt(v)``.

    The form is canonical: ``v`` is either zero or not the square of a
    rational, so equality is structural.
    """

    __slots__ = ("u", "v", "sign")

    def __init__(self, u: Number, v: Number = 0, sign: int = 1):
        u = Fraction(u)
        v = Fraction(v)
        if v < 0:
            raise ValueError("radicand must be non-negative")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if v:
            r = _rational_sqrt(v)
            if r is not None:
                u, v = u + sign * r, Fraction(0)
        if not v:
            sign = 1
        self.u, self.v, self.sign = u, v, sign

    @classmethod
    def of(cls, value) -> "SqrtCoord":
        return value if isinstance(value, SqrtCoord) else cls(value)

    @property
    def is_rational(self) -> bool:
        return self.v == 0

    def rational(self) -> Fraction:
        if self.v:
            raise ValueError(f"{self!r} is irrational")
        return self.u

    def _cmp(self, other) -> int:
        o = SqrtCoord.of(other)
        # sign of (u1 - u2) + s1*sqrt(v1) - s2*sqrt(v2)
        a = self.u - o.u
        b1, v1 = self.sign, self.v
        b2, v2 = o.sign, o.v
        if not v2:
            return sign_sqrt(a, b1, v1)
        if not v1:
            return sign_sqrt(a, -b2, v2)
        sx = sign_sqrt(a, b1, v1)
        sy = b2
        if sx != sy:
            return (sx > sy) - (sx < sy)
        # both sides share the sign sx; compare squares
        d = sign_sqrt(a * a + v1 - v2, 2 * a * b1, v1)
        return d if sx > 0 else -d

    def __eq__(self, other) -> bool:
        if not isinstance(other, (SqrtCoord, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other) -> bool:
        if not isinstance(other, (SqrtCoord, int, Fraction)):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self) -> int:
        if not self.v:
            return hash(self.u)
        return hash((self.u, self.v, self.sign))

    def to_decimal(self, digits: int = 50) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            u = Decimal(self.u.numerator) / Decimal(self.u.denominator)
            if not self.v:
                return +u
            v = Decimal(self.v.numerator) / Decimal(self.v.denominator)
            return u + self.sign * v.sqrt()

    def __float__(self) -> float:
        return float(self.to_decimal(20))

    def bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational ``lo <= value <= hi`` with ``hi - lo <= 2**-bits``."""
        if not self.v:
            return self.u, self.u
        scale = 1 << bits
        n = (self.v.numerator * scale * scale) // self.v.denominator
        r = math.isqrt(n)
        lo_root, hi_root = Fraction(r, scale), Fraction(r + 1, scale)
        if self.sign > 0:
            return self.u + lo_root, self.u + hi_root
        return self.u - hi_root, self.u - lo_root

    def __repr__(self) -> str:
        if not self.v:
            return f"SqrtCoord({self.u})"
        op = "+" if self.sign > 0 else "-"
        return f"SqrtCoord({self.u} {op} sqrt({self.v}))"


def rational_between(lo, hi) -> Fraction:
    """A rational strictly between two exact values ``lo < hi``."""
    lo = SqrtCoord.of(lo)
    hi = SqrtCoord.of(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    if lo.is_rational and hi.is_rational:
        return (lo.u + hi.u) / 2
    bits = 8
    while True:
        _, lo_hi = lo.bounds(bits)
        hi_lo, _ = hi.bounds(bits)
        if lo_hi < hi_lo:
            return (lo_hi + hi_lo) / 2
        bits *= 2


# -- linear forms along a segment ------------------------------------------------
#
# Many predicates reduce to the sign of ``A + B*t`` along the segment.


def side_form(u: Point, v: Point, s: Segment) -> tuple[Number, Number]:
    """Coefficients ``(A, B)`` with ``cross(u, v, q(t)) == A + B*t``."""
    ex, ey = v.x - u.x, v.y - u.y
    A = ex * (s.a.y - u.y) - ey * (s.a.x - u.x)
    B = ex * s.dy - ey * s.dx
    return A, B


def bisector_form(f: Point, g: Point, s: Segment) -> tuple[Number, Number]:
    """Coefficients with ``dist2(q(t), g) - dist2(q(t), f) == C + D*t``."""
    a = s.a
    C = dist2(a, g) - dist2(a, f)
    D = 2 * (s.dx * (f.x - g.x) + s.dy * (f.y - g.y))
    return C, D


def _root(A: Number, B: Number) -> Fraction:
    return Fraction(-A, 1) / B if isinstance(A, int) and isinstance(B, int) else Fraction(-A) / B


def bisector_hits_segment(f: Point, g: Point, s: Segment) -> Fraction | None:
    """Parameter where ``s`` meets the perpendicular bisector of ``f`` and ``g``."""
    if f == g:
        raise ValueError("bisector of a point with itself")
    C, D = bisector_form(f, g, s)
    if D == 0:
        if C == 0:
            raise CollinearBisector(f"segment lies on the bisector of {f} and {g}")
        return None
    t = _root(C, D)
    return t if 0 <= t <= 1 else None


def line_hits_segment(f: Point, g: Point, s: Segment) -> Fraction | None:
    """Parameter where ``s`` meets the line through ``f`` and ``g``."""
    if f == g:
        raise ValueError("line through a single point")
    A, B = side_form(f, g, s)
    if B == 0:
        if A == 0:
            raise Overlap(f"line through {f} and {g} contains the segment")
        return None
    t = _root(A, B)
    return t if 0 <= t <= 1 else None


class Side(enum.Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"
    TANGENT = "tangent"  # single point carrying both roles


def foot_parameter(c: Point, s: Segment) -> Fraction:
    """Parameter of the orthogonal projection of ``c`` on the line of ``s``."""
    dx, dy = s.dx, s.dy
    return Fraction((c.x - s.a.x) * dx + (c.y - s.a.y) * dy, 1) / (dx * dx + dy * dy)


def circle_roots(center: Point, r2: Number, s: Segment) -> tuple[SqrtCoord, SqrtCoord] | None:
    """Both roots of ``dist2(q(t), center) == r2`` on the supporting line."""
    dx, dy = s.dx, s.dy
    A = dx * dx + dy * dy
    ax, ay = s.a.x - center.x, s.a.y - center.y
    B = dx * ax + dy * ay
    C = ax * ax + ay * ay - r2
    disc = B * B - A * C
    if disc < 0:
        return None
    u = Fraction(-B) / A
    v = Fraction(disc) / (A * A)
    return SqrtCoord(u, v, -1), SqrtCoord(u, v, 1)


def circle_hits_segment(center: Point, r2: Number, s: Segment) -> list[tuple[SqrtCoord, Side]]:
    """Crossings of the closed segment with the circle of squared radius ``r2``."""
    if r2 < 0:
        raise ValueError("negative squared radius")
    roots = circle_roots(center, r2, s)
    if roots is None:
        return []
    lo, hi = roots
    if lo == hi:
        return [(lo, Side.TANGENT)] if 0 <= lo <= 1 else []
    out = []
    if 0 <= lo <= 1:
        out.append((lo, Side.LEFTMOST))
    if 0 <= hi <= 1:
        out.append((hi, Side.RIGHTMOST))
    return out


def side_sign_at(A: Number, B: Number, t) -> int:
    """Sign of ``A + B*t`` where ``t`` may be a :class:`SqrtCoord`."""
    if isinstance(t, SqrtCoord):
        return sign_sqrt(A + B * t.u, B * t.sign, t.v)
    return _sgn(A + B * t)


def dist2_minus_at(g: Point, r2: Number, s: Segment, t) -> int:
    """Sign of ``dist2(q(t), g) - r2`` for a possibly irrational ``t``."""
    dx, dy = s.dx, s.dy
    E = dx * dx + dy * dy
    ax, ay = s.a.x - g.x, s.a.y - g.y
    B = dx * ax + dy * ay
    C = ax * ax + ay * ay - r2
    if isinstance(t, SqrtCoord):
        u, v, sg = t.u, t.v, t.sign
        # E t^2 + 2 B t + C with t^2 = u^2 + v + 2 u sg sqrt(v)
        return sign_sqrt(E * (u * u + v) + 2 * B * u + C, (2 * E * u + 2 * B) * sg, v)
    return _sgn(E * t * t + 2 * B * t + C)


def common_scale(points) -> int:
    """Least common denominator of all coordinates."""
    k = 1
    for p in points:
        for c in p:
            if isinstance(c, Fraction):
                k = math.lcm(k, c.denominator)
    return k


def scale_point(p: Point, k: int) -> Point:
    return Point(_norm(p.x * k), _norm(p.y * k))
