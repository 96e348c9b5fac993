"""Scene files: UTF-8 JSON with exactly-read coordinates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .kernel import LightSet, Number, Point, Segment, exact

ALLOWED_KEYS = {"sources", "segment", "polyline", "range", "ranges", "queries"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str | None = None):
        self.line, self.column, self.path = line, column, path
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(path)
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)


@dataclass
class Scene:
    sources: LightSet
    segment: Segment | None = None
    # set instead of ``segment`` when both endpoints coincide
    segment_point: Point | None = None
    polyline: list[Point] | None = None
    range: Number | None = None
    ranges: list[Number] | None = None
    queries: list = field(default_factory=list)

    def squared_ranges(self):
        """Squared range(s) for the decision: per source if given, else shared."""
        if self.ranges is not None:
            return [r * r for r in self.ranges]
        if self.range is not None:
            return self.range * self.range
        return None


def _number(v, path: str) -> Number:
    if isinstance(v, bool) or not isinstance(v, (int, float, str, Fraction)):
        raise ParseError(f"expected a number, got {type(v).__name__}", path=path)
    try:
        return exact(v)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"bad number {v!r}: {exc}", path=path) from None


def _point(v, path: str) -> Point:
    if not isinstance(v, list) or len(v) != 2:
        raise ParseError("expected an [x, y] pair", path=path)
    return Point(_number(v[0], f"{path}[0]"), _number(v[1], f"{path}[1]"))


def parse_scene(text: str) -> Scene:
    try:
        # floats arrive as their decimal text and are read exactly
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("scene must be a JSON object")
    unknown = sorted(set(data) - ALLOWED_KEYS)
    if unknown:
        raise ParseError(f"unknown keys: {', '.join(unknown)}")
    if "sources" not in data:
        raise ParseError("missing 'sources'")
    raw = data["sources"]
    if not isinstance(raw, list) or not raw:
        raise ParseError("'sources' must be a non-empty list", path="sources")
    pts = [_point(p, f"sources[{i}]") for i, p in enumerate(raw)]
    try:
        sources = LightSet(pts)
    except ValueError as exc:
        raise ParseError(str(exc), path="sources") from None
    scene = Scene(sources=sources)

    if "segment" in data:
        seg = data["segment"]
        if not isinstance(seg, dict) or set(seg) != {"a", "b"}:
            raise ParseError("'segment' must be an object with keys 'a' and 'b'", path="segment")
        a, b = _point(seg["a"], "segment.a"), _point(seg["b"], "segment.b")
        if a == b:
            scene.segment_point = a
        else:
            scene.segment = Segment(a, b)

    if "polyline" in data:
        raw = data["polyline"]
        if not isinstance(raw, list) or len(raw) < 2:
            raise ParseError("'polyline' needs at least two vertices", path="polyline")
        poly = [_point(p, f"polyline[{i}]") for i, p in enumerate(raw)]
        for i in range(len(poly) - 1):
            if poly[i] == poly[i + 1]:
                raise ParseError("consecutive polyline vertices coincide", path=f"polyline[{i + 1}]")
        scene.polyline = poly

    if "range" in data:
        r = _number(data["range"], "range")
        if r < 0:
            raise ParseError("range must be non-negative", path="range")
        scene.range = r
    if "ranges" in data:
        raw = data["ranges"]
        if not isinstance(raw, list) or len(raw) != len(pts):
            raise ParseError("'ranges' needs one entry per source", path="ranges")
        rs = [_number(r, f"ranges[{i}]") for i, r in enumerate(raw)]
        if any(r < 0 for r in rs):
            raise ParseError("ranges must be non-negative", path="ranges")
        scene.ranges = rs

    if "queries" in data:
        raw = data["queries"]
        if not isinstance(raw, list):
            raise ParseError("'queries' must be a list", path="queries")
        for i, q in enumerate(raw):
            if isinstance(q, list):
                scene.queries.append(_point(q, f"queries[{i}]"))
            else:
                scene.queries.append(Fraction(_number(q, f"queries[{i}]")))
    return scene


def load_scene(path: str | Path) -> Scene:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read scene: {exc}") from None
    return parse_scene(text)


def scene_to_json(scene: Scene) -> dict:
    """Inverse of :func:`parse_scene`, with numbers written as exact strings."""

    def num(v):
        return str(v)

    def pt(p):
        return [num(p.x), num(p.y)]

    out: dict = {"sources": [pt(p) for p in scene.sources]}
    if scene.segment is not None:
        out["segment"] = {"a": pt(scene.segment.a), "b": pt(scene.segment.b)}
    elif scene.segment_point is not None:
        out["segment"] = {"a": pt(scene.segment_point), "b": pt(scene.segment_point)}
    if scene.polyline is not None:
        out["polyline"] = [pt(p) for p in scene.polyline]
    if scene.range is not None:
        out["range"] = num(scene.range)
    if scene.ranges is not None:
        out["ranges"] = [num(r) for r in scene.ranges]
    if scene.queries:
        out["queries"] = [pt(q) if isinstance(q, Point) else num(q) for q in scene.queries]
    return out
