"""Command-line interface.

Every command reads a scene file and writes one JSON document to stdout.
Exit codes: 0 success, 1 parse or usage error, 2 unbounded, 3 domain
violation, 4 ``--verify`` mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .evoronoi import EVoronoiDiagram, build_diagram, query
from .kernel import Number, Point, Segment, exact
from .oracles import oracle_decide_segment, oracle_diagram, oracle_mer_point, oracle_mer_segment
from .point import MerResult, Unbounded, is_well_illuminated_point, mer_point
from .render import render_svg
from .scene import ParseError, Scene, load_scene
from .segment import UnboundedSegment, decide_segment, mer_segment_bisect, mer_segment_exact

log = logging.getLogger("merange")

EXIT_OK, EXIT_PARSE, EXIT_UNBOUNDED, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3, 4


class DomainError(ValueError):
    pass


def fmt_exact(q: Number) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fmt_sqrt(q2: Number, digits: int = 12) -> str:
    """``sqrt(q2)`` in fixed notation, rounded to ``digits`` significant digits."""
    q2 = Fraction(q2)
    if q2 == 0:
        return "0." + "0" * (digits - 1)
    with localcontext() as ctx:
        ctx.prec = digits + 30
        r = (Decimal(q2.numerator) / Decimal(q2.denominator)).sqrt()
        for _ in range(2):
            exp = r.adjusted() - (digits - 1)
            r = r.quantize(Decimal(1).scaleb(exp), rounding=ROUND_HALF_EVEN)
        return format(r, "f")


def _pt(p: Point) -> list[str]:
    return [str(p.x), str(p.y)]


def _require_segment(scene: Scene) -> Segment:
    if scene.segment is None:
        raise DomainError("scene has no segment")
    return scene.segment


def _point_payload(res) -> dict:
    if not isinstance(res, MerResult):
        return {"unbounded": True}
    return {
        "mer": fmt_sqrt(res.mer2),
        "mer2_exact": fmt_exact(res.mer2),
        "site": res.site,
        "cet": list(res.cet) if res.cet is not None else None,
        "prefix_size": res.embracing_prefix_size,
    }


def _same_point_result(a, b) -> bool:
    if isinstance(a, MerResult) != isinstance(b, MerResult):
        return False
    if not isinstance(a, MerResult):
        return True
    return (a.mer2, a.site) == (b.mer2, b.site)


def cmd_mer_point(scene: Scene, point: Point | None = None, verify: bool = False) -> tuple[dict, int]:
    if point is not None:
        points = [point]
    elif scene.segment_point is not None:
        points = [scene.segment_point]
    else:
        points = [q for q in scene.queries if isinstance(q, Point)]
    if not points:
        raise DomainError("no query point: pass --point or add [x, y] entries to 'queries'")
    F = list(scene.sources)
    payloads, code, agree = [], EXIT_OK, True
    for p in points:
        res = mer_point(F, p)
        body = _point_payload(res)
        if verify:
            ok = _same_point_result(res, oracle_mer_point(F, p))
            body["verify"] = {"agree": ok}
            agree &= ok
        if not isinstance(res, MerResult):
            code = EXIT_UNBOUNDED
        payloads.append(body)
    payload = payloads[0] if len(payloads) == 1 else {"results": payloads}
    if not agree:
        code = EXIT_VERIFY
    return payload, code


def cmd_decide(scene: Scene, verify: bool = False) -> tuple[dict, int]:
    r2 = scene.squared_ranges()
    if r2 is None:
        raise DomainError("scene needs 'range' or 'ranges' for a decision")
    F = list(scene.sources)
    if scene.segment_point is not None:
        ok = is_well_illuminated_point(F, scene.segment_point, r2)
        payload = {"verdict": ok}
        if not ok:
            payload["witness"] = {"t": "0/1", "point": _pt(scene.segment_point), "reason": "endpoint"}
        return payload, EXIT_OK
    s = _require_segment(scene)
    rep = decide_segment(F, s, r2)
    payload: dict = {"verdict": rep.verdict}
    if not rep.verdict:
        payload["witness"] = {"t": fmt_exact(rep.witness), "point": _pt(s.at(rep.witness)), "reason": rep.reason}
    code = EXIT_OK
    if verify:
        ok = oracle_decide_segment(F, s, r2) == rep.verdict
        payload["verify"] = {"agree": ok}
        if not ok:
            code = EXIT_VERIFY
    return payload, code


def _segment_result(F, s: Segment, method: str, tol: Fraction) -> dict:
    if method == "bisect":
        lo2, hi2 = mer_segment_bisect(F, s, tol)
        return {
            "method": "bisect",
            "mer": fmt_sqrt(hi2),
            "lo2": fmt_exact(lo2),
            "hi2": fmt_exact(hi2),
            "argmax_t": None,
            "site": None,
        }
    mer2, t, site = mer_segment_exact(F, s)
    return {
        "method": "exact",
        "mer": fmt_sqrt(mer2),
        "mer2_exact": fmt_exact(mer2),
        "argmax_t": fmt_exact(t),
        "site": site,
    }


def _verify_segment(F, s: Segment, body: dict) -> bool:
    oracle = oracle_mer_segment(F, s)
    if isinstance(oracle, Unbounded):
        return False
    if body["method"] == "exact":
        return Fraction(body["mer2_exact"]) == oracle
    return Fraction(body["lo2"]) <= oracle <= Fraction(body["hi2"])


def cmd_mer_segment(scene: Scene, method: str = "exact", tol=Fraction(1, 10**9), verify: bool = False) -> tuple[dict, int]:
    F = list(scene.sources)
    if scene.segment_point is not None:
        return cmd_mer_point(scene, scene.segment_point, verify)
    s = _require_segment(scene)
    try:
        body = _segment_result(F, s, method, Fraction(exact(tol)))
    except UnboundedSegment:
        return {"unbounded": True}, EXIT_UNBOUNDED
    code = EXIT_OK
    if verify:
        ok = _verify_segment(F, s, body)
        body["verify"] = {"agree": ok}
        if not ok:
            code = EXIT_VERIFY
    return body, code


def _diagram_payload(d: EVoronoiDiagram) -> dict:
    return {
        "cells": [
            {"t_lo": fmt_exact(c.t_lo), "t_hi": fmt_exact(c.t_hi), "site": c.site, "peak2": fmt_exact(c.peak2)}
            for c in d.cells
        ],
        "breakpoints": [
            {"t": fmt_exact(b.t), "kind": b.kind, "left": b.left, "right": b.right} for b in d.annotations
        ],
        "tied_pairs": [list(p) for p in d.tied_pairs],
    }


def cmd_evoronoi(scene: Scene, svg: str | Path | None = None, verify: bool = False) -> tuple[dict, int]:
    F = list(scene.sources)
    s = _require_segment(scene)
    d = build_diagram(F, s)
    if isinstance(d, Unbounded):
        return {"unbounded": True}, EXIT_UNBOUNDED
    payload = _diagram_payload(d)
    if d.tied_pairs:
        log.warning("segment lies on the bisector of %s; ties resolved by lowest index", d.tied_pairs)
    if svg is not None:
        Path(svg).write_text(render_svg(F, s, d), encoding="utf-8")
    code = EXIT_OK
    if verify:
        o = oracle_diagram(F, s)
        ok = not isinstance(o, Unbounded) and o.breakpoints == d.breakpoints and o.sites() == d.sites()
        payload["verify"] = {"agree": ok}
        if not ok:
            code = EXIT_VERIFY
    return payload, code


def cmd_query(scene: Scene, t=None, point: Point | None = None, verify: bool = False) -> tuple[dict, int]:
    F = list(scene.sources)
    s = _require_segment(scene)
    targets = []
    if t is not None:
        targets.append(Fraction(exact(t)))
    elif point is not None:
        targets.append(point)
    else:
        targets = list(scene.queries)
    if not targets:
        raise DomainError("no query: pass --t or --point, or add 'queries' to the scene")
    ts = []
    for q in targets:
        if isinstance(q, Point):
            tq = s.locate(q)
            if tq is None:
                raise DomainError(f"point {q.x}, {q.y} is not on the segment")
            ts.append(tq)
        else:
            if not 0 <= q <= 1:
                raise DomainError(f"t={q} outside [0, 1]")
            ts.append(q)
    d = build_diagram(F, s)
    if isinstance(d, Unbounded):
        return {"unbounded": True}, EXIT_UNBOUNDED
    results, agree = [], True
    for tq in ts:
        site, mer2 = query(d, F, s, tq)
        body = {"t": fmt_exact(tq), "site": site, "mer": fmt_sqrt(mer2), "mer2_exact": fmt_exact(mer2)}
        if verify:
            # breakpoints resolve to the left cell, so compare ranges there
            ref = oracle_mer_point(F, s.at(tq))
            ok = isinstance(ref, MerResult) and (ref.site == site or tq in d.breakpoints)
            body["verify"] = {"agree": ok}
            agree &= ok
        results.append(body)
    payload = results[0] if len(results) == 1 else {"results": results}
    return payload, EXIT_OK if agree else EXIT_VERIFY


def cmd_mer_polyline(scene: Scene, method: str = "exact", tol=Fraction(1, 10**9), verify: bool = False) -> tuple[dict, int]:
    if scene.polyline is None:
        raise DomainError("scene has no polyline")
    F = list(scene.sources)
    legs, agree = [], True
    best = None
    tol = Fraction(exact(tol))
    for k, (a, b) in enumerate(zip(scene.polyline, scene.polyline[1:])):
        s = Segment(a, b)
        try:
            body = _segment_result(F, s, method, tol)
        except UnboundedSegment:
            return {"unbounded": True, "leg": k}, EXIT_UNBOUNDED
        value = Fraction(body["mer2_exact"] if method == "exact" else body["hi2"])
        if verify:
            ok = _verify_segment(F, s, body)
            body["verify"] = {"agree": ok}
            agree &= ok
        body = {"leg": k, **body}
        legs.append(body)
        if best is None or value > best:
            best = value
    payload = {"mer": fmt_sqrt(best), "mer2_exact": fmt_exact(best), "per_leg": legs}
    return payload, EXIT_OK if agree else EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", required=True, help="scene JSON file")
    common.add_argument("--verify", action="store_true", help="cross-check against the brute-force oracle")
    common.add_argument("--svg", help="write an SVG rendering (evoronoi)")
    common.add_argument("--tol", default="1e-9", help="bisection tolerance on the squared range")
    common.add_argument("--method", choices=("exact", "bisect"), default="exact")

    parser = _Parser(prog="merange", description="Minimum embracing ranges for 1-good illumination.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mer-point", parents=[common], help="MER and CET of a point")
    p.add_argument("--point", nargs=2, metavar=("X", "Y"))
    sub.add_parser("decide", parents=[common], help="is the segment 1-well illuminated at the scene range?")
    sub.add_parser("mer-segment", parents=[common], help="MER of the segment")
    sub.add_parser("evoronoi", parents=[common], help="E-Voronoi diagram restricted to the segment")
    p = sub.add_parser("query", parents=[common], help="MER of a point of the segment")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t")
    g.add_argument("--point", nargs=2, metavar=("X", "Y"))
    sub.add_parser("mer-polyline", parents=[common], help="MER of the scene polyline")
    return parser


def run(argv: list[str] | None = None) -> tuple[dict, int]:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        scene = load_scene(args.scene)
        point = Point.of(*args.point) if getattr(args, "point", None) else None
        tol = exact(args.tol)
        if tol <= 0:
            raise ParseError("--tol must be positive")
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        return {"error": str(exc)}, EXIT_PARSE
    try:
        if args.command == "mer-point":
            return cmd_mer_point(scene, point, args.verify)
        if args.command == "decide":
            return cmd_decide(scene, args.verify)
        if args.command == "mer-segment":
            return cmd_mer_segment(scene, args.method, tol, args.verify)
        if args.command == "evoronoi":
            return cmd_evoronoi(scene, args.svg, args.verify)
        if args.command == "query":
            return cmd_query(scene, args.t, point, args.verify)
        return cmd_mer_polyline(scene, args.method, tol, args.verify)
    except DomainError as exc:
        return {"error": str(exc)}, EXIT_DOMAIN
    except (ValueError, ZeroDivisionError) as exc:
        return {"error": str(exc)}, EXIT_PARSE


def main(argv: list[str] | None = None) -> int:
    payload, code = run(argv)
    if "error" in payload:
        log.error(payload["error"])
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
