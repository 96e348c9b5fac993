"""Minimum embracing ranges for 1-good illumination of points, segments and polylines."""

from .evoronoi import EVoronoiCell, EVoronoiDiagram, TilingGap, build_diagram, diagram_mer, query
from .hull import DynamicHull, Hull, build_hull, interior_clip
from .kernel import LightSet, Orientation, Point, ScenePoint, Segment, SqrtCoord, dist2, orientation
from .point import UNBOUNDED, MerResult, Unbounded, embraces, extract_cet, is_well_illuminated_point, mer_point
from .scene import ParseError, Scene, load_scene, parse_scene
from .segment import UnboundedSegment, decide_segment, mer_segment_bisect, mer_segment_exact

__all__ = [
    "EVoronoiCell",
    "EVoronoiDiagram",
    "TilingGap",
    "build_diagram",
    "diagram_mer",
    "query",
    "DynamicHull",
    "Hull",
    "build_hull",
    "interior_clip",
    "LightSet",
    "Orientation",
    "Point",
    "ScenePoint",
    "Segment",
    "SqrtCoord",
    "dist2",
    "orientation",
    "UNBOUNDED",
    "MerResult",
    "Unbounded",
    "embraces",
    "extract_cet",
    "is_well_illuminated_point",
    "mer_point",
    "ParseError",
    "Scene",
    "load_scene",
    "parse_scene",
    "UnboundedSegment",
    "decide_segment",
    "mer_segment_bisect",
    "mer_segment_exact",
]
