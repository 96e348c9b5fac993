import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from merange.cli import cmd_mer_polyline, cmd_mer_segment, fmt_exact, fmt_sqrt, main
from merange.kernel import Point, Segment
from merange.scene import ParseError, Scene, parse_scene, scene_to_json
from merange.kernel import LightSet

THREE = {"sources": [[0, 0], [10, 0], [5, 6]], "segment": {"a": [2, 1], "b": [8, 1]}}
TRI = {"sources": [[0, 0], [10, 0], [5, 8]], "segment": {"a": [4, 2], "b": [6, 2]}}


@pytest.fixture
def write(tmp_path):
    def _write(data, name="scene.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_number_formatting():
    assert fmt_sqrt(9) == "3.00000000000"
    assert fmt_sqrt(65) == "8.06225774830"
    assert fmt_sqrt(Fraction(1, 4)) == "0.500000000000"
    assert fmt_sqrt(10**6) == "1000.00000000"
    assert fmt_sqrt(0) == "0.00000000000"
    assert fmt_exact(9) == "9/1" and fmt_exact(Fraction(145, 4)) == "145/4"


def test_mer_point_command(capsys, write):
    path = write({"sources": [[0, 0], [4, 0], [2, 4]]})
    code, out = run(capsys, "mer-point", "--scene", path, "--point", "2", "1")
    assert code == 0 and out["mer"] == "3.00000000000" and out["mer2_exact"] == "9/1"
    assert out["site"] == 2 and out["cet"] == [0, 1, 2] and out["prefix_size"] == 3
    five = {"sources": [[1, 0], [2, 0], [3, 0], ["-0.5", 5], [-0.5, -6]]}
    code, out = run(capsys, "mer-point", "--scene", write(five), "--point", "0", "0", "--verify")
    assert code == 0 and out["mer2_exact"] == "145/4" and out["verify"]["agree"]
    code, out = run(capsys, "mer-point", "--scene", path, "--point", "10", "10")
    assert code == 2 and out == {"unbounded": True}


def test_decide_command(capsys, write):
    code, out = run(capsys, "decide", "--scene", write({**TRI, "range": 13}), "--verify")
    assert code == 0 and out["verdict"] is True and out["verify"]["agree"]
    code, out = run(capsys, "decide", "--scene", write({**TRI, "range": 1}))
    assert code == 0 and out["verdict"] is False and out["witness"]["reason"] == "endpoint"
    ranges = {**TRI, "ranges": [7, 7, "6.5"]}
    code, out = run(capsys, "decide", "--scene", write(ranges), "--verify")
    assert code == 0 and out["verify"]["agree"]
    code, out = run(capsys, "decide", "--scene", write(TRI))
    assert code == 3


def test_mer_segment_command(capsys, write):
    path = write(THREE)
    code, out = run(capsys, "mer-segment", "--scene", path, "--verify")
    assert code == 0 and out["mer"] == "8.06225774830" and out["argmax_t"] == "1/1" and out["site"] == 0
    code, out = run(capsys, "mer-segment", "--scene", path, "--method", "bisect", "--tol", "1e-6")
    lo, hi = Fraction(out["lo2"]), Fraction(out["hi2"])
    assert code == 0 and lo <= 65 <= hi and hi - lo <= Fraction(1, 10**6)
    code, out = run(capsys, "mer-segment", "--scene", write({**THREE, "segment": {"a": [2, 1], "b": [20, 1]}}))
    assert code == 2 and out["unbounded"]


def test_degenerate_segment_routes_to_point(capsys, write):
    path = write({"sources": [[0, 0], [4, 0], [2, 4]], "segment": {"a": [2, 1], "b": [2, 1]}})
    code, out = run(capsys, "mer-segment", "--scene", path)
    assert code == 0 and out["mer2_exact"] == "9/1"


def test_evoronoi_command(capsys, write, tmp_path):
    svg = tmp_path / "out.svg"
    code, out = run(capsys, "evoronoi", "--scene", write(THREE), "--svg", str(svg), "--verify")
    assert code == 0 and out["verify"]["agree"]
    assert [(c["t_lo"], c["t_hi"], c["site"]) for c in out["cells"]] == [("0/1", "1/2", 1), ("1/2", "1/1", 0)]
    assert out["breakpoints"][0]["t"] == "1/2"
    text = svg.read_text()
    assert text.count('<polyline class="cell"') == 2
    assert text.count('<circle class="source"') == 3


def test_evoronoi_mirror_scene(capsys, write):
    sq = {"sources": [[0, 0], [10, 0], [10, 10], [0, 10]], "segment": {"a": [2, 3], "b": [8, 3]}}
    code, out = run(capsys, "evoronoi", "--scene", write(sq))
    lows = [Fraction(c["t_lo"]) for c in out["cells"]]
    highs = [Fraction(c["t_hi"]) for c in out["cells"]]
    assert sorted(1 - h for h in highs) == lows


def test_query_command(capsys, write):
    path = write(THREE)
    code, out = run(capsys, "query", "--scene", path, "--point", "3", "1")
    assert code == 0 and out["site"] == 1 and out["mer2_exact"] == "50/1"
    code, out = run(capsys, "query", "--scene", path, "--t", "0.5", "--verify")
    assert code == 0 and out["site"] == 1 and out["mer2_exact"] == "26/1"
    code, out = run(capsys, "query", "--scene", path, "--point", "3", "2")
    assert code == 3
    code, out = run(capsys, "query", "--scene", path, "--t", "1.5")
    assert code == 3


def test_polyline_command(capsys, write):
    poly = {"sources": THREE["sources"], "polyline": [[2, 1], [5, 1], [8, 1]]}
    code, out = run(capsys, "mer-polyline", "--scene", write(poly), "--verify")
    assert code == 0 and out["mer2_exact"] == "65/1" and [leg["leg"] for leg in out["per_leg"]] == [0, 1]
    single = {"sources": THREE["sources"], "polyline": [[2, 1], [8, 1]]}
    _, whole = run(capsys, "mer-segment", "--scene", write(THREE))
    _, legs = run(capsys, "mer-polyline", "--scene", write(single))
    assert legs["mer2_exact"] == whole["mer2_exact"]
    bad = {"sources": THREE["sources"], "polyline": [[2, 1], [5, 1], [5, 20]]}
    code, out = run(capsys, "mer-polyline", "--scene", write(bad))
    assert code == 2 and out == {"unbounded": True, "leg": 1}


def test_parse_and_usage_errors(capsys, write):
    for argv in (["nonsense"], ["decide"], ["mer-segment", "--scene", "x", "--method", "fast"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
    code, out = run(capsys, "decide", "--scene", write('{"sources": [[0, 0]], "bogus": 1}'))
    assert code == 1 and "bogus" in out["error"]
    code, out = run(capsys, "decide", "--scene", write('{"sources": [[0, 0],'))
    assert code == 1 and "line 1" in out["error"]


def test_output_is_deterministic(write):
    path = write(THREE)
    cmd = [sys.executable, "-m", "merange", "evoronoi", "--scene", path]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["cells"]


def test_scene_parsing_rules():
    s = parse_scene('{"sources": [[0.1, "0.2"], [1, 1], [2, 0]], "range": 0.5, "queries": [0.25, [1, 1]]}')
    assert s.sources[0] == Point(Fraction(1, 10), Fraction(1, 5))
    assert s.squared_ranges() == Fraction(1, 4)
    assert s.queries == [Fraction(1, 4), Point(1, 1)]
    for bad in (
        '{"sources": []}',
        '{"sources": [[0, 0], [0, 0]]}',
        '{"sources": [[0, 0]], "polyline": [[1, 1], [1, 1]]}',
        '{"sources": [[0, 0]], "range": -1}',
        '{"sources": [[0, 0]], "ranges": [1, 2]}',
        '{"sources": [[0, "abc"]]}',
        '{"sources": [[0, true]]}',
        '[1, 2]',
    ):
        with pytest.raises(ParseError):
            parse_scene(bad)


def test_scene_roundtrip():
    text = json.dumps({**THREE, "ranges": ["1.5", 2, 3], "polyline": [[0, 0], [1, 1]], "queries": ["1/3"]})
    s = parse_scene(text.replace('"1/3"', "0.5"))
    again = parse_scene(json.dumps(scene_to_json(s)))
    assert again == s


def test_split_polyline_matches_segment():
    rng = random.Random(31)
    F = [Point(0, 0), Point(10, 0), Point(5, 6)]
    s = Segment(Point(2, 1), Point(8, 1))
    whole = cmd_mer_segment(Scene(LightSet(F), segment=s))[0]["mer2_exact"]
    ts = sorted({Fraction(rng.randint(1, 999), 1000) for _ in range(5)})
    poly = [s.a, *(s.at(t) for t in ts), s.b]
    out, code = cmd_mer_polyline(Scene(LightSet(F), polyline=poly))
    assert code == 0 and out["mer2_exact"] == whole
