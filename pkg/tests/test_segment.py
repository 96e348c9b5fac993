import random
from decimal import Decimal
from fractions import Fraction

import pytest

from merange.kernel import Point, Segment, SqrtCoord, dist2, dist2_minus_at, rational_between
from merange.oracles import oracle_decide_segment
from merange.point import is_well_illuminated_point
from merange.segment import (
    EventKind,
    UnboundedSegment,
    build_events,
    decide_segment,
    mer_segment_bisect,
    mer_segment_exact,
    sweep_intervals,
)
from scenes import embraceable_scene, random_segment, random_sources

P = Point
TRI = [P(0, 0), P(10, 0), P(5, 8)]
TRI_S = Segment(P(4, 2), P(6, 2))
THREE = [P(0, 0), P(10, 0), P(5, 6)]
THREE_S = Segment(P(2, 1), P(8, 1))
# four sources whose disks enter and leave a horizontal segment in turn
STAGGER = [P(-1, 3), P(Fraction(3, 2), 4), P(4, -4), P(1, -4)]
STAGGER_S = Segment(P(0, 0), P(10, 0))


def test_events_single_circle():
    s = Segment(P(-10, 3), P(10, 3))
    ev = build_events([P(0, 0)], s, 25)
    assert [e.kind for e in ev] == [
        EventKind.ENDPOINT,
        EventKind.CIRCLE_LEFTMOST,
        EventKind.CIRCLE_RIGHTMOST,
        EventKind.ENDPOINT,
    ]
    assert [s.at(e.t.rational()).x for e in ev] == [-10, -4, 4, 10]
    assert [e.kind for e in build_events([P(0, 0)], s, 0)] == [EventKind.ENDPOINT] * 2


def test_events_tangency_gives_both_roles():
    s = Segment(P(-10, 3), P(10, 3))
    ev = build_events([P(0, 0)], s, 9)
    kinds = [e.kind for e in ev[1:-1]]
    assert kinds == [EventKind.CIRCLE_LEFTMOST, EventKind.CIRCLE_RIGHTMOST]
    assert ev[1].t == ev[2].t == SqrtCoord(Fraction(1, 2))


def test_staggered_events():
    ev = build_events(STAGGER, STAGGER_S, 25)
    inner = [(STAGGER_S.at(e.t.rational()).x, e.kind, e.source) for e in ev[1:-1]]
    assert inner == [
        (1, EventKind.CIRCLE_LEFTMOST, 2),
        (3, EventKind.CIRCLE_RIGHTMOST, 0),
        (4, EventKind.CIRCLE_RIGHTMOST, 3),
        (Fraction(9, 2), EventKind.CIRCLE_RIGHTMOST, 1),
        (7, EventKind.CIRCLE_RIGHTMOST, 2),
    ]
    actives = [sorted(a) for _, _, a, _ in sweep_intervals(STAGGER, STAGGER_S, 25)]
    assert actives == [[0, 1, 3], [0, 1, 2, 3], [1, 2, 3], [1, 2], [2], []]
    rep = decide_segment(STAGGER, STAGGER_S, 25)
    assert not rep.verdict and rep.reason == "endpoint" and rep.witness == 1


def test_staggered_short_segment_agrees_with_oracle():
    s = Segment(P(0, 0), P(2, 0))
    for r2 in (17, 20, 25, 30, 40, 60):
        assert decide_segment(STAGGER, s, r2).verdict == oracle_decide_segment(STAGGER, s, r2)


def test_decide_examples():
    assert decide_segment(TRI, TRI_S, 169).verdict
    rep = decide_segment(TRI, TRI_S, 1)
    assert not rep.verdict and rep.reason == "endpoint"
    assert decide_segment(TRI, TRI_S, 40).verdict
    assert not decide_segment(TRI, TRI_S, Fraction("39.9")).verdict


def test_witness_is_a_failing_point():
    rng = random.Random(5)
    checked = 0
    while checked < 150:
        F, s = embraceable_scene(rng, 3, 8)
        r2 = rng.randint(1, 300)
        rep = decide_segment(F, s, r2)
        if rep.verdict:
            continue
        checked += 1
        assert 0 <= rep.witness <= 1
        assert not is_well_illuminated_point(F, s.at(rep.witness), r2)


def test_per_source_ranges():
    s = Segment(P(0, 0), P(2, 0))
    r2 = [17, 30, 30, 30]
    assert decide_segment(STAGGER, s, r2).verdict == oracle_decide_segment(STAGGER, s, r2)
    with pytest.raises(ValueError):
        decide_segment(STAGGER, s, [1, 2])
    rng = random.Random(8)
    for _ in range(100):
        F, s = embraceable_scene(rng, 3, 8)
        rs = [rng.randint(0, 400) for _ in F]
        assert decide_segment(F, s, rs).verdict == oracle_decide_segment(F, s, rs)


def test_event_set_and_active_sets_random():
    rng = random.Random(9)
    for _ in range(200):
        F = random_sources(rng, rng.randint(1, 8), 20)
        s = random_segment(rng, 20)
        r2 = Fraction(rng.randint(0, 800), rng.randint(1, 5))
        ev = build_events(F, s, r2)
        assert ev[0].kind is ev[-1].kind is EventKind.ENDPOINT
        assert all(a.t <= b.t for a, b in zip(ev, ev[1:]))
        for e in ev[1:-1]:
            if e.t.is_rational:
                assert dist2(s.at(e.t.rational()), F[e.source]) == r2
            else:
                assert dist2_minus_at(F[e.source], r2, s, e.t) == 0
        intervals = sweep_intervals(F, s, r2)
        for (lo, hi, active, batch), nxt in zip(intervals, intervals[1:] + [None]):
            if lo == hi:
                continue
            m = rational_between(lo, hi)
            assert active == {i for i, f in enumerate(F) if dist2(s.at(m), f) <= r2}
            if nxt is not None:
                added = {e.source for e in batch if e.kind is EventKind.CIRCLE_LEFTMOST}
                removed = {e.source for e in batch if e.kind is EventKind.CIRCLE_RIGHTMOST}
                assert nxt[2] == (active | added) - removed


def test_decision_monotone_in_range():
    rng = random.Random(10)
    for _ in range(100):
        F, s = embraceable_scene(rng, 3, 8)
        ladder = sorted(rng.sample(range(0, 1200), 6))
        verdicts = [decide_segment(F, s, r2).verdict for r2 in ladder]
        assert verdicts == sorted(verdicts)


def test_mer_segment_examples():
    assert mer_segment_exact(THREE, THREE_S) == (65, 1, 0)
    mer2, _, _ = mer_segment_exact(TRI, TRI_S)
    assert mer2 == 40
    lo, hi = mer_segment_bisect(TRI, TRI_S, Fraction(1, 10**9))
    assert lo <= 40 <= hi and hi - lo <= Fraction(1, 10**9)
    with pytest.raises(UnboundedSegment):
        mer_segment_bisect(TRI, Segment(P(20, 20), P(30, 20)))
    with pytest.raises(UnboundedSegment):
        mer_segment_exact(TRI, Segment(P(5, 1), P(5, 20)))


def test_exact_inside_bisection_bracket_random():
    rng = random.Random(12)
    for _ in range(40):
        F, s = embraceable_scene(rng, 3, 8)
        mer2, t, site = mer_segment_exact(F, s)
        lo, hi = mer_segment_bisect(F, s, Fraction(1, 10**6))
        assert lo <= mer2 <= hi
        assert dist2(s.at(t), F[site]) == mer2
