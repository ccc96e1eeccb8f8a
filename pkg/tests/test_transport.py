import numpy as np
import pytest

from conftest import strand_loop
from knotcover.knot import default_tube_radius
from knotcover.transport import (
    CrossingEvent,
    GrazingHit,
    WorldState,
    ray_crossings,
    transport,
    transport_path,
)


def test_far_path_has_no_events(engine_for):
    eng = engine_for("unknot")
    far = eng.diameter * 5
    events = ray_crossings(
        np.array([far, far, far]), np.array([far + 1, far, far]), eng.surface
    )
    assert events == []


def test_unknot_single_crossing_applies_a(engine_for):
    eng = engine_for("unknot")
    # the cut cone rises from the circle toward the apex; cross its wall
    start = np.array([0.0, 0.1, 0.4])
    end = np.array([3.0, 0.1, 0.4])
    events = ray_crossings(start, end, eng.surface)
    assert len(events) == 1
    assert eng.table.names[events[0].applied] == "a"
    w = transport(WorldState(0), events, eng.table)
    assert eng.table.names[w.element] == "a"


def test_there_and_back_is_identity(engine_for):
    eng = engine_for("unknot")
    path = np.array([[0.0, 0.0, 0.4], [3.0, 0.0, 0.4], [0.0, 0.0, 0.4]])
    w, events = transport_path(WorldState(0), path, eng.surface)
    assert w.element == 0
    assert len(events) == 2
    assert events[0].sign == -events[1].sign


def test_transport_with_no_events_is_identity(engine_for):
    eng = engine_for("trefoil")
    assert transport(WorldState(0), [], eng.table).element == 0


def test_trefoil_is_noncommutative(engine_for):
    eng = engine_for("trefoil")
    a = eng.table.generator_elements["a"]
    b = eng.table.generator_elements["b"]
    ev = lambda elem: CrossingEvent(t=0.5, segment=0, sign=1, applied=elem)
    w_ab = transport(WorldState(0), [ev(a), ev(b)], eng.table)
    w_ba = transport(WorldState(0), [ev(b), ev(a)], eng.table)
    assert w_ab.element != w_ba.element


def test_strand_loop_is_nontrivial_and_squares_to_identity(engine_for):
    eng = engine_for("trefoil")
    radius = 0.5 * default_tube_radius(eng.curve)
    for k in (5, 77, 150, 222):
        loop = strand_loop(eng.curve, k, radius)
        once, events = transport_path(WorldState(0), loop, eng.surface)
        assert once.element != 0, f"loop at {k} crossed nothing"
        twice, _ = transport_path(once, loop, eng.surface)
        assert twice.element == 0


def test_loop_twice_around_equals_loop_squared(engine_for):
    eng = engine_for("figure-eight")
    radius = 0.5 * default_tube_radius(eng.curve)
    loop = strand_loop(eng.curve, 40, radius)
    w1, _ = transport_path(WorldState(0), loop, eng.surface)
    doubled = np.vstack([loop, loop[1:]])
    w2, _ = transport_path(WorldState(0), doubled, eng.surface)
    assert w2.element == eng.table.mul(w1.element, w1.element)
    assert w2.element == 0


def test_composition_splits_at_waypoints(engine_for):
    eng = engine_for("trefoil")
    rng = np.random.default_rng(11)
    for _ in range(8):
        pts = rng.normal(size=(5, 3)) * 2.5
        w_full, _ = transport_path(WorldState(0), pts, eng.surface)
        w_head, _ = transport_path(WorldState(0), pts[:3], eng.surface)
        w_tail, _ = transport_path(w_head, pts[2:], eng.surface)
        assert w_full.element == w_tail.element


def test_reversed_path_returns_home(engine_for):
    eng = engine_for("trefoil")
    rng = np.random.default_rng(12)
    for _ in range(8):
        pts = rng.normal(size=(4, 3)) * 2.5
        w, _ = transport_path(WorldState(0), pts, eng.surface)
        back, _ = transport_path(w, pts[::-1], eng.surface)
        assert back.element == 0


def test_events_sorted_and_signed(engine_for):
    eng = engine_for("trefoil")
    start = np.array([0.0, 0.0, 0.9])
    end = np.array([6.0, 0.3, 0.9])
    events = ray_crossings(start, end, eng.surface)
    assert events == sorted(events, key=lambda e: e.t)
    for ev in events:
        assert ev.sign in (-1, 1)
        if ev.sign > 0:
            assert ev.applied == eng.surface.elem[eng.surface.piece == ev.segment][0]


def test_endpoint_on_surface_raises_then_jitter_recovers(engine_for):
    eng = engine_for("unknot")
    # aim the endpoint exactly at a cone triangle vertex
    seg = eng.segments[0]
    target = seg.piece.vertices[seg.piece.triangles[5, 1]]
    with pytest.raises(GrazingHit):
        ray_crossings(np.array([0.0, 0.0, 0.4]), target, eng.surface)
    # the path-level retry jitters past the graze
    path = np.vstack([[0.0, 0.0, 0.4], target, [3.5, 0.0, 0.4]])
    w, _ = transport_path(WorldState(0), path, eng.surface)
    assert w.element in (0, 1)


def test_group_only_scene_has_no_surface(engine_for):
    assert engine_for("hopf").surface is None
