import numpy as np
import pytest

from knotcover.cone import (
    ConeError,
    assign_generators,
    build_cone,
    choose_apex,
    split_cone,
)
from knotcover.diagram import perspective_cross
from knotcover.knot import sample_parametric
from knotcover.scene import builtin_scene

PI = np.pi

UNKNOT = {"x": [(0.8, 1, 0.0)], "y": [(1.5, 1, PI / 2)], "z": []}
TREFOIL = {
    "x": [(1, 1, 0.0), (2, 2, 0.0)],
    "y": [(1, 1, PI / 2), (-2, 2, PI / 2)],
    "z": [(-1, 3, 0.0)],
}


@pytest.fixture(scope="module")
def trefoil_curve():
    return sample_parametric(TREFOIL, 256)


@pytest.fixture(scope="module")
def unknot_curve():
    return sample_parametric(UNKNOT, 256)


def test_choose_apex_accepts_generic_hint(unknot_curve):
    hint = np.array([0.0, 0.0, 100.0])
    assert np.allclose(choose_apex(unknot_curve, hint), hint)


def test_choose_apex_rejects_hint_on_curve(unknot_curve):
    hint = unknot_curve.points[10].copy()
    apex = choose_apex(unknot_curve, hint)
    assert not np.allclose(apex, hint)
    assert np.linalg.norm(apex - unknot_curve.centroid) >= 9 * unknot_curve.diameter


def test_choose_apex_search_prefers_minimal_crossings(trefoil_curve):
    apex = choose_apex(trefoil_curve)
    _, crossings = perspective_cross(trefoil_curve, apex)
    assert len(crossings) == 3


def test_build_cone_counts_triangles(unknot_curve):
    apex = np.array([0.0, 0.0, 30.0])
    cone = build_cone(unknot_curve, apex)
    assert cone.triangle_count == 256


def test_build_cone_rejects_apex_on_curve(unknot_curve):
    with pytest.raises(ConeError):
        build_cone(unknot_curve, unknot_curve.points[3])


def test_split_unknot_single_piece(unknot_curve):
    pieces = split_cone(build_cone(unknot_curve, np.array([0.0, 0.0, 30.0])))
    assert len(pieces) == 1


def test_split_trefoil_three_pieces(trefoil_curve):
    pieces = split_cone(build_cone(trefoil_curve, np.array([0.0, 0.0, 60.0])))
    assert len(pieces) == 3


def test_split_twisted_unknot_two_pieces():
    spec = builtin_scene("twisted-unknot")
    from knotcover.engine import build_curve

    curve = build_curve(spec)
    pieces = split_cone(build_cone(curve, np.asarray(spec.apex_hint)))
    assert len(pieces) == 2


def test_piece_count_equals_arc_count(trefoil_curve):
    apex = np.array([0.0, 0.0, 60.0])
    pieces = split_cone(build_cone(trefoil_curve, apex))
    _, crossings = perspective_cross(trefoil_curve, apex)
    assert len(pieces) == max(len(crossings), 1)


def test_cut_conserves_area(trefoil_curve):
    apex = np.array([0.0, 0.0, 60.0])
    cone = build_cone(trefoil_curve, apex)
    pts = trefoil_curve.points
    fan_area = 0.5 * np.sum(
        np.linalg.norm(
            np.cross(pts - apex, np.roll(pts, -1, axis=0) - apex), axis=1
        )
    )
    pieces = split_cone(cone)
    piece_area = sum(p.area() for p in pieces)
    assert abs(piece_area - fan_area) / fan_area < 1e-6


def test_pieces_cover_disjoint_arcs(trefoil_curve):
    apex = np.array([0.0, 0.0, 60.0])
    pieces = split_cone(build_cone(trefoil_curve, apex))
    # ordered by arc, first piece holds curve point 0
    assert [p.id for p in pieces] == [0, 1, 2]
    assert pieces[0].arc.contains(0.0, trefoil_curve.n)
    spans = sorted((p.arc.start % trefoil_curve.n, p.arc.end) for p in pieces)
    for (s1, e1), (s2, _) in zip(spans, spans[1:]):
        assert e1 - 1e-9 <= s2 + trefoil_curve.n


def test_every_piece_touches_the_curve(trefoil_curve):
    apex = np.array([0.0, 0.0, 60.0])
    pieces = split_cone(build_cone(trefoil_curve, apex))
    pts = trefoil_curve.points
    for piece in pieces:
        verts = piece.vertices[np.unique(piece.triangles)]
        closest = min(
            np.min(np.linalg.norm(pts - v, axis=1)) for v in verts
        )
        assert closest < 1e-9


def test_assign_generators_by_name(trefoil_curve):
    from knotcover.diagram import wirtinger
    from knotcover.groups import add_branching_relators, enumerate_cosets

    apex = np.array([0.0, 0.0, 60.0])
    pieces = split_cone(build_cone(trefoil_curve, apex))
    pts2d, crossings = perspective_cross(trefoil_curve, apex)
    pres = wirtinger(pts2d, crossings)
    table = enumerate_cosets(add_branching_relators(pres, 2))
    segments = assign_generators(pieces, list(pres.generators), table)
    elems = [s.element for s in segments]
    assert len(set(elems)) == 3
    for seg in segments:
        assert table.element_order(seg.element) == 2
        assert seg.inverse_element == seg.element  # involutions


def test_assign_generators_length_mismatch(trefoil_curve):
    from knotcover.groups import Presentation, enumerate_cosets

    apex = np.array([0.0, 0.0, 60.0])
    pieces = split_cone(build_cone(trefoil_curve, apex))
    table = enumerate_cosets(Presentation.from_strings(["a"], ["aa"]))
    with pytest.raises(ConeError, match="pieces"):
        assign_generators(pieces, ["a"], table)
