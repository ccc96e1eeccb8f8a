import json

import numpy as np
import pytest

from knotcover.engine import build_curve, build_engine
from knotcover.scene import (
    SceneError,
    builtin_scene,
    builtin_scenes,
    load_scene,
    parse_scene,
    scene_to_dict,
    serialize_scene,
)


def test_builtin_corpus_content():
    scenes = builtin_scenes()
    assert len(scenes) == 6
    by_name = {s.name: s for s in scenes}
    assert by_name["hopf"].group_only
    assert not by_name["trefoil"].group_only
    assert len(by_name["figure-eight"].worlds) == 10
    assert len(by_name["solomon-seal"].worlds) == 10
    assert len(by_name["hopf"].worlds) == 4


def test_builtin_gen_to_cone_maps():
    by_name = {s.name: s for s in builtin_scenes()}
    assert by_name["unknot"].gen_to_cone == ("a",)
    assert by_name["twisted-unknot"].gen_to_cone == ("a", "a")
    assert by_name["trefoil"].gen_to_cone == ("a", "b", "c")


def test_roundtrip_all_builtins():
    for spec in builtin_scenes():
        assert parse_scene(serialize_scene(spec)) == spec


def test_builtins_pass_full_validation():
    for spec in builtin_scenes():
        engine = build_engine(spec)
        assert engine.table.order == len(spec.worlds)


def test_syntax_error_carries_position():
    with pytest.raises(SceneError, match=r"line \d+ column \d+"):
        parse_scene('{"version": 1,\n "name": }')


def test_unknown_builtin_knot():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["knot"] = {"type": "builtin", "name": "granny"}
    with pytest.raises(SceneError, match="unknown builtin"):
        parse_scene(json.dumps(doc))


def test_builtin_knot_reference_expands():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["knot"] = {"type": "builtin", "name": "trefoil"}
    doc["name"] = "custom"
    spec = parse_scene(json.dumps(doc))
    assert spec.knot.kind == "parametric"
    curve = build_curve(spec)
    assert np.allclose(curve.points[0], [0, -1, 0], atol=1e-12)


def test_empty_points_rejected():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["knot"] = {"type": "points", "points": [], "samples": 16}
    with pytest.raises(SceneError, match="empty knot"):
        parse_scene(json.dumps(doc))


def test_empty_terms_rejected():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["knot"] = {"type": "parametric", "terms": {"x": [], "y": []}, "samples": 64}
    with pytest.raises(SceneError, match="empty knot"):
        parse_scene(json.dumps(doc))


def test_gen_to_cone_must_reference_declared_names():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["gen_to_cone"] = ["q"]
    with pytest.raises(SceneError, match="gen_to_cone"):
        parse_scene(json.dumps(doc))


def test_world_count_checked_for_table_groups():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["group"] = {"type": "table", "rows": ["e a", "a e"]}
    doc["worlds"] = doc["worlds"][:1]
    with pytest.raises(SceneError, match="worlds"):
        parse_scene(json.dumps(doc))


def test_world_count_checked_after_enumeration():
    doc = scene_to_dict(builtin_scene("trefoil"))
    doc["worlds"] = doc["worlds"][:3]
    spec = parse_scene(json.dumps(doc))  # structural parse passes
    with pytest.raises(SceneError, match="order"):
        build_engine(spec)


def test_sample_count_minimum():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["knot"]["samples"] = 8
    with pytest.raises(SceneError, match="16"):
        parse_scene(json.dumps(doc))


def test_invalid_table_rejected():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["group"] = {"type": "table", "rows": ["e a", "e a"]}
    with pytest.raises(SceneError, match="table"):
        parse_scene(json.dumps(doc))


def test_version_required():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["version"] = 99
    with pytest.raises(SceneError, match="version"):
        parse_scene(json.dumps(doc))


def test_scale_applies_to_curve():
    doc = scene_to_dict(builtin_scene("unknot"))
    doc["scale"] = 2.0
    spec = parse_scene(json.dumps(doc))
    assert build_curve(spec).diameter == pytest.approx(
        2 * build_curve(builtin_scene("unknot")).diameter
    )


def test_load_scene_from_file(tmp_path):
    path = tmp_path / "custom.json"
    path.write_text(serialize_scene(builtin_scene("unknot")))
    spec = load_scene(str(path))
    assert spec == builtin_scene("unknot")


def test_load_scene_unknown_name():
    with pytest.raises(SceneError, match="neither"):
        load_scene("no-such-scene")


def test_points_knot_scene_builds(tmp_path):
    # a wavy closed control polygon, interpolated then coned
    ts = 2 * np.pi * np.arange(12) / 12
    pts = np.stack([2 * np.cos(ts), 2 * np.sin(ts), 0.2 * np.sin(2 * ts)], axis=1)
    doc = {
        "version": 1,
        "name": "ring12",
        "knot": {"type": "points", "points": pts.tolist(), "samples": 24},
        "group": {"type": "presentation", "generators": ["a"], "relators": ["aa"]},
        "gen_to_cone": ["a"],
        "worlds": [
            {"name": "ice", "color": [198, 226, 255]},
            {"name": "forest", "color": [34, 120, 60]},
        ],
    }
    spec = parse_scene(json.dumps(doc))
    engine = build_engine(spec)
    assert len(engine.segments) == 1
    assert engine.curve.n == 12 * 24
