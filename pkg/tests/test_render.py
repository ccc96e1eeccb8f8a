import numpy as np
import pytest

from knotcover.regions import Camera
from knotcover.render import (
    RenderError,
    read_ppm,
    render,
    render_brute,
    save_frame,
    write_ppm,
)
from knotcover.transport import WorldState, transport_path


def _camera(pos, look, w=160, h=120):
    pos = np.asarray(pos, dtype=float)
    look = np.asarray(look, dtype=float)
    fwd = look - pos
    up = np.array([0.0, 0.0, 1.0])
    if abs(np.dot(fwd / np.linalg.norm(fwd), up)) > 0.99:
        up = np.array([0.0, 1.0, 0.0])
    return Camera(position=pos, forward=fwd, up=up, width=w, height=h)


def test_render_deterministic(engine_for):
    eng = engine_for("trefoil")
    cam = _camera([0, 0, -10], [0, 0, 0])
    f1 = render(eng, cam, WorldState(0))
    f2 = render(eng, cam, WorldState(0))
    assert f1.digest() == f2.digest()


def test_unknot_face_on_two_regions(engine_for):
    eng = engine_for("unknot")
    cam = _camera([0, 0, -7], [0, 0, 0])
    frame = render(eng, cam, WorldState(0))
    # two world colors plus the knot stroke
    assert frame.color_count() == 3


def test_world_swap_exchanges_colors(engine_for):
    eng = engine_for("unknot")
    cam = _camera([0, 0, -7], [0, 0, 0])
    f_e = render(eng, cam, WorldState(0))
    f_a = render(eng, cam, WorldState(1))
    colors = eng.world_colors()
    mask_e0 = np.all(f_e.pixels == colors[0], axis=2)
    mask_a1 = np.all(f_a.pixels == colors[1], axis=2)
    assert np.array_equal(mask_e0, mask_a1)  # the areas swap exactly


def test_offscreen_uniform_frame(engine_for):
    eng = engine_for("unknot")
    cam = _camera([0, 0, -9], [0, 0, -20])
    frame = render(eng, cam, WorldState(0))
    assert frame.color_count() == 1
    assert np.all(frame.pixels == eng.world_colors()[0])


def test_group_only_scene_rejected(engine_for):
    eng = engine_for("hopf")
    cam = _camera([0, 0, -9], [0, 0, 0])
    with pytest.raises(RenderError):
        render(eng, cam, WorldState(0))
    with pytest.raises(RenderError):
        render_brute(eng, cam, WorldState(0))


def test_color_count_bounded_by_group_order(engine_for):
    eng = engine_for("trefoil")
    cam = _camera([2, -9, 3], [0, 0, 0.5])
    frame = render(eng, cam, WorldState(0))
    assert frame.color_count() <= eng.table.order + 1


def test_region_vs_brute_agreement(engine_for):
    eng = engine_for("trefoil")
    cam = _camera([0, 0, -10], [0, 0, 0])
    f_fast = render(eng, cam, WorldState(0))
    f_brute = render_brute(eng, cam, WorldState(0))
    agree = np.mean(np.all(f_fast.pixels == f_brute.pixels, axis=2))
    assert agree >= 0.999


def test_empty_view_brute_matches_region(engine_for):
    eng = engine_for("unknot")
    cam = _camera([0, 0, -9], [0, 0, -20])
    f1 = render(eng, cam, WorldState(0))
    f2 = render_brute(eng, cam, WorldState(0))
    assert f1.digest() == f2.digest()


def test_walk_then_render_matches_stepwise(engine_for):
    eng = engine_for("trefoil")
    rng = np.random.default_rng(4)
    path = np.vstack([[0, 0, 0.9], rng.normal(size=3) * 2, [4.5, 0.5, 1.2]])
    w_direct, _ = transport_path(WorldState(0), path, eng.surface)
    w_step = WorldState(0)
    for leg in range(len(path) - 1):
        w_step, _ = transport_path(w_step, path[leg : leg + 2], eng.surface)
    assert w_direct.element == w_step.element
    cam = _camera(path[-1], [0, 0, 0])
    assert render(eng, cam, w_direct).digest() == render(eng, cam, w_step).digest()


def test_ppm_roundtrip(tmp_path, engine_for):
    eng = engine_for("unknot")
    cam = _camera([0, 0, -7], [0, 0, 0], w=64, h=48)
    frame = render(eng, cam, WorldState(0))
    out = tmp_path / "frame.ppm"
    write_ppm(frame, str(out))
    back = read_ppm(str(out))
    assert np.array_equal(back.pixels, frame.pixels)


def test_save_frame_ppm(tmp_path, engine_for):
    eng = engine_for("unknot")
    cam = _camera([0, 0, -7], [0, 0, 0], w=64, h=48)
    frame = render(eng, cam, WorldState(0))
    out = tmp_path / "f.ppm"
    save_frame(frame, str(out))
    assert out.exists()
    assert read_ppm(str(out)).pixels.shape == (48, 64, 3)


def test_frame_metadata(engine_for):
    eng = engine_for("unknot")
    cam = _camera([0, 0, -7], [0, 0, 0], w=64, h=48)
    frame = render(eng, cam, WorldState(1))
    assert frame.metadata["world"] == "a"
    assert frame.metadata["scene"] == "unknot"
    assert frame.metadata["scene_hash"] == eng.scene_hash
