"""Offline frame rendering: solid world colors per screen region, knot stroke.

Two paths produce the same picture: the region pipeline (arrangement +
one transport per region) and a brute-force transport per pixel.  The
brute path exists as the oracle for the region optimization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagram import NonGenericProjection
from .regions import (
    Camera,
    ScreenSegment,
    build_arrangement,
    label_regions,
    project_knot,
    region_index_grid,
)
from .transport import GrazingHit, PortalSurface, WorldState, transport

STROKE_COLOR = np.array([15, 15, 20], dtype=np.uint8)


class RenderError(Exception):
    pass


@dataclass
class Frame:
    pixels: np.ndarray            # (h, w, 3) uint8
    metadata: dict = field(default_factory=dict)

    @property
    def size(self) -> tuple[int, int]:
        return self.pixels.shape[1], self.pixels.shape[0]

    def color_count(self) -> int:
        flat = self.pixels.reshape(-1, 3)
        return len(np.unique(flat, axis=0))

    def digest(self) -> str:
        import hashlib

        return hashlib.sha256(self.pixels.tobytes()).hexdigest()


def write_ppm(frame: Frame, path: str) -> None:
    h, w = frame.pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode())
        fh.write(frame.pixels.tobytes())


def read_ppm(path: str) -> Frame:
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P6":
            raise RenderError(f"not a P6 ppm file: {magic!r}")
        line = fh.readline()
        while line.startswith(b"#"):
            line = fh.readline()
        w, h = (int(v) for v in line.split())
        maxval = int(fh.readline())
        if maxval != 255:
            raise RenderError("only 8-bit ppm supported")
        data = np.frombuffer(fh.read(w * h * 3), dtype=np.uint8)
    return Frame(pixels=data.reshape(h, w, 3).copy())


def save_frame(frame: Frame, path: str) -> None:
    if path.endswith(".png"):
        try:
            from PIL import Image
        except ImportError as err:
            raise RenderError("png output needs Pillow; use .ppm instead") from err
        Image.fromarray(frame.pixels).save(path)
    else:
        write_ppm(frame, path)


def _stroke(pixels: np.ndarray, segments: list[ScreenSegment]) -> None:
    """1-pixel Bresenham overdraw of the projected knot."""
    h, w = pixels.shape[:2]
    for seg in segments:
        x0, y0 = int(round(seg.a[0])), int(round(seg.a[1]))
        x1, y1 = int(round(seg.b[0])), int(round(seg.b[1]))
        dx, dy = abs(x1 - x0), -abs(y1 - y0)
        sx = 1 if x0 < x1 else -1
        sy = 1 if y0 < y1 else -1
        err = dx + dy
        while True:
            if 0 <= x0 < w and 0 <= y0 < h:
                pixels[y0, x0] = STROKE_COLOR
            if x0 == x1 and y0 == y1:
                break
            e2 = 2 * err
            if e2 >= dy:
                err += dy
                x0 += sx
            if e2 <= dx:
                err += dx
                y0 += sy


def render(engine, camera: Camera, world: WorldState) -> Frame:
    """Region-pipeline frame: world colors by region label plus knot stroke."""
    if engine.surface is None:
        raise RenderError(f"scene {engine.spec.name!r} has no geometry to render")
    colors = engine.world_colors()
    base_camera = camera
    for attempt in range(6):
        if attempt:
            nudge = np.array([0.7, -0.4, 0.5]) * (1e-6 * engine.diameter * attempt)
            camera = Camera(
                position=base_camera.position + nudge,
                forward=base_camera.forward,
                up=base_camera.up,
                vfov=base_camera.vfov,
                width=base_camera.width,
                height=base_camera.height,
            )
        segments = project_knot(camera, engine.curve.points)
        pixels = np.empty((camera.height, camera.width, 3), dtype=np.uint8)
        if not segments:
            pixels[:] = colors[world.element]
            return Frame(
                pixels=pixels,
                metadata=_meta(engine, camera, world, brute=False),
            )
        try:
            arrangement = build_arrangement(
                segments, (0, 0, camera.width, camera.height)
            )
            rmap = label_regions(
                arrangement, camera, engine.surface, world, far=engine.far_limit
            )
        except (NonGenericProjection, GrazingHit):
            continue
        grid = region_index_grid(rmap, camera.width, camera.height)
        pixels[:] = colors[rmap.labels[grid]]
        _stroke(pixels, segments)
        return Frame(pixels=pixels, metadata=_meta(engine, camera, world, brute=False))
    raise RenderError("projection stayed degenerate after camera perturbations")


def render_brute(engine, camera: Camera, world: WorldState) -> Frame:
    """Oracle frame: one full raycast transport per pixel, no arrangement."""
    if engine.surface is None:
        raise RenderError(f"scene {engine.spec.name!r} has no geometry to render")
    surface: PortalSurface = engine.surface
    colors = engine.world_colors()
    w, h = camera.width, camera.height
    xs = (np.arange(w) + 0.5 - w / 2.0) / camera.focal
    ys = (h / 2.0 - (np.arange(h) + 0.5)) / camera.focal
    dirs = (
        camera.forward[None, None, :]
        + camera.right[None, None, :] * xs[None, :, None]
        + camera.up[None, None, :] * ys[:, None, None]
    ).reshape(-1, 3)
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    origin = camera.position
    far = engine.far_limit

    n_rays = len(dirs)
    hit_ray: list[np.ndarray] = []
    hit_t: list[np.ndarray] = []
    hit_applied: list[np.ndarray] = []
    d_full = dirs * far
    for k in range(surface.triangle_count):
        v0 = surface.tri[k, 0]
        e1 = surface.edge1[k]
        e2 = surface.edge2[k]
        pvec = np.cross(d_full, e2)
        det = pvec @ e1
        ok = np.abs(det) > 1e-12 * surface.diameter**2
        safe = np.where(ok, det, 1.0)
        tvec = origin - v0
        u = (pvec @ tvec) / safe
        qvec = np.cross(tvec, e1)
        v = (d_full @ qvec) / safe
        t = (qvec @ e2) / safe
        sel = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > 1e-9) & (t < 1)
        rays = np.nonzero(sel)[0]
        if len(rays) == 0:
            continue
        going_in = d_full[rays] @ surface.normal[k] < 0
        applied = np.where(going_in, surface.elem[k], surface.inv_elem[k])
        hit_ray.append(rays)
        hit_t.append(t[rays])
        hit_applied.append(applied)

    labels = np.full(n_rays, world.element, dtype=np.int64)
    if hit_ray:
        rays = np.concatenate(hit_ray)
        ts = np.concatenate(hit_t)
        applied = np.concatenate(hit_applied)
        order = np.lexsort((ts, rays))
        rays, ts, applied = rays[order], ts[order], applied[order]
        table = surface.table.table
        prev_ray = -1
        prev_t = -1.0
        prev_piece_applied = -1
        for r, tt, ap in zip(rays, ts, applied):
            if r == prev_ray and tt - prev_t < 1e-9 and ap == prev_piece_applied:
                continue  # same crossing seen on both sub-triangles of a piece edge
            labels[r] = table[labels[r], ap]
            prev_ray, prev_t, prev_piece_applied = r, tt, ap

    pixels = colors[labels].reshape(h, w, 3).astype(np.uint8)
    segments = project_knot(camera, engine.curve.points)
    _stroke(pixels, segments)
    return Frame(pixels=pixels, metadata=_meta(engine, camera, world, brute=True))


def _meta(engine, camera: Camera, world: WorldState, brute: bool) -> dict:
    return {
        "scene": engine.spec.name,
        "scene_hash": engine.scene_hash,
        "world": engine.table.names[world.element],
        "position": [float(v) for v in camera.position],
        "forward": [float(v) for v in camera.forward],
        "brute": brute,
    }
