"""Scene assembly: from a SceneSpec to a queryable portal world.

Building a scene enumerates (or parses) the deck group, samples the branch
curve, picks the apex, cuts the cone and labels the pieces.  The result
answers transport and rendering queries and produces the FrameState
messages the viewer protocol speaks.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .cone import ConeSegment, assign_generators, build_cone, choose_apex, split_cone
from .diagram import NonGenericProjection
from .groups import GroupTable, add_branching_relators, enumerate_cosets, parse_table
from .knot import KnotCurve, catmull_rom, sample_parametric
from .regions import Camera, RegionMap, build_arrangement, label_regions, project_knot
from .scene import SceneError, SceneSpec, serialize_scene
from .transport import (
    CrossingEvent,
    GrazingHit,
    PortalSurface,
    WorldState,
    transport_path,
)

FRAME_STATE_VERSION = 1


@dataclass
class Pose:
    position: np.ndarray
    yaw: float = 0.0
    pitch: float = 0.0

    def forward(self) -> np.ndarray:
        cp = np.cos(self.pitch)
        return np.array(
            [cp * np.cos(self.yaw), cp * np.sin(self.yaw), np.sin(self.pitch)]
        )

    def right(self) -> np.ndarray:
        return np.array([-np.sin(self.yaw), np.cos(self.yaw), 0.0])


@dataclass
class Engine:
    spec: SceneSpec
    table: GroupTable
    curve: KnotCurve | None
    apex: np.ndarray | None
    segments: list[ConeSegment] = field(default_factory=list)
    surface: PortalSurface | None = None
    scene_hash: str = ""

    @property
    def diameter(self) -> float:
        return self.curve.diameter if self.curve is not None else 1.0

    @property
    def far_limit(self) -> float:
        return 100.0 * self.diameter

    def world_name(self, element: int) -> str:
        return self.spec.worlds[element][0]

    def world_colors(self) -> np.ndarray:
        return np.array([c for _, c in self.spec.worlds], dtype=np.uint8)

    def world_index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.spec.worlds):
            if n == name:
                return i
        raise SceneError(f"unknown world {name!r}")

    def element_index(self, name: str) -> int:
        return self.table.element(name)

    def default_pose(self) -> Pose:
        if self.curve is None:
            return Pose(position=np.zeros(3))
        start = self.curve.centroid + np.array([0.0, 0.0, 0.1 * self.diameter])
        return Pose(position=start, yaw=0.0, pitch=0.0)

    def step_size(self, dt: float = 1.0) -> float:
        return 0.05 * self.diameter * dt

    def camera_for(self, pose: Pose, width: int, height: int, vfov=np.radians(70)) -> Camera:
        up = np.array([0.0, 0.0, 1.0])
        fwd = pose.forward()
        if abs(fwd @ up) > 0.999:
            up = np.array([0.0, 1.0, 0.0])
        return Camera(
            position=pose.position, forward=fwd, up=up, vfov=vfov, width=width, height=height
        )

    def move(
        self, pose: Pose, world: WorldState, move: np.ndarray, look: tuple[float, float], dt: float
    ) -> tuple[Pose, WorldState, list[CrossingEvent]]:
        """Advance the pose, transporting the world across any cut crossings.

        ``move`` is (forward, right, up) intent in [-1, 1]; teleportation
        keeps the position and changes only the world.
        """
        yaw = pose.yaw + look[0]
        pitch = float(np.clip(pose.pitch + look[1], -1.45, 1.45))
        turned = Pose(position=pose.position, yaw=yaw, pitch=pitch)
        step = self.step_size(dt)
        delta = (
            turned.forward() * float(move[0])
            + turned.right() * float(move[1])
            + np.array([0.0, 0.0, 1.0]) * float(move[2])
        )
        target = turned.position + delta * step
        events: list[CrossingEvent] = []
        if self.surface is not None and np.linalg.norm(delta) > 0:
            world, events = transport_path(
                world, np.vstack([turned.position, target]), self.surface
            )
        return Pose(position=target, yaw=yaw, pitch=pitch), world, events

    def region_view(
        self, camera: Camera, world: WorldState
    ) -> tuple[list, RegionMap | None, Camera]:
        """Projected segments and labeled regions, with degeneracy retries."""
        if self.curve is None:
            raise SceneError(f"scene {self.spec.name!r} has no geometry")
        base = camera
        for attempt in range(6):
            if attempt:
                nudge = np.array([0.7, -0.4, 0.5]) * (1e-6 * self.diameter * attempt)
                camera = Camera(
                    position=base.position + nudge,
                    forward=base.forward,
                    up=base.up,
                    vfov=base.vfov,
                    width=base.width,
                    height=base.height,
                )
            segments = project_knot(camera, self.curve.points)
            if not segments:
                return [], None, camera
            try:
                arrangement = build_arrangement(
                    segments, (0, 0, camera.width, camera.height)
                )
                rmap = label_regions(
                    arrangement, camera, self.surface, world, far=self.far_limit
                )
                return segments, rmap, camera
            except (NonGenericProjection, GrazingHit):
                continue
        raise NonGenericProjection("view stayed degenerate after camera perturbations")

    def frame_state(
        self,
        pose: Pose,
        world: WorldState,
        width: int = 640,
        height: int = 480,
        events: list[CrossingEvent] | None = None,
    ) -> dict:
        """The FrameState message: everything a client needs to draw the view."""
        camera = self.camera_for(pose, width, height)
        segments, rmap, camera = self.region_view(camera, world)
        colors = self.world_colors()
        regions = []
        if rmap is not None:
            for region in rmap.arrangement.regions:
                label = int(rmap.labels[region.id])
                regions.append(
                    {
                        "id": region.id,
                        "label": self.world_name(label),
                        "label_index": label,
                        "color": [int(v) for v in colors[label]],
                        "loops": [
                            [[float(x), float(y)] for x, y in loop]
                            for loop in region.loops
                        ],
                        "pole": [float(v) for v in rmap.poles[region.id]],
                        "pole_radius": float(rmap.pole_radii[region.id]),
                        "bbox": [float(v) for v in rmap.bboxes[region.id]],
                    }
                )
        return {
            "version": FRAME_STATE_VERSION,
            "scene": self.spec.name,
            "world": self.world_name(world.element),
            "element": self.table.names[world.element],
            "world_index": world.element,
            "pose": {
                "position": [float(v) for v in pose.position],
                "yaw": pose.yaw,
                "pitch": pose.pitch,
            },
            "camera": {"width": width, "height": height, "vfov_deg": float(np.degrees(camera.vfov))},
            "knot_segments": [
                [float(s.a[0]), float(s.a[1]), float(s.b[0]), float(s.b[1])]
                for s in segments
            ],
            "regions": regions,
            "worlds": [
                {"name": n, "color": list(c)} for n, c in self.spec.worlds
            ],
            "events": [
                {
                    "t": float(ev.t),
                    "segment": int(ev.segment),
                    "sign": int(ev.sign),
                    "applied": self.table.names[ev.applied],
                }
                for ev in (events or [])
            ],
        }


def build_curve(spec: SceneSpec) -> KnotCurve:
    src = spec.knot
    if src is None:
        raise SceneError(f"scene {spec.name!r} has no knot geometry")
    if src.kind == "parametric":
        terms = {axis: list(rows) for axis, rows in src.terms}
        curve = sample_parametric(terms, spec.sample_count)
    else:
        curve = catmull_rom(np.asarray(src.points, dtype=float), spec.sample_count)
    if spec.scale != 1.0:
        curve = KnotCurve(points=curve.points * spec.scale, source=curve.source)
    return curve


def build_group(spec: SceneSpec) -> GroupTable:
    if spec.group.kind == "presentation":
        table = enumerate_cosets(spec.group.presentation())
    else:
        table = parse_table("\n".join(spec.group.table_rows))
    if len(spec.worlds) != table.order:
        raise SceneError(
            f"scene {spec.name!r} lists {len(spec.worlds)} worlds"
            f" for a deck group of order {table.order}"
        )
    return table


def build_engine(spec: SceneSpec) -> Engine:
    """Full validation and assembly; SceneError on any inconsistency."""
    table = build_group(spec)
    scene_hash = hashlib.sha256(serialize_scene(spec).encode()).hexdigest()
    if spec.group_only:
        return Engine(spec=spec, table=table, curve=None, apex=None, scene_hash=scene_hash)
    curve = build_curve(spec)
    hint = np.asarray(spec.apex_hint, dtype=float) if spec.apex_hint is not None else None
    apex = choose_apex(curve, hint)
    pieces = split_cone(build_cone(curve, apex))
    segments = assign_generators(pieces, list(spec.gen_to_cone), table)
    surface = PortalSurface(segments, table, curve.diameter)
    return Engine(
        spec=spec,
        table=table,
        curve=curve,
        apex=apex,
        segments=segments,
        surface=surface,
        scene_hash=scene_hash,
    )
