"""HTTP service exposing scenes, sessions, and the FrameState protocol.

The viewer is a thin client: it creates a session, sends movement deltas,
and draws the polygonal regions returned in each FrameState.  All topology
stays server-side.  Sessions are serialized individually by a lock; the
engines themselves are immutable once built and shared across sessions.
"""

from __future__ import annotations

import threading
import uuid

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .engine import FRAME_STATE_VERSION, Engine, Pose, build_engine
from .groups import GroupError
from .scene import SceneError, builtin_scenes, parse_scene, scene_to_dict
from .transport import GrazingHit, WorldState


class WorldColor(BaseModel):
    name: str
    color: list[int] = Field(min_length=3, max_length=3)


class SceneSummary(BaseModel):
    name: str
    group_order: int
    worlds: list[WorldColor]
    group_only: bool
    piece_count: int | None = None


class ValidateRequest(BaseModel):
    text: str


class ValidateResponse(BaseModel):
    valid: bool
    name: str | None = None
    error: str | None = None
    group_order: int | None = None
    piece_count: int | None = None


class PoseModel(BaseModel):
    position: list[float] = Field(min_length=3, max_length=3)
    yaw: float
    pitch: float


class CameraModel(BaseModel):
    width: int
    height: int
    vfov_deg: float


class RegionModel(BaseModel):
    id: int
    label: str
    label_index: int
    color: list[int] = Field(min_length=3, max_length=3)
    loops: list[list[list[float]]]
    pole: list[float] = Field(min_length=2, max_length=2)
    pole_radius: float
    bbox: list[float] = Field(min_length=4, max_length=4)


class CrossingEventModel(BaseModel):
    t: float
    segment: int
    sign: int
    applied: str


class FrameState(BaseModel):
    version: int = FRAME_STATE_VERSION
    scene: str
    world: str
    element: str
    world_index: int
    pose: PoseModel
    camera: CameraModel
    knot_segments: list[list[float]]
    regions: list[RegionModel]
    worlds: list[WorldColor]
    events: list[CrossingEventModel] = []


class SessionCreate(BaseModel):
    scene: str
    width: int = Field(default=640, ge=32, le=1920)
    height: int = Field(default=480, ge=32, le=1080)


class SessionInfo(BaseModel):
    session: str
    scene: str
    world: str
    pose: PoseModel


class SessionCreated(BaseModel):
    session: str
    frame: FrameState


class LookDelta(BaseModel):
    yaw: float = 0.0
    pitch: float = 0.0


class StepRequest(BaseModel):
    version: int = 1
    move: list[float] = Field(default=[0.0, 0.0, 0.0], min_length=3, max_length=3)
    look: LookDelta = LookDelta()
    dt: float = Field(default=1.0, gt=0.0, le=10.0)


class _Session:
    def __init__(self, engine: Engine, width: int, height: int):
        self.engine = engine
        self.pose = engine.default_pose()
        self.world = WorldState(engine.table.identity)
        self.width = width
        self.height = height
        self.lock = threading.Lock()


def create_app() -> FastAPI:
    app = FastAPI(title="knotcover engine", version=__version__)
    # the browser viewer is served as static files from anywhere local
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    engines: dict[str, Engine] = {}
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()

    def engine_for(name: str) -> Engine:
        with registry_lock:
            if name not in engines:
                try:
                    spec = next(s for s in builtin_scenes() if s.name == name)
                except StopIteration:
                    raise HTTPException(status_code=404, detail=f"unknown scene {name!r}")
                try:
                    engines[name] = build_engine(spec)
                except (SceneError, GroupError) as err:
                    raise HTTPException(status_code=500, detail=str(err))
            return engines[name]

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/scenes", response_model=list[SceneSummary])
    def scenes() -> list[SceneSummary]:
        out = []
        for spec in builtin_scenes():
            eng = engine_for(spec.name)
            out.append(
                SceneSummary(
                    name=spec.name,
                    group_order=eng.table.order,
                    worlds=[WorldColor(name=n, color=list(c)) for n, c in spec.worlds],
                    group_only=spec.group_only,
                    piece_count=len(eng.segments) if eng.segments else None,
                )
            )
        return out

    @app.get("/scenes/{name}")
    def scene_detail(name: str) -> dict:
        engine_for(name)
        spec = next(s for s in builtin_scenes() if s.name == name)
        return scene_to_dict(spec)

    @app.post("/scenes/validate", response_model=ValidateResponse)
    def validate_scene(req: ValidateRequest) -> ValidateResponse:
        try:
            spec = parse_scene(req.text)
            eng = build_engine(spec)
        except (SceneError, GroupError) as err:
            return ValidateResponse(valid=False, error=str(err))
        return ValidateResponse(
            valid=True,
            name=spec.name,
            group_order=eng.table.order,
            piece_count=len(eng.segments) or None,
        )

    @app.post("/sessions", response_model=SessionCreated)
    def create_session(req: SessionCreate) -> SessionCreated:
        eng = engine_for(req.scene)
        if eng.surface is None:
            raise HTTPException(
                status_code=409,
                detail=f"scene {req.scene!r} is group-only; nothing to walk through",
            )
        sid = uuid.uuid4().hex
        session = _Session(eng, req.width, req.height)
        with registry_lock:
            sessions[sid] = session
        frame = eng.frame_state(session.pose, session.world, req.width, req.height)
        return SessionCreated(session=sid, frame=FrameState(**frame))

    def session_for(sid: str) -> _Session:
        with registry_lock:
            if sid not in sessions:
                raise HTTPException(status_code=404, detail="unknown session")
            return sessions[sid]

    @app.get("/sessions/{sid}", response_model=SessionInfo)
    def session_info(sid: str) -> SessionInfo:
        s = session_for(sid)
        return SessionInfo(
            session=sid,
            scene=s.engine.spec.name,
            world=s.engine.world_name(s.world.element),
            pose=PoseModel(
                position=[float(v) for v in s.pose.position],
                yaw=s.pose.yaw,
                pitch=s.pose.pitch,
            ),
        )

    @app.post("/sessions/{sid}/step", response_model=FrameState)
    def step(sid: str, req: StepRequest) -> FrameState:
        s = session_for(sid)
        with s.lock:
            try:
                pose, world, events = s.engine.move(
                    s.pose,
                    s.world,
                    np.asarray(req.move, dtype=float),
                    (req.look.yaw, req.look.pitch),
                    req.dt,
                )
            except GrazingHit as err:
                raise HTTPException(status_code=409, detail=str(err))
            s.pose, s.world = pose, world
            frame = s.engine.frame_state(pose, world, s.width, s.height, events=events)
        return FrameState(**frame)

    @app.delete("/sessions/{sid}")
    def close_session(sid: str) -> dict:
        with registry_lock:
            sessions.pop(sid, None)
        return {"closed": sid}

    return app


app = create_app()
