"""Monodromy transport: which world a path ends in.

Crossing a cone segment front-to-back right-multiplies the current world
by the segment's group element; crossing backwards applies the inverse.
Teleportation happens at the cut surface, never at the visually apparent
portal opening, so the world can change "too early" or "too late" - that
asymmetry is the intended behaviour of the construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import ConeSegment
from .groups import GroupTable


class GrazingHit(Exception):
    """A ray grazed a triangle edge or endpoint; retry with jittered endpoints."""


@dataclass(frozen=True)
class WorldState:
    """The current sheet of the cover, as an element of the deck group."""

    element: int

    def name(self, table: GroupTable) -> str:
        return table.names[self.element]


@dataclass(frozen=True)
class CrossingEvent:
    """One transverse crossing of a cone segment along a ray.

    ``sign`` is +1 front-to-back, -1 back-to-front; ``applied`` is the group
    element multiplied onto the world (the segment's element or its inverse).
    """

    t: float
    segment: int
    sign: int
    applied: int


class PortalSurface:
    """All labeled cone-segment triangles flattened for fast ray queries."""

    def __init__(self, segments: list[ConeSegment], table: GroupTable, diameter: float):
        self.segments = segments
        self.table = table
        self.diameter = diameter
        tris = []
        normals = []
        piece = []
        elem = []
        inv_elem = []
        for seg in segments:
            v = seg.piece.vertices
            for row, nrm in zip(seg.piece.triangles, seg.piece.normals):
                tris.append(v[row])
                normals.append(nrm)
                piece.append(seg.id)
                elem.append(seg.element)
                inv_elem.append(seg.inverse_element)
        self.tri = np.asarray(tris)               # (m, 3, 3)
        self.normal = np.asarray(normals)         # (m, 3)
        self.piece = np.asarray(piece, dtype=np.int64)
        self.elem = np.asarray(elem, dtype=np.int64)
        self.inv_elem = np.asarray(inv_elem, dtype=np.int64)
        self.edge1 = self.tri[:, 1] - self.tri[:, 0]
        self.edge2 = self.tri[:, 2] - self.tri[:, 0]

    @property
    def triangle_count(self) -> int:
        return len(self.tri)


_EDGE_TOL = 1e-7      # barycentric distance to a triangle edge counted as grazing
_T_TOL = 1e-9         # ray-parameter distance to the endpoints counted as grazing


def ray_crossings(
    start: np.ndarray, end: np.ndarray, surface: PortalSurface
) -> list[CrossingEvent]:
    """Transverse crossings of the open segment (start, end), ordered by t.

    Raises GrazingHit when the segment touches a cut line, triangle edge or
    endpoint within tolerance; the caller should jitter and retry.
    """
    start = np.asarray(start, dtype=np.float64)
    end = np.asarray(end, dtype=np.float64)
    d = end - start
    if surface.triangle_count == 0:
        return []
    # Moeller-Trumbore against all triangles at once
    pvec = np.cross(d, surface.edge2)
    det = np.einsum("ij,ij->i", surface.edge1, pvec)
    near_parallel = np.abs(det) < 1e-12 * surface.diameter ** 2
    safe_det = np.where(near_parallel, 1.0, det)
    tvec = start[None, :] - surface.tri[:, 0]
    u = np.einsum("ij,ij->i", tvec, pvec) / safe_det
    qvec = np.cross(tvec, surface.edge1)
    v = (qvec @ d) / safe_det
    t = np.einsum("ij,ij->i", qvec, surface.edge2) / safe_det

    inside = (~near_parallel) & (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0)
    hit = inside & (t > 0.0) & (t < 1.0)
    idx = np.nonzero(hit)[0]
    if len(idx) == 0:
        return []

    graze = (
        (np.minimum(np.minimum(u[idx], v[idx]), 1.0 - u[idx] - v[idx]) < _EDGE_TOL)
        | (t[idx] < _T_TOL)
        | (t[idx] > 1.0 - _T_TOL)
    )
    order = np.argsort(t[idx], kind="stable")
    idx = idx[order]
    graze = graze[order]

    events: list[CrossingEvent] = []
    prev_t = None
    prev_piece = None
    for k, g in zip(idx, graze):
        tk = float(t[k])
        pk = int(surface.piece[k])
        if prev_t is not None and tk - prev_t < _T_TOL:
            if pk == prev_piece:
                continue  # same crossing seen from two sub-triangles of one piece
            raise GrazingHit("ray crosses two cone pieces at one point (cut line)")
        if g:
            raise GrazingHit("ray grazes a triangle edge or endpoint")
        going_in = float(d @ surface.normal[k]) < 0.0
        applied = int(surface.elem[k] if going_in else surface.inv_elem[k])
        events.append(
            CrossingEvent(t=tk, segment=pk, sign=1 if going_in else -1, applied=applied)
        )
        prev_t, prev_piece = tk, pk
    return events


def transport(state: WorldState, events: list[CrossingEvent], table: GroupTable) -> WorldState:
    """Right-multiply the world by each crossing's element, in ray order."""
    w = state.element
    for ev in events:
        w = table.mul(w, ev.applied)
    return WorldState(element=w)


def transport_path(
    state: WorldState,
    path: np.ndarray,
    surface: PortalSurface,
    max_attempts: int = 8,
) -> tuple[WorldState, list[CrossingEvent]]:
    """Fold ray transport over consecutive path vertices.

    Grazing hits restart the whole walk with deterministically jittered
    vertices so the folded product stays consistent across legs.  Events in
    the returned log carry t = leg_index + local_t.
    """
    path = np.asarray(path, dtype=np.float64)
    if path.ndim != 2 or path.shape[1] != 3 or len(path) < 2:
        raise ValueError("path must be an (m, 3) array with m >= 2")
    jitter_scale = 1e-6 * surface.diameter
    last_error: Exception | None = None
    for attempt in range(max_attempts):
        if attempt == 0:
            pts = path
        else:
            rng = np.random.default_rng(1000 + attempt)
            pts = path + rng.normal(size=path.shape) * jitter_scale * attempt
        try:
            events: list[CrossingEvent] = []
            w = state
            for leg in range(len(pts) - 1):
                leg_events = ray_crossings(pts[leg], pts[leg + 1], surface)
                w = transport(w, leg_events, surface.table)
                events.extend(
                    CrossingEvent(t=leg + ev.t, segment=ev.segment, sign=ev.sign, applied=ev.applied)
                    for ev in leg_events
                )
            return w, events
        except GrazingHit as err:
            last_error = err
    raise GrazingHit(
        f"path still grazes the cut surface after {max_attempts} jitter attempts: {last_error}"
    )
