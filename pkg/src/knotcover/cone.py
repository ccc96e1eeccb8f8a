"""The cut-cone: the surface along which sheets of the branched cover glue.

The cone fans from an apex point to every segment of the branch curve.
Where the apex-view projection of the curve crosses itself the cone
self-intersects along a segment from the apex to the strand nearer the
apex; cutting there severs the fan exactly at the near strand's passage.
The connected pieces therefore correspond to the arcs of the diagram seen
from the side opposite the apex, and each piece carries that arc's group
generator on its front side (the inverse acts when crossed backwards).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagram import Arc, Crossing, NonGenericProjection, arcs_of, perspective_cross
from .groups import GroupTable
from .knot import KnotCurve


class ConeError(Exception):
    pass


@dataclass(frozen=True)
class Cone:
    """Fan of triangles (apex, point[i], point[i+1]) over the closed curve."""

    apex: np.ndarray
    curve: KnotCurve

    @property
    def triangle_count(self) -> int:
        return self.curve.n

    def fan_normals(self) -> np.ndarray:
        pts = self.curve.points
        nxt = np.roll(pts, -1, axis=0)
        normals = np.cross(pts - self.apex, nxt - self.apex)
        lens = np.linalg.norm(normals, axis=1)
        if np.any(lens < 1e-12 * self.curve.diameter ** 2 * 1e-3):
            raise ConeError("degenerate cone triangle; apex nearly collinear with a segment")
        return normals / lens[:, None]


@dataclass
class ConePiece:
    """A connected component of the cut cone, still unlabeled."""

    id: int
    arc: Arc
    vertices: np.ndarray          # shared vertex pool (coords)
    triangles: np.ndarray         # (m, 3) indices into vertices
    parent_fan: np.ndarray        # (m,) fan triangle index per sub-triangle
    normals: np.ndarray           # (m, 3) front normals (fan winding)

    def area(self) -> float:
        v = self.vertices
        t = self.triangles
        return float(
            0.5
            * np.sum(
                np.linalg.norm(
                    np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]]), axis=1
                )
            )
        )

    def boundary_curve_params(self) -> tuple[float, float]:
        return self.arc.start, self.arc.end


@dataclass
class ConeSegment:
    """A cut-cone piece labeled with a group generator.

    Crossing the piece front-to-back applies ``element``; the back side
    applies the group inverse.
    """

    id: int
    piece: ConePiece
    generator: str
    element: int
    inverse_element: int


def choose_apex(
    curve: KnotCurve,
    hint: np.ndarray | None = None,
    attempts: int = 64,
) -> np.ndarray:
    """An apex in general position: transverse double points only.

    A valid hint is returned unchanged.  The search scans a deterministic
    sphere of directions at 10x the curve diameter and returns the generic
    apex whose view has the fewest crossings.
    """
    if hint is not None:
        hint = np.asarray(hint, dtype=np.float64)
        if _apex_ok(curve, hint):
            return hint
    centroid = curve.centroid
    dist = 10.0 * curve.diameter
    best = None
    best_crossings = None
    golden = np.pi * (3.0 - np.sqrt(5.0))
    for k in range(attempts):
        z = 1.0 - 2.0 * (k + 0.5) / attempts
        r = np.sqrt(max(0.0, 1.0 - z * z))
        phi = golden * k + 0.1234567
        d = np.array([r * np.cos(phi), r * np.sin(phi), z])
        apex = centroid + dist * d
        count = _apex_crossings(curve, apex)
        if count is None:
            continue
        if best_crossings is None or count < best_crossings:
            best, best_crossings = apex, count
    if best is None:
        raise ConeError(f"no generic apex found after {attempts} attempts")
    return best


def _apex_crossings(curve: KnotCurve, apex: np.ndarray) -> int | None:
    if np.min(np.linalg.norm(curve.points - apex, axis=1)) < 1e-6 * curve.diameter:
        return None
    try:
        _, crossings = perspective_cross(curve, apex)
        Cone(apex=apex, curve=curve).fan_normals()
    except (NonGenericProjection, ConeError):
        return None
    return len(crossings)


def _apex_ok(curve: KnotCurve, apex: np.ndarray) -> bool:
    return _apex_crossings(curve, apex) is not None


def build_cone(curve: KnotCurve, apex: np.ndarray) -> Cone:
    apex = np.asarray(apex, dtype=np.float64)
    if np.min(np.linalg.norm(curve.points - apex, axis=1)) < 1e-6 * curve.diameter:
        raise ConeError("apex lies on the branch curve")
    cone = Cone(apex=apex, curve=curve)
    cone.fan_normals()  # raises on degenerate triangles
    return cone


def split_cone(cone: Cone) -> list[ConePiece]:
    """Cut the cone along its self-intersections and return the pieces.

    Each self-intersection is the segment from the apex to the crossing
    point on the strand nearer the apex; the near fan triangle is split
    through it and the far triangle is slit up to it.  Pieces come back
    ordered by their arc, starting with the arc containing curve point 0.
    """
    curve = cone.curve
    n = curve.n
    pts = curve.points
    apex = cone.apex
    _, crossings = perspective_cross(curve, apex)
    arcs = arcs_of(crossings, n)
    fan_normals = cone.fan_normals()

    # vertex pool: 0 apex, 1..n curve points, then one cut point per crossing
    verts = [apex] + [pts[i] for i in range(n)] + []
    cut_ids: list[int] = []
    cut_points: list[np.ndarray] = []
    for c in crossings:
        seg = int(np.floor(c.under_param)) % n
        frac = c.under_param - np.floor(c.under_param)
        x = pts[seg] + frac * (pts[(seg + 1) % n] - pts[seg])
        cut_ids.append(len(verts))
        cut_points.append(x)
        verts.append(x)
    verts = np.asarray(verts)

    near_events: dict[int, list[tuple[float, int]]] = {}
    far_events: dict[int, list[tuple[float, int]]] = {}
    for k, c in enumerate(crossings):
        useg = int(np.floor(c.under_param)) % n
        ufrac = float(c.under_param - np.floor(c.under_param))
        oseg = int(np.floor(c.over_param)) % n
        ofrac = float(c.over_param - np.floor(c.over_param))
        near_events.setdefault(useg, []).append((ufrac, cut_ids[k]))
        far_events.setdefault(oseg, []).append((ofrac, cut_ids[k]))

    tris: list[tuple[int, int, int]] = []
    tri_fan: list[int] = []
    tri_span: list[tuple[float, float] | None] = []  # curve params covered by the triangle's curve edge
    cut_edges: set[tuple[int, int]] = {(0, cid) for cid in cut_ids}

    for i in range(n):
        a_id, b_id = 1 + i, 1 + (i + 1) % n
        chain = [(0.0, a_id)] + sorted(near_events.get(i, [])) + [(1.0, b_id)]
        wedges = []
        for (f0, v0), (f1, v1) in zip(chain, chain[1:]):
            if f1 - f0 < 1e-9:
                raise NonGenericProjection(
                    f"cut points on segment {i} coincide; perturb the apex"
                )
            wedges.append([f0, f1, v0, v1, None])  # last slot: slit vertex id
        for frac, cid in sorted(far_events.get(i, [])):
            placed = False
            for w in wedges:
                if w[0] < frac < w[1]:
                    if w[4] is not None:
                        raise NonGenericProjection(
                            f"two slits fall in one wedge of segment {i};"
                            " increase the sample count or perturb the apex"
                        )
                    w[4] = (frac, cid)
                    placed = True
                    break
            if not placed:
                raise NonGenericProjection(
                    f"slit on segment {i} lands on a cut point; perturb the apex"
                )
        for f0, f1, v0, v1, slit in wedges:
            if slit is None:
                tris.append((0, v0, v1))
                tri_fan.append(i)
                tri_span.append((i + f0, i + f1))
            else:
                _, cid = slit
                tris.append((0, v0, cid))
                tri_fan.append(i)
                tri_span.append(None)
                tris.append((v0, v1, cid))
                tri_fan.append(i)
                tri_span.append((i + f0, i + f1))
                tris.append((v1, 0, cid))
                tri_fan.append(i)
                tri_span.append(None)

    # connected components over shared non-cut edges
    parent = list(range(len(tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    edge_owner: dict[tuple[int, int], int] = {}
    for t_idx, (a, b, c) in enumerate(tris):
        for e in ((a, b), (b, c), (c, a)):
            key = (min(e), max(e))
            if key in cut_edges:
                continue
            if key in edge_owner:
                union(edge_owner[key], t_idx)
            else:
                edge_owner[key] = t_idx

    comp_of = [find(t) for t in range(len(tris))]
    comp_ids = sorted(set(comp_of))
    if len(comp_ids) != len(arcs):
        raise ConeError(
            f"cut produced {len(comp_ids)} pieces but the view has {len(arcs)} arcs"
        )

    # map components to arcs via any covered curve parameter
    comp_arc: dict[int, int] = {}
    for t_idx, span in enumerate(tri_span):
        if span is None:
            continue
        mid = 0.5 * (span[0] + span[1])
        arc_idx = next(a.index for a in arcs if a.contains(mid, n))
        root = comp_of[t_idx]
        if comp_arc.setdefault(root, arc_idx) != arc_idx:
            raise ConeError("a cut piece spans more than one arc")
    if len(comp_arc) != len(arcs):
        raise ConeError("a cut piece touches no curve arc")

    pieces = []
    for arc in arcs:
        root = next(r for r, a in comp_arc.items() if a == arc.index)
        idx = [t for t in range(len(tris)) if comp_of[t] == root]
        tri_arr = np.array([tris[t] for t in idx], dtype=np.int64)
        fans = np.array([tri_fan[t] for t in idx], dtype=np.int64)
        pieces.append(
            ConePiece(
                id=arc.index,
                arc=arc,
                vertices=verts,
                triangles=tri_arr,
                parent_fan=fans,
                normals=fan_normals[fans],
            )
        )
    return pieces


def assign_generators(
    pieces: list[ConePiece], gen_to_cone: list[str], group: GroupTable
) -> list[ConeSegment]:
    """Label the pieces with group elements by name, in piece order."""
    if len(pieces) != len(gen_to_cone):
        raise ConeError(
            f"generator-to-cone map has {len(gen_to_cone)} entries"
            f" but the cut cone has {len(pieces)} pieces"
        )
    inv = group.inverse
    out = []
    for piece, name in zip(pieces, gen_to_cone):
        if name in group.generator_elements:
            elem = group.generator_elements[name]
        else:
            elem = group.element(name)
        out.append(
            ConeSegment(
                id=piece.id,
                piece=piece,
                generator=name,
                element=elem,
                inverse_element=inv[elem],
            )
        )
    return out
