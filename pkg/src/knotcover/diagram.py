"""Knot diagrams: projections, crossings, arcs, and Wirtinger presentations.

A diagram arc is a maximal piece of the curve between consecutive
under-passages.  The knot group is generated by one loop per arc, with one
conjugation relation per crossing; the branched-cover quotient is obtained
by squaring the generators (see groups.add_branching_relators).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import Presentation, Word
from .knot import KnotCurve

# Parameters are fractional point indices in [0, n); the curve closes at n == 0.

_ENDPOINT_TOL = 1e-6          # crossing parameter distance from segment endpoints
_DEPTH_TOL = 1e-9             # depth separation, relative to curve diameter
_SEPARATION_TOL = 1e-6        # crossing-point separation, relative to projected diameter

# Single letters for arc generators; 'e' stays reserved for the identity element.
_ARC_NAME_POOL = "abcdfghijklmnopqrstuvwxyz"


class NonGenericProjection(Exception):
    """The projection direction must be perturbed; names the offending segments."""

    def __init__(self, message: str, segments: tuple[int, int] | None = None):
        super().__init__(message)
        self.segments = segments


@dataclass(frozen=True)
class Arc:
    """Curve parameters [start, end) between consecutive under-passages; end may exceed n (wrap)."""

    index: int
    start: float
    end: float

    def contains(self, param: float, n: int) -> bool:
        p = param % n
        if p < self.start:
            p += n
        return self.start <= p < self.end

    def first_point_index(self, n: int) -> int:
        return int(np.ceil(self.start - 1e-12)) % n


@dataclass(frozen=True)
class Crossing:
    """A transverse double point of the projected curve.

    The over strand is the one with strictly greater depth along the
    projection direction.  Sign is +1 when the (over, under) direction pair
    is positively oriented in the projection plane.
    """

    position: np.ndarray      # (2,) projection-plane coordinates
    over_arc: int
    under_in_arc: int
    under_out_arc: int
    sign: int
    over_param: float
    under_param: float
    over_depth: float
    under_depth: float


def projection_basis(direction: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Right-handed (u, v, w) with w the unit projection direction."""
    w = np.asarray(direction, dtype=np.float64)
    nw = np.linalg.norm(w)
    if nw < 1e-12:
        raise ValueError("projection direction must be nonzero")
    w = w / nw
    helper = np.array([0.0, 0.0, 1.0]) if abs(w[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(helper, w)
    u /= np.linalg.norm(u)
    v = np.cross(w, u)
    return u, v, w


def _raw_crossings(pts2d: np.ndarray, scale: float) -> list[tuple]:
    """All transverse interior intersections (i, j, s, t, point) of non-adjacent segments."""
    n = len(pts2d)
    q = np.roll(pts2d, -1, axis=0)
    d = q - pts2d
    seglen = np.linalg.norm(d, axis=1)
    tiny = np.nonzero(seglen < 1e-12 * scale)[0]
    if len(tiny):
        raise NonGenericProjection(
            f"segment {tiny[0]} is parallel to the projection direction",
            segments=(int(tiny[0]), int(tiny[0])),
        )
    hits = []
    for i in range(n):
        js = np.arange(i + 2, n if i > 0 else n - 1)
        if len(js) == 0:
            continue
        denom = d[i, 0] * d[js, 1] - d[i, 1] * d[js, 0]
        rel = pts2d[js] - pts2d[i]
        s_num = rel[:, 0] * d[js, 1] - rel[:, 1] * d[js, 0]
        t_num = rel[:, 0] * d[i, 1] - rel[:, 1] * d[i, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = s_num / denom
            t = t_num / denom
        parallel = np.abs(denom) < 1e-12 * seglen[i] * seglen[js]
        inside = (~parallel) & (s > 0.0) & (s < 1.0) & (t > 0.0) & (t < 1.0)
        for k in np.nonzero(inside)[0]:
            j = int(js[k])
            si, tj = float(s[k]), float(t[k])
            if min(si, 1 - si, tj, 1 - tj) < _ENDPOINT_TOL:
                raise NonGenericProjection(
                    f"crossing of segments {i} and {j} grazes a segment endpoint",
                    segments=(i, j),
                )
            hits.append((i, j, si, tj, pts2d[i] + si * d[i]))
    return hits


def _build_crossings(pts2d, hits, depth_of, diameter) -> list[Crossing]:
    """Resolve over/under by depth and attach arcs; hits are the 2D intersections."""
    n = len(pts2d)
    scale = max(float(np.ptp(pts2d, axis=0).max()), 1e-12)
    pos = [h[4] for h in hits]
    for a in range(len(pos)):
        for b in range(a + 1, len(pos)):
            if np.linalg.norm(pos[a] - pos[b]) < _SEPARATION_TOL * scale:
                raise NonGenericProjection(
                    f"crossings of segments {hits[a][0]},{hits[a][1]} and "
                    f"{hits[b][0]},{hits[b][1]} nearly coincide (triple point)",
                    segments=(hits[a][0], hits[b][0]),
                )

    raw = []
    for i, j, si, tj, point in hits:
        pi, di = depth_of(i, si)
        pj, dj = depth_of(j, tj)
        if abs(di - dj) < _DEPTH_TOL * diameter:
            raise NonGenericProjection(
                f"segments {i} and {j} cross at nearly equal depth", segments=(i, j)
            )
        if di > dj:
            over_param, under_param = i + pi, j + pj
            over_seg, under_seg = i, j
            over_depth, under_depth = di, dj
        else:
            over_param, under_param = j + pj, i + pi
            over_seg, under_seg = j, i
            over_depth, under_depth = dj, di
        d2 = np.roll(pts2d, -1, axis=0) - pts2d
        odir, udir = d2[over_seg], d2[under_seg]
        sign = 1 if (odir[0] * udir[1] - odir[1] * udir[0]) > 0 else -1
        raw.append((point, over_param, under_param, over_depth, under_depth, sign))

    arcs = arcs_from_under_params(n, [r[2] for r in raw])
    out = []
    for point, over_param, under_param, over_depth, under_depth, sign in raw:
        over_arc = _arc_containing(arcs, over_param, n)
        under_in = _arc_ending_at(arcs, under_param, n)
        under_out = _arc_starting_at(arcs, under_param, n)
        out.append(
            Crossing(
                position=point,
                over_arc=over_arc,
                under_in_arc=under_in,
                under_out_arc=under_out,
                sign=sign,
                over_param=over_param,
                under_param=under_param,
                over_depth=over_depth,
                under_depth=under_depth,
            )
        )
    out.sort(key=lambda c: c.under_param)
    return out


def arcs_from_under_params(n: int, under_params: list[float]) -> list[Arc]:
    """Arcs between consecutive under-passages; the arc containing point 0 is first.

    With no crossings the whole curve is a single arc.
    """
    if not under_params:
        return [Arc(index=0, start=0.0, end=float(n))]
    cuts = sorted(p % n for p in under_params)
    # the wrapping arc runs from the largest cut through parameter 0 to the smallest
    arcs = [Arc(index=0, start=cuts[-1], end=cuts[0] + n)]
    for k in range(1, len(cuts)):
        arcs.append(Arc(index=k, start=cuts[k - 1], end=cuts[k]))
    return arcs


def _arc_containing(arcs: list[Arc], param: float, n: int) -> int:
    for arc in arcs:
        if arc.contains(param, n):
            return arc.index
    raise NonGenericProjection(f"no arc contains parameter {param}")


def _arc_ending_at(arcs: list[Arc], param: float, n: int) -> int:
    p = param % n
    for arc in arcs:
        if abs(arc.end % n - p) < 1e-9 or abs(arc.end % n - p - n) < 1e-9 or abs(arc.end % n - p + n) < 1e-9:
            return arc.index
    raise NonGenericProjection(f"no arc ends at parameter {param}")


def _arc_starting_at(arcs: list[Arc], param: float, n: int) -> int:
    p = param % n
    for arc in arcs:
        if abs(arc.start % n - p) < 1e-9 or abs(arc.start % n - p - n) < 1e-9 or abs(arc.start % n - p + n) < 1e-9:
            return arc.index
    raise NonGenericProjection(f"no arc starts at parameter {param}")


def project_and_cross(curve: KnotCurve, direction: np.ndarray) -> tuple[np.ndarray, list[Crossing]]:
    """Orthographic projection along ``direction`` with over/under resolved by depth.

    The over strand is the one with greater depth along the direction.
    Raises NonGenericProjection for tangential, endpoint-grazing, equal-depth
    or coincident crossings; the caller should perturb the direction.
    """
    u, v, w = projection_basis(direction)
    pts = curve.points
    pts2d = np.stack([pts @ u, pts @ v], axis=1)
    depth = pts @ w
    diameter = curve.diameter

    hits = _raw_crossings(pts2d, scale=max(float(np.ptp(pts2d, axis=0).max()), 1e-12))

    def depth_of(seg: int, s2d: float) -> tuple[float, float]:
        d0 = depth[seg]
        d1 = depth[(seg + 1) % len(pts)]
        return s2d, (1.0 - s2d) * d0 + s2d * d1

    return pts2d, _build_crossings(pts2d, hits, depth_of, diameter)


def perspective_project(curve: KnotCurve, apex: np.ndarray):
    """Central projection from ``apex`` onto the plane through the centroid.

    Returns (pts2d, weights) where weights are depths along the view axis;
    the projection of a straight segment is straight, and the fractional
    position along a 3D segment maps projectively to the 2D fraction.
    """
    apex = np.asarray(apex, dtype=np.float64)
    centroid = curve.centroid
    u, v, w = projection_basis(centroid - apex)
    rel = curve.points - apex
    weights = rel @ w
    if np.any(weights < 1e-9 * curve.diameter):
        raise NonGenericProjection("apex lies beside or inside the curve's view plane")
    d0 = float((centroid - apex) @ w)
    pts2d = np.stack([rel @ u, rel @ v], axis=1) * (d0 / weights)[:, None]
    return pts2d, weights


def perspective_cross(curve: KnotCurve, apex: np.ndarray) -> tuple[np.ndarray, list[Crossing]]:
    """Crossings of the view from ``apex``, with over = farther from the apex.

    This is the diagram an observer opposite the apex draws, which is the one
    whose arcs match the cut-cone pieces: the cone is severed exactly where a
    strand passes nearest the apex, i.e. at this diagram's under-passages.
    """
    pts2d, weights = perspective_project(curve, apex)
    n = len(pts2d)
    hits = _raw_crossings(pts2d, scale=max(float(np.ptp(pts2d, axis=0).max()), 1e-12))

    def depth_of(seg: int, s2d: float) -> tuple[float, float]:
        wa = weights[seg]
        wb = weights[(seg + 1) % n]
        sigma = s2d * wa / (wb + s2d * (wa - wb))
        return sigma, (1.0 - sigma) * wa + sigma * wb

    return pts2d, _build_crossings(pts2d, hits, depth_of, curve.diameter)


def arcs_of(crossings: list[Crossing], n: int) -> list[Arc]:
    return arcs_from_under_params(n, [c.under_param for c in crossings])


def arc_generator_names(count: int) -> tuple[str, ...]:
    names = []
    pool = iter(_ARC_NAME_POOL)
    for i in range(count):
        nm = next(pool, None)
        names.append(nm if nm is not None else f"g{i}")
    return tuple(names)


def wirtinger(polyline2d: np.ndarray, crossings: list[Crossing]) -> Presentation:
    """Wirtinger presentation: one generator per arc, one relator per crossing.

    At a positive crossing the outgoing under-arc is the over-arc conjugate
    of the incoming one (out = over * in * over^-1); a negative crossing
    conjugates the other way.
    """
    n = len(polyline2d)
    arcs = arcs_of(crossings, n)
    names = arc_generator_names(len(arcs))
    relators: list[Word] = []
    for c in crossings:
        o, a_in, a_out = c.over_arc, c.under_in_arc, c.under_out_arc
        if not {o, a_in, a_out} <= set(range(len(arcs))):
            raise ValueError("crossing references unknown arcs")
        if c.sign > 0:
            rel = (o, a_in, ~o, ~a_out)
        else:
            rel = (~o, a_in, o, ~a_out)
        relators.append(rel)
    return Presentation(generators=names, relators=tuple(relators))


def abelianization_exponents(p: Presentation) -> np.ndarray:
    """Exponent-sum matrix of the relators (rows) over the generators (columns)."""
    mat = np.zeros((len(p.relators), len(p.generators)), dtype=np.int64)
    for r, rel in enumerate(p.relators):
        for k in rel:
            if k >= 0:
                mat[r, k] += 1
            else:
                mat[r, ~k] -= 1
    return mat
