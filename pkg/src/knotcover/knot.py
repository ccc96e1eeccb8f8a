"""The branch curve: parametric sampling, closed Catmull-Rom splines, tube meshes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class KnotError(Exception):
    pass


# Trigonometric term table: per coordinate, rows of (amplitude, frequency, phase),
# evaluated as sum(amp * sin(freq * t + phase)).  Cosines are sines with phase pi/2,
# and products of trig terms can always be expanded into this form.
TrigTerms = dict[str, list[tuple[float, int, float]]]


@dataclass(frozen=True)
class KnotCurve:
    """A closed sampled space curve; the last point connects back to the first."""

    points: np.ndarray  # (n, 3) float64
    source: str = "control-points"  # "parametric" | "control-points"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise KnotError("curve points must be an (n, 3) array")
        if len(pts) < 16:
            raise KnotError(f"need at least 16 curve points, got {len(pts)}")
        steps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        if np.any(steps < 1e-12):
            raise KnotError("consecutive curve points coincide")

    def __eq__(self, other):
        return (
            isinstance(other, KnotCurve)
            and self.source == other.source
            and self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
        )

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)

    @property
    def diameter(self) -> float:
        pts = self.points
        d = 0.0
        for i in range(len(pts)):
            d = max(d, float(np.max(np.linalg.norm(pts - pts[i], axis=1))))
        return d

    def segment(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self.points[i], self.points[(i + 1) % self.n]

    def min_self_distance(self, min_separation: int = 1) -> float:
        """Smallest distance between segments more than min_separation apart.

        min_separation=1 means all non-adjacent segment pairs, which for a
        dense polyline is roughly one sampling step; larger separations
        measure the clearance between genuinely different strands.
        """
        n = self.n
        best = np.inf
        for i in range(n):
            js = np.arange(i + 1, n)
            sep = np.minimum(js - i, n - (js - i))
            js = js[sep > min_separation]
            if len(js) == 0:
                continue
            a0, a1 = self.segment(i)
            b0 = self.points[js]
            b1 = self.points[(js + 1) % n]
            best = min(best, float(np.min(_segment_segment_distance(a0, a1, b0, b1))))
        return best

    def strand_clearance(self) -> float:
        """Closest approach between parameter-distant strands of the curve."""
        return self.min_self_distance(min_separation=max(2, self.n // 32))

    def min_curvature_radius(self) -> float:
        """Smallest circumradius of consecutive point triples."""
        p0 = np.roll(self.points, 1, axis=0)
        p1 = self.points
        p2 = np.roll(self.points, -1, axis=0)
        a = np.linalg.norm(p1 - p0, axis=1)
        b = np.linalg.norm(p2 - p1, axis=1)
        c = np.linalg.norm(p2 - p0, axis=1)
        cross = np.linalg.norm(np.cross(p1 - p0, p2 - p0), axis=1)
        straight = cross < 1e-12 * a * c
        r = np.where(straight, np.inf, a * b * c / np.where(straight, 1.0, 2.0 * cross))
        return float(np.min(r))

    def check_simple(self) -> None:
        tol = 1e-6 * self.diameter
        if self.min_self_distance() <= tol:
            raise KnotError(
                "curve self-intersects within tolerance; resample with a larger count"
            )


def _segment_segment_distance(a0, a1, b0, b1):
    """Distance from segment (a0,a1) to each segment in the arrays (b0,b1)."""
    u = a1 - a0                      # (3,)
    v = b1 - b0                      # (m, 3)
    w = a0[None, :] - b0             # (m, 3)
    a = max(float(u @ u), 1e-14)
    b = v @ u                        # (m,)
    c = np.maximum(np.einsum("ij,ij->i", v, v), 1e-14)
    d = w @ u                        # (m,)
    e = np.einsum("ij,ij->i", v, w)  # (m,)
    den = a * c - b * b
    s = np.where(den > 1e-12, (b * e - c * d) / np.where(den > 1e-12, den, 1.0), 0.0)
    # alternating clamped projection; two passes settle every clamp case
    for _ in range(2):
        s = np.clip(s, 0.0, 1.0)
        t = np.clip((b * s + e) / c, 0.0, 1.0)
        s = np.clip((b * t - d) / a, 0.0, 1.0)
    pa = a0[None, :] + s[:, None] * u[None, :]
    pb = b0 + t[:, None] * v
    return np.linalg.norm(pa - pb, axis=1)


def evaluate_terms(terms: TrigTerms, t: np.ndarray) -> np.ndarray:
    out = np.zeros((len(t), 3))
    for k, axis in enumerate("xyz"):
        for amp, freq, phase in terms.get(axis, []):
            if freq != int(freq):
                raise KnotError(f"frequency {freq} is not an integer; curve would not close")
            out[:, k] += amp * np.sin(freq * t + phase)
    return out


def sample_parametric(terms: TrigTerms, n: int) -> KnotCurve:
    """Sample a trig-term formula at n equally spaced parameters in [0, 2pi)."""
    if n < 16:
        raise KnotError(f"sample count {n} < 16")
    if not any(terms.get(a) for a in "xyz"):
        raise KnotError("empty knot: no trigonometric terms")
    t = 2.0 * np.pi * np.arange(n) / n
    curve = KnotCurve(points=evaluate_terms(terms, t), source="parametric")
    curve.check_simple()
    return curve


def catmull_rom(control: np.ndarray, samples_per_span: int) -> KnotCurve:
    """Closed centripetal Catmull-Rom spline through the control points.

    The centripetal parametrization (knot spacing by sqrt of chord length)
    cannot produce cusps or local self-loops between control points.
    """
    control = np.asarray(control, dtype=np.float64)
    if control.ndim != 2 or control.shape[1] != 3:
        raise KnotError("control points must be an (n, 3) array")
    if len(control) < 4:
        raise KnotError(f"need at least 4 control points, got {len(control)}")
    if samples_per_span < 1:
        raise KnotError("samples_per_span must be positive")
    diffs = np.linalg.norm(np.roll(control, -1, axis=0) - control, axis=1)
    if np.any(diffs < 1e-12):
        raise KnotError("coincident adjacent control points")

    n = len(control)
    out = []
    for i in range(n):
        p0 = control[(i - 1) % n]
        p1 = control[i]
        p2 = control[(i + 1) % n]
        p3 = control[(i + 2) % n]
        out.append(_cr_span(p0, p1, p2, p3, samples_per_span))
    curve = KnotCurve(points=np.vstack(out), source="control-points")
    curve.check_simple()
    return curve


def _cr_span(p0, p1, p2, p3, m: int) -> np.ndarray:
    """m samples on the centripetal span p1 -> p2, including p1, excluding p2."""
    alpha = 0.5
    t0 = 0.0
    t1 = t0 + max(np.linalg.norm(p1 - p0), 1e-12) ** alpha
    t2 = t1 + max(np.linalg.norm(p2 - p1), 1e-12) ** alpha
    t3 = t2 + max(np.linalg.norm(p3 - p2), 1e-12) ** alpha
    t = t1 + (t2 - t1) * np.arange(m) / m
    t = t[:, None]

    a1 = (t1 - t) / (t1 - t0) * p0 + (t - t0) / (t1 - t0) * p1
    a2 = (t2 - t) / (t2 - t1) * p1 + (t - t1) / (t2 - t1) * p2
    a3 = (t3 - t) / (t3 - t2) * p2 + (t - t2) / (t3 - t2) * p3
    b1 = (t2 - t) / (t2 - t0) * a1 + (t - t0) / (t2 - t0) * a2
    b2 = (t3 - t) / (t3 - t1) * a2 + (t - t1) / (t3 - t1) * a3
    return (t2 - t) / (t2 - t1) * b1 + (t - t1) / (t2 - t1) * b2


@dataclass(frozen=True)
class TubeMesh:
    """A watertight tube around a closed curve; topologically a torus."""

    vertices: np.ndarray  # (n*r, 3)
    normals: np.ndarray   # (n*r, 3)
    triangles: np.ndarray  # (2*n*r, 3) int
    radius: float
    rings: int = field(default=0)

    def euler_characteristic(self) -> int:
        v = len(self.vertices)
        f = len(self.triangles)
        edges = set()
        for a, b, c in self.triangles:
            for e in ((a, b), (b, c), (c, a)):
                edges.add((min(e), max(e)))
        return v - len(edges) + f

    def boundary_edges(self) -> int:
        count: dict[tuple[int, int], int] = {}
        for a, b, c in self.triangles:
            for e in ((a, b), (b, c), (c, a)):
                key = (min(e), max(e))
                count[key] = count.get(key, 0) + 1
        return sum(1 for v in count.values() if v != 2)


def tube_mesh(curve: KnotCurve, radius: float, ring_segments: int = 8) -> TubeMesh:
    """Tube of the given radius around the curve, ring_segments vertices per ring.

    Ring frames are parallel-transported along the curve and the closure
    mismatch angle is distributed evenly so the seam ring lines up.
    """
    if radius <= 0:
        raise KnotError("tube radius must be positive")
    if ring_segments < 3:
        raise KnotError("need at least 3 ring segments")
    clearance = curve.strand_clearance() / 2.0
    if radius >= clearance:
        raise KnotError(
            f"tube radius {radius} too large; strands collide (max {clearance:.6g})"
        )
    bend = curve.min_curvature_radius()
    if radius >= bend:
        raise KnotError(
            f"tube radius {radius} exceeds the tightest bend radius {bend:.6g}"
        )

    pts = curve.points
    n = curve.n
    tangents = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    tangents /= np.linalg.norm(tangents, axis=1)[:, None]

    # parallel transport an initial normal along the rings
    ref = np.array([0.0, 0.0, 1.0])
    if abs(tangents[0] @ ref) > 0.9:
        ref = np.array([1.0, 0.0, 0.0])
    normal = ref - (ref @ tangents[0]) * tangents[0]
    normal /= np.linalg.norm(normal)
    frames = [(normal, np.cross(tangents[0], normal))]
    for i in range(1, n):
        prev = frames[-1][0]
        nrm = prev - (prev @ tangents[i]) * tangents[i]
        nrm /= np.linalg.norm(nrm)
        frames.append((nrm, np.cross(tangents[i], nrm)))

    # holonomy: angle between the transported frame after one loop and the start
    last = frames[-1][0]
    closed = last - (last @ tangents[0]) * tangents[0]
    closed /= np.linalg.norm(closed)
    cosang = float(np.clip(closed @ frames[0][0], -1.0, 1.0))
    sinang = float(np.cross(closed, frames[0][0]) @ tangents[0])
    twist = np.arctan2(sinang, cosang)

    phis = 2.0 * np.pi * np.arange(ring_segments) / ring_segments
    verts = np.empty((n * ring_segments, 3))
    norms = np.empty_like(verts)
    for i, (nrm, binrm) in enumerate(frames):
        correction = twist * i / n
        ring_dirs = (
            np.cos(phis + correction)[:, None] * nrm[None, :]
            + np.sin(phis + correction)[:, None] * binrm[None, :]
        )
        verts[i * ring_segments:(i + 1) * ring_segments] = pts[i] + radius * ring_dirs
        norms[i * ring_segments:(i + 1) * ring_segments] = ring_dirs

    tris = []
    for i in range(n):
        i2 = (i + 1) % n
        for j in range(ring_segments):
            j2 = (j + 1) % ring_segments
            a = i * ring_segments + j
            b = i * ring_segments + j2
            c = i2 * ring_segments + j
            d = i2 * ring_segments + j2
            tris.append((a, b, d))
            tris.append((a, d, c))
    mesh = TubeMesh(
        vertices=verts,
        normals=norms,
        triangles=np.array(tris, dtype=np.int64),
        radius=radius,
        rings=ring_segments,
    )
    areas = np.linalg.norm(
        np.cross(
            verts[mesh.triangles[:, 1]] - verts[mesh.triangles[:, 0]],
            verts[mesh.triangles[:, 2]] - verts[mesh.triangles[:, 0]],
        ),
        axis=1,
    )
    if np.any(areas < 1e-14):
        raise KnotError("degenerate tube triangle; increase sampling or shrink radius")
    return mesh


def default_tube_radius(curve: KnotCurve) -> float:
    """0.05 x diameter, clamped under the strand clearance and bend radius."""
    return min(
        0.05 * curve.diameter,
        0.45 * curve.strand_clearance(),
        0.8 * curve.min_curvature_radius(),
    )
