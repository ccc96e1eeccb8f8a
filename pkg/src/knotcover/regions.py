"""Screen-space regions: arrangement of the projected knot, poles, labels.

Rendering optimization: instead of transporting a ray per pixel, the screen
is subdivided into the polygonal regions bounded by the projected knot and
the screen border.  One raycast through each region's pole of
inaccessibility labels the whole region with the world visible there.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .diagram import NonGenericProjection
from .groups import GroupTable
from .transport import GrazingHit, PortalSurface, WorldState, ray_crossings, transport


@dataclass(frozen=True)
class Camera:
    """Pinhole camera; forward and up are orthonormalized on construction."""

    position: np.ndarray
    forward: np.ndarray
    up: np.ndarray
    vfov: float = np.radians(70.0)
    width: int = 640
    height: int = 480

    def __post_init__(self):
        if not 0.0 < self.vfov < np.pi:
            raise ValueError("vertical field of view must be in (0, pi)")
        pos = np.asarray(self.position, dtype=np.float64)
        fwd = np.asarray(self.forward, dtype=np.float64)
        upv = np.asarray(self.up, dtype=np.float64)
        fn = np.linalg.norm(fwd)
        if fn < 1e-12:
            raise ValueError("camera forward must be nonzero")
        fwd = fwd / fn
        upv = upv - (upv @ fwd) * fwd
        un = np.linalg.norm(upv)
        if un < 1e-12:
            raise ValueError("camera up is parallel to forward")
        upv = upv / un
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "up", upv)

    @property
    def right(self) -> np.ndarray:
        return np.cross(self.forward, self.up)

    @property
    def focal(self) -> float:
        return (self.height / 2.0) / np.tan(self.vfov / 2.0)

    def ray_direction(self, px: float, py: float) -> np.ndarray:
        d = (
            self.forward
            + self.right * ((px - self.width / 2.0) / self.focal)
            + self.up * ((self.height / 2.0 - py) / self.focal)
        )
        return d / np.linalg.norm(d)

    def to_screen(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Screen coordinates and view depths for world points (no clipping)."""
        rel = pts - self.position
        depth = rel @ self.forward
        x = rel @ self.right
        y = rel @ self.up
        with np.errstate(divide="ignore", invalid="ignore"):
            sx = self.width / 2.0 + self.focal * x / depth
            sy = self.height / 2.0 - self.focal * y / depth
        return np.stack([sx, sy], axis=1), depth


@dataclass(frozen=True)
class ScreenSegment:
    a: np.ndarray        # (2,) pixel coords
    b: np.ndarray
    depth_a: float
    depth_b: float
    source: int          # index of the knot polyline segment, -1 for border


def project_knot(camera: Camera, points: np.ndarray, near: float = 1e-3) -> list[ScreenSegment]:
    """Project the closed polyline, clip to the near plane and screen rect."""
    n = len(points)
    screen, depth = camera.to_screen(points)
    out: list[ScreenSegment] = []
    rect = (0.0, 0.0, float(camera.width), float(camera.height))
    for i in range(n):
        j = (i + 1) % n
        pa, pb = points[i], points[j]
        da, db = float(depth[i]), float(depth[j])
        if da <= near and db <= near:
            continue
        if da <= near or db <= near:
            # clip at the near plane in world space, then reproject
            t = (near - da) / (db - da)
            pc = pa + t * (pb - pa)
            if da <= near:
                pa, da = pc, near
            else:
                pb, db = pc, near
            sa, _ = camera.to_screen(np.array([pa]))
            sb, _ = camera.to_screen(np.array([pb]))
            a2, b2 = sa[0], sb[0]
        else:
            a2, b2 = screen[i], screen[j]
        clipped = _clip_segment(a2, b2, rect)
        if clipped is None:
            continue
        (ca, cb), (ta, tb) = clipped
        out.append(
            ScreenSegment(
                a=ca,
                b=cb,
                depth_a=da + ta * (db - da),
                depth_b=da + tb * (db - da),
                source=i,
            )
        )
    return out


def _clip_segment(a, b, rect):
    """Liang-Barsky; returns ((a', b'), (ta, tb)) or None when fully outside."""
    x0, y0, x1, y1 = rect
    d = b - a
    t0, t1 = 0.0, 1.0
    for p, q in (
        (-d[0], a[0] - x0),
        (d[0], x1 - a[0]),
        (-d[1], a[1] - y0),
        (d[1], y1 - a[1]),
    ):
        if abs(p) < 1e-15:
            if q < 0:
                return None
            continue
        r = q / p
        if p < 0:
            if r > t1:
                return None
            t0 = max(t0, r)
        else:
            if r < t0:
                return None
            t1 = min(t1, r)
    if t0 >= t1:
        return None
    return (a + t0 * d, a + t1 * d), (t0, t1)


# ---------------------------------------------------------------------------
# Planar arrangement of screen segments plus the screen border.


@dataclass
class Region:
    id: int
    loops: list[np.ndarray]      # first loop is the outer boundary, rest are holes

    def bbox(self) -> np.ndarray:
        allpts = np.vstack(self.loops)
        return np.array(
            [allpts[:, 0].min(), allpts[:, 1].min(), allpts[:, 0].max(), allpts[:, 1].max()]
        )

    def area(self) -> float:
        total = 0.0
        for loop in self.loops:
            total += _signed_area(loop)
        return total


@dataclass
class Arrangement:
    regions: list[Region]
    rect: tuple[float, float, float, float]
    adjacency: list[tuple[int, int, int]] = field(default_factory=list)
    # (source segment, region one side, region other side); -1 for the outside

    def total_area(self) -> float:
        return sum(r.area() for r in self.regions)


def _signed_area(loop: np.ndarray) -> float:
    x, y = loop[:, 0], loop[:, 1]
    xr, yr = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yr - xr * y))


def build_arrangement(segments: list[ScreenSegment], rect) -> Arrangement:
    """Subdivision of the screen rectangle induced by the segments.

    Raises NonGenericProjection on degenerate incidences (overlapping
    segments, crossings through endpoints); perturb the camera sub-pixel
    and retry.
    """
    x0, y0, x1, y1 = (float(v) for v in rect)
    diag = float(np.hypot(x1 - x0, y1 - y0))
    eps = 1e-9 * diag

    segs = [(s.a.copy(), s.b.copy(), s.source) for s in segments]
    corners = [
        np.array([x0, y0]),
        np.array([x1, y0]),
        np.array([x1, y1]),
        np.array([x0, y1]),
    ]
    for k in range(4):
        segs.append((corners[k], corners[(k + 1) % 4], -1))

    # split all segments at pairwise intersections
    cuts: list[list[float]] = [[] for _ in segs]
    for i in range(len(segs)):
        a0, a1, _ = segs[i]
        di = a1 - a0
        for j in range(i + 1, len(segs)):
            b0, b1, _ = segs[j]
            dj = b1 - b0
            den = di[0] * dj[1] - di[1] * dj[0]
            rel = b0 - a0
            if abs(den) < 1e-12 * max(np.linalg.norm(di) * np.linalg.norm(dj), 1e-12):
                continue
            s = (rel[0] * dj[1] - rel[1] * dj[0]) / den
            t = (rel[0] * di[1] - rel[1] * di[0]) / den
            li = max(np.linalg.norm(di), 1e-12)
            lj = max(np.linalg.norm(dj), 1e-12)
            tol_i = eps / li
            tol_j = eps / lj
            if -tol_i < s < 1 + tol_i and -tol_j < t < 1 + tol_j:
                interior_i = tol_i < s < 1 - tol_i
                interior_j = tol_j < t < 1 - tol_j
                if interior_i and interior_j:
                    cuts[i].append(s)
                    cuts[j].append(t)
                elif interior_j:
                    # T-junction: an endpoint of i rests on j (e.g. a clipped
                    # knot edge ending on the border); split j there
                    cuts[j].append(t)
                elif interior_i:
                    cuts[i].append(s)

    node_ids: dict[tuple[int, int], int] = {}
    node_pts: list[np.ndarray] = []

    def node(p: np.ndarray) -> int:
        key = (int(round(p[0] / eps)), int(round(p[1] / eps)))
        if key not in node_ids:
            node_ids[key] = len(node_pts)
            node_pts.append(p)
        return node_ids[key]

    edges: list[tuple[int, int, int]] = []  # (node u, node v, source)
    for (a0, a1, src), cc in zip(segs, cuts):
        params = sorted({0.0, 1.0, *cc})
        pts = [a0 + t * (a1 - a0) for t in params]
        for p, q in zip(pts, pts[1:]):
            u, v = node(p), node(q)
            if u != v:
                edges.append((u, v, src))

    # deduplicate undirected edges (overlap would be degenerate)
    seen: dict[tuple[int, int], int] = {}
    uniq: list[tuple[int, int, int]] = []
    for u, v, src in edges:
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen[key] = len(uniq)
        uniq.append((u, v, src))
    edges = uniq

    # half-edge structure: next(h) continues the face walk, interior left
    half_from: list[int] = []
    half_to: list[int] = []
    half_src: list[int] = []
    for u, v, src in edges:
        half_from += [u, v]
        half_to += [v, u]
        half_src += [src, src]
    m = len(half_from)
    outgoing: dict[int, list[int]] = {}
    for h in range(m):
        outgoing.setdefault(half_from[h], []).append(h)
    angle = np.empty(m)
    for h in range(m):
        d = node_pts[half_to[h]] - node_pts[half_from[h]]
        angle[h] = np.arctan2(d[1], d[0])
    for u, hs in outgoing.items():
        hs.sort(key=lambda h: angle[h])
    nxt = [-1] * m
    for h in range(m):
        twin = h ^ 1
        hs = outgoing[half_to[h]]
        k = hs.index(twin)
        nxt[h] = hs[(k - 1) % len(hs)]

    face_of = [-1] * m
    loops: list[list[int]] = []
    for h in range(m):
        if face_of[h] != -1:
            continue
        loop = []
        cur = h
        while face_of[cur] == -1:
            face_of[cur] = len(loops)
            loop.append(cur)
            cur = nxt[cur]
        loops.append(loop)

    loop_pts = [np.array([node_pts[half_from[h]] for h in loop]) for loop in loops]
    loop_area = [_signed_area(lp) for lp in loop_pts]

    # positive loops are face boundaries, negative loops are holes
    faces = [k for k, a in enumerate(loop_area) if a > eps * diag]
    holes = [k for k, a in enumerate(loop_area) if a <= eps * diag]
    face_holes: dict[int, list[int]] = {k: [] for k in faces}
    hole_face: dict[int, int] = {}
    probe = 1e-4 * diag
    for hk in holes:
        # probe just left of the hole's leftmost vertex: outside the island,
        # inside the surrounding face (the unbounded face catches nothing)
        pts_h = loop_pts[hk]
        v = pts_h[np.lexsort((pts_h[:, 1], pts_h[:, 0]))[0]]
        sample = v + np.array([-probe, 0.0])
        best, best_area = None, None
        for fk in faces:
            if _point_in_loop(loop_pts[fk], sample[0], sample[1]):
                if best is None or loop_area[fk] < best_area:
                    best, best_area = fk, loop_area[fk]
        if best is not None:
            face_holes[best].append(hk)
            hole_face[hk] = best

    order = sorted(
        faces,
        key=lambda fk: (
            round(loop_pts[fk][:, 0].min() / eps),
            round(loop_pts[fk][:, 1].min() / eps),
            -loop_area[fk],
        ),
    )
    region_of_loop: dict[int, int] = {}
    regions = []
    for rid, fk in enumerate(order):
        region_of_loop[fk] = rid
        regions.append(Region(id=rid, loops=[loop_pts[fk]] + [loop_pts[hk] for hk in face_holes[fk]]))
    for hk, fk in hole_face.items():
        region_of_loop[hk] = region_of_loop[fk]

    adjacency = []
    for h in range(0, m, 2):
        la = face_of[h]
        lb = face_of[h ^ 1]
        ra = region_of_loop.get(la, -1)
        rb = region_of_loop.get(lb, -1)
        src = half_src[h]
        if src >= 0:
            adjacency.append((src, ra, rb))

    return Arrangement(regions=regions, rect=(x0, y0, x1, y1), adjacency=adjacency)


def _point_in_loop(loop: np.ndarray, px: float, py: float) -> bool:
    x, y = loop[:, 0], loop[:, 1]
    xj, yj = np.roll(x, -1), np.roll(y, -1)
    cross = (y > py) != (yj > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = x + (py - y) * (xj - x) / (yj - y)
    inside = bool(np.sum(cross & (px < xs)) % 2)
    return inside


def point_in_region(region: Region, px: float, py: float) -> bool:
    """Even-odd over all boundary loops."""
    parity = False
    for loop in region.loops:
        if _point_in_loop(loop, px, py):
            parity = not parity
    return parity


# ---------------------------------------------------------------------------
# Pole of inaccessibility (largest inscribed circle center).


class _Cell:
    __slots__ = ("x", "y", "h", "d", "promise")

    def __init__(self, x, y, h, dist_fn):
        self.x, self.y, self.h = x, y, h
        self.d = dist_fn(x, y)
        self.promise = self.d + h * np.sqrt(2.0)

    def __lt__(self, other):
        return self.promise > other.promise  # max-heap via heapq


def _boundary_distance(loops: list[np.ndarray]):
    starts = np.vstack(loops)
    ends = np.vstack([np.roll(lp, -1, axis=0) for lp in loops])
    d = ends - starts
    dd = np.maximum(np.einsum("ij,ij->i", d, d), 1e-30)

    def dist(px, py):
        rel = np.array([px, py])[None, :] - starts
        t = np.clip(np.einsum("ij,ij->i", rel, d) / dd, 0.0, 1.0)
        foot = starts + t[:, None] * d
        dmin = float(np.min(np.hypot(foot[:, 0] - px, foot[:, 1] - py)))
        parity = False
        for lp in loops:
            if _point_in_loop(lp, px, py):
                parity = not parity
        return dmin if parity else -dmin

    return dist


def pole_of_inaccessibility(
    loops: list[np.ndarray] | np.ndarray, precision: float | None = None
) -> tuple[np.ndarray, float]:
    """The interior point farthest from the boundary, and that distance.

    Quadtree search in the style of the mapbox polylabel algorithm; the
    default precision is 1% of the bounding-box diagonal.
    """
    if isinstance(loops, np.ndarray):
        loops = [loops]
    allpts = np.vstack(loops)
    minx, miny = allpts.min(axis=0)
    maxx, maxy = allpts.max(axis=0)
    w, h = maxx - minx, maxy - miny
    diameter = float(np.hypot(w, h))
    if diameter < 1e-12:
        raise ValueError("degenerate polygon")
    if precision is None:
        precision = 0.01 * diameter
    dist = _boundary_distance(loops)

    cell = min(w, h) / 2.0
    if cell < 1e-12:
        raise ValueError("degenerate polygon")
    heap: list[_Cell] = []
    x = minx
    while x < maxx:
        y = miny
        while y < maxy:
            heapq.heappush(heap, _Cell(x + cell, y + cell, cell, dist))
            y += 2 * cell
        x += 2 * cell

    centroid = allpts.mean(axis=0)
    best = _Cell(centroid[0], centroid[1], 0.0, dist)
    bbox_c = _Cell((minx + maxx) / 2, (miny + maxy) / 2, 0.0, dist)
    if bbox_c.d > best.d:
        best = bbox_c

    while heap:
        c = heapq.heappop(heap)
        if c.d > best.d:
            best = c
        if c.promise - best.d <= precision:
            continue
        h2 = c.h / 2.0
        for dx in (-h2, h2):
            for dy in (-h2, h2):
                heapq.heappush(heap, _Cell(c.x + dx, c.y + dy, h2, dist))
    return np.array([best.x, best.y]), float(best.d)


# ---------------------------------------------------------------------------
# Region labeling and point queries.


@dataclass
class RegionMap:
    arrangement: Arrangement
    labels: np.ndarray        # (r,) group element per region
    poles: np.ndarray         # (r, 2)
    pole_radii: np.ndarray    # (r,)
    bboxes: np.ndarray        # (r, 4) minx, miny, maxx, maxy

    def label_name(self, region_id: int, table: GroupTable) -> str:
        return table.names[int(self.labels[region_id])]


def label_regions(
    arrangement: Arrangement,
    camera: Camera,
    surface: PortalSurface,
    world: WorldState,
    far: float,
) -> RegionMap:
    """One pole raycast per region gives the world visible through it."""
    labels = []
    poles = []
    radii = []
    bboxes = []
    offsets = [(0.0, 0.0), (0.31, 0.17), (-0.22, 0.29), (0.11, -0.33), (-0.35, -0.12)]
    for region in arrangement.regions:
        pole, radius = pole_of_inaccessibility(region.loops)
        label = None
        last = None
        for ox, oy in offsets:
            px = pole[0] + ox * radius * 0.8
            py = pole[1] + oy * radius * 0.8
            direction = camera.ray_direction(px, py)
            try:
                events = ray_crossings(
                    camera.position, camera.position + far * direction, surface
                )
                label = transport(world, events, surface.table).element
                break
            except GrazingHit as err:
                last = err
        if label is None:
            raise GrazingHit(f"pole raycast kept grazing for region {region.id}: {last}")
        labels.append(label)
        poles.append(pole)
        radii.append(radius)
        bboxes.append(region.bbox())
    return RegionMap(
        arrangement=arrangement,
        labels=np.array(labels, dtype=np.int64),
        poles=np.array(poles),
        pole_radii=np.array(radii),
        bboxes=np.array(bboxes),
    )


def point_region(rmap: RegionMap, px: float, py: float) -> int:
    """Region containing the pixel; ties on boundaries go to the lowest id.

    Accelerated by the inscribed circle around each pole, then a bounding
    box prefilter before the even-odd test.
    """
    d2 = (rmap.poles[:, 0] - px) ** 2 + (rmap.poles[:, 1] - py) ** 2
    inside_circle = d2 < (0.999 * rmap.pole_radii) ** 2
    hits = np.nonzero(inside_circle)[0]
    if len(hits):
        return int(hits[0])
    for region in rmap.arrangement.regions:
        bb = rmap.bboxes[region.id]
        if not (bb[0] - 1e-9 <= px <= bb[2] + 1e-9 and bb[1] - 1e-9 <= py <= bb[3] + 1e-9):
            continue
        if point_in_region(region, px, py):
            return region.id
    # boundary-exact pixel: nearest region boundary wins, lowest id breaks ties
    best, best_d = 0, np.inf
    for region in rmap.arrangement.regions:
        dist = _boundary_distance(region.loops)(px, py)
        if abs(dist) < best_d - 1e-12:
            best, best_d = region.id, abs(dist)
    return best


def region_index_grid(rmap: RegionMap, width: int, height: int) -> np.ndarray:
    """Region id per pixel center, same tie-break semantics as point_region."""
    xs = np.arange(width) + 0.5
    ys = np.arange(height) + 0.5
    grid = np.full((height, width), -1, dtype=np.int64)
    for region in rmap.arrangement.regions:
        bb = rmap.bboxes[region.id]
        cx0 = max(0, int(np.floor(bb[0] - 1)))
        cx1 = min(width, int(np.ceil(bb[2] + 1)))
        cy0 = max(0, int(np.floor(bb[1] - 1)))
        cy1 = min(height, int(np.ceil(bb[3] + 1)))
        if cx0 >= cx1 or cy0 >= cy1:
            continue
        sub = grid[cy0:cy1, cx0:cx1]
        unassigned = sub == -1
        if not unassigned.any():
            continue
        px = xs[cx0:cx1][None, :]
        py = ys[cy0:cy1][:, None]
        parity = np.zeros(sub.shape, dtype=bool)
        for loop in region.loops:
            x, y = loop[:, 0], loop[:, 1]
            xj, yj = np.roll(x, -1), np.roll(y, -1)
            for k in range(len(loop)):
                yk, ykj = y[k], yj[k]
                if yk == ykj:
                    continue
                crosses = (yk > py) != (ykj > py)
                xs_at = x[k] + (py - yk) * (xj[k] - x[k]) / (ykj - yk)
                parity ^= crosses & (px < xs_at)
        sub[unassigned & parity] = region.id
    missing = np.argwhere(grid == -1)
    for iy, ix in missing:
        grid[iy, ix] = point_region(rmap, float(xs[ix]), float(ys[iy]))
    return grid
