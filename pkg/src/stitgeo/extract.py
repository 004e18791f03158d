"""Recovery of maximal polytopes and maximal segments from a tessellation.

A maximal segment is the intersection of ``d - 1`` splitting facets.  In the
plane every splitting chord is one maximal segment and its internal vertices
are the endpoints of later chords abutting its relative interior.  In space a
segment is identified by the unordered pair of splitting-event ids whose
facets intersect; it is born together with the later of the two events, as
the boundary edge of the new face that lies on the earlier facet.  Internal
vertices then arise two ways:

* a later face touches the segment with a corner whose adjacent boundary
  edges lie on the segment's two defining facets (a T-contact from an
  adjacent cell), or
* a face boundary edge sharing exactly one defining hyperplane crosses the
  segment transversally within that hyperplane (cells on the far side of a
  facet do not see the crease, so their splits cross it).

Both kinds are read off the event log; no floating-point fitting of the
final 1-skeleton is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError, Window, edges_with_tags
from .measure import canonical_normal

REL_TOL = 1e-9


class ExtractError(ValueError):
    pass


@dataclass(frozen=True)
class MaximalFacet:
    """A cell-splitting hyperplane piece with its birth time."""

    id: int
    birth_time: float
    verts: tuple
    normal: tuple
    offset: float

    def measure(self) -> float:
        from .kernels import facet_area_3d

        if len(self.verts[0]) == 2:
            (ax, ay), (bx, by) = self.verts
            return math.hypot(bx - ax, by - ay)
        return facet_area_3d(self.verts, tuple(range(len(self.verts))))


@dataclass
class MaximalSegment:
    """Maximal 1-polytope with its ascending birth-time vector."""

    p0: tuple
    p1: tuple
    length: float
    direction: tuple
    birth_times: tuple
    internal_vertices: int
    touches_boundary: bool

    @property
    def last_birth_time(self) -> float:
        return self.birth_times[-1]


@dataclass(frozen=True)
class SkeletonEdge:
    """One 1-skeleton edge: a piece of a chord between consecutive vertices."""

    p0: tuple
    p1: tuple
    length: float
    direction: tuple
    touches_boundary: bool


def _direction(p0, p1):
    d = tuple(b - a for a, b in zip(p0, p1))
    return canonical_normal(d)


def _dist(p0, p1):
    return math.sqrt(sum((b - a) ** 2 for a, b in zip(p0, p1)))


# ---------------------------------------------------------------------------
# maximal polytopes of dimension d-1 and 1


def maximal_facets(tess) -> list:
    """One facet per splitting event, with the face geometry at birth."""
    return [
        MaximalFacet(e.id, e.birth_time, e.face.verts, e.face.normal, e.face.offset)
        for e in tess.events
    ]


def maximal_segments(tess) -> list:
    if tess.dim == 2:
        if tess.kind == "pht":
            return _segments_pht_2d(tess)
        return _segments_2d(tess)
    if tess.dim == 3:
        if tess.kind == "pht":
            raise ExtractError("maximal segments of a PHT are supported in d=2 only")
        return _segments_3d(tess)
    raise ExtractError("unsupported dimension for segment extraction")


def _segments_2d(tess) -> list:
    events = tess.events
    counts = {}
    for e in events:
        for tag in e.face.tags:
            if tag >= 0:
                counts[tag] = counts.get(tag, 0) + 1
    out = []
    for e in events:
        p0, p1 = e.face.verts
        out.append(
            MaximalSegment(
                p0,
                p1,
                _dist(p0, p1),
                _direction(p0, p1),
                (e.birth_time,),
                counts.get(e.id, 0),
                any(tag < 0 for tag in e.face.tags),
            )
        )
    return out


def _segments_pht_2d(tess) -> list:
    """PHT chords with crossing counts (all hyperplanes coexist)."""
    chords = [e.face.verts for e in tess.events]
    n = len(chords)
    counts = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _cross_param_2d(chords[i], chords[j]) is not None:
                counts[i] += 1
                counts[j] += 1
    out = []
    for e, (p0, p1) in zip(tess.events, chords):
        out.append(
            MaximalSegment(
                p0, p1, _dist(p0, p1), _direction(p0, p1),
                (e.birth_time,), counts[e.id], True,
            )
        )
    return out


def _cross_param_2d(seg_a, seg_b):
    """Strict interior crossing parameter of seg_b on seg_a, or None."""
    (ax, ay), (bx, by) = seg_a
    (cx, cy), (dx, dy) = seg_b
    ux, uy = bx - ax, by - ay
    vx, vy = dx - cx, dy - cy
    den = ux * vy - uy * vx
    if den == 0.0:
        return None
    wx, wy = cx - ax, cy - ay
    s = (wx * vy - wy * vx) / den
    r = (wx * uy - wy * ux) / den
    if REL_TOL < s < 1.0 - REL_TOL and REL_TOL < r < 1.0 - REL_TOL:
        return s
    return None


def _segments_3d(tess) -> list:
    events = tess.events
    births = {e.id: e.birth_time for e in events}

    segs = {}  # (a, b) -> [p0, p1, births, points_on_line (params), touches]
    by_plane = {}  # plane id -> list of keys

    def register(a, b, p0, p1, n0, touches):
        key = (a, b)
        ux = p1[0] - p0[0]
        uy = p1[1] - p0[1]
        uz = p1[2] - p0[2]
        uu = ux * ux + uy * uy + uz * uz
        # [p0x, p0y, p0z, ux, uy, uz, uu, births, n, touch, p1]
        rec = [p0[0], p0[1], p0[2], ux, uy, uz, uu, (births[a], births[b]), n0, touches, p1]
        segs[key] = rec
        by_plane.setdefault(a, []).append(key)
        by_plane.setdefault(b, []).append(key)

    def crossing(rec, q0, q1):
        """Strict interior-interior crossing of segment rec with (q0, q1)."""
        p0x = rec[0]
        p0y = rec[1]
        p0z = rec[2]
        ux = rec[3]
        uy = rec[4]
        uz = rec[5]
        vx = q1[0] - q0[0]
        vy = q1[1] - q0[1]
        vz = q1[2] - q0[2]
        nx = uy * vz - uz * vy
        ny = uz * vx - ux * vz
        nz = ux * vy - uy * vx
        den = nx * nx + ny * ny + nz * nz
        uu = rec[6]
        vv = vx * vx + vy * vy + vz * vz
        if den <= 1e-18 * uu * vv:  # (near-)parallel lines never cross
            return False
        wx = q0[0] - p0x
        wy = q0[1] - p0y
        wz = q0[2] - p0z
        # s along rec, r along (q0, q1), via triple products
        s = ((wy * vz - wz * vy) * nx + (wz * vx - wx * vz) * ny + (wx * vy - wy * vx) * nz) / den
        if not REL_TOL < s < 1.0 - REL_TOL:
            return False
        r = ((wy * uz - wz * uy) * nx + (wz * ux - wx * uz) * ny + (wx * uy - wy * ux) * nz) / den
        if not REL_TOL < r < 1.0 - REL_TOL:
            return False
        # the parameters must name the same point on both lines
        gx = (p0x + s * ux) - (q0[0] + r * vx)
        gy = (p0y + s * uy) - (q0[1] + r * vy)
        gz = (p0z + s * uz) - (q0[2] + r * vz)
        if gx * gx + gy * gy + gz * gz > 1e-16 * (uu if uu > vv else vv):
            return False
        return True

    for e in events:
        verts = e.face.verts
        tags = e.face.tags
        m = len(verts)
        # T-contacts: corners between two boundary edges on split facets
        for i in range(m):
            g_prev = tags[i - 1]
            g_next = tags[i]
            if g_prev >= 0 and g_next >= 0 and g_prev != g_next:
                key = (g_prev, g_next) if g_prev < g_next else (g_next, g_prev)
                rec = segs.get(key)
                if rec is None:
                    raise ExtractError(
                        f"face corner references unknown segment {key}"
                    )
                rec[8] += 1
        # new segments and far-side crossings
        for i in range(m):
            a = tags[i]
            if a < 0:
                continue
            q0 = verts[i]
            q1 = verts[(i + 1) % m]
            inherited = 0
            for key in by_plane.get(a, ()):
                rec = segs[key]
                if crossing(rec, q0, q1):
                    # an internal vertex of the old segment, and inherited at
                    # birth by the new one
                    rec[8] += 1
                    inherited += 1
            touches = tags[i - 1] < 0 or tags[(i + 1) % m] < 0
            register(a, e.id, q0, q1, inherited, touches)

    out = []
    for (a, b), rec in segs.items():
        b0, b1 = rec[7]
        if not b0 < b1:
            raise ExtractError("segment birth times not strictly increasing")
        p0 = (rec[0], rec[1], rec[2])
        p1 = rec[10]
        out.append(
            MaximalSegment(
                p0,
                p1,
                math.sqrt(rec[6]),
                _direction(p0, p1),
                (b0, b1),
                rec[8],
                rec[9],
            )
        )
    return out


# ---------------------------------------------------------------------------
# skeleton edges (d = 2)


def skeleton_edges(tess) -> list:
    """1-skeleton edges of a planar tessellation: chord pieces between
    consecutive vertices on each chord (window boundary excluded)."""
    if tess.dim != 2:
        raise ExtractError("skeleton edges implemented for d=2")
    events = tess.events
    chords = [e.face.verts for e in tess.events]
    params = [[] for _ in events]
    boundary_end = []
    for e in events:
        boundary_end.append(tuple(tag < 0 for tag in e.face.tags))
    if tess.kind == "pht":
        n = len(chords)
        for i in range(n):
            for j in range(i + 1, n):
                s = _cross_param_2d(chords[i], chords[j])
                if s is not None:
                    params[i].append(s)
                    r = _cross_param_2d(chords[j], chords[i])
                    params[j].append(r)
        # PHT chords always span the window
        boundary_end = [(True, True)] * n
    else:
        for e in events:
            for k in (0, 1):
                tag = e.face.tags[k]
                if tag < 0:
                    continue
                p = e.face.verts[k]
                (ax, ay), (bx, by) = chords[tag]
                ux, uy = bx - ax, by - ay
                s = ((p[0] - ax) * ux + (p[1] - ay) * uy) / (ux * ux + uy * uy)
                params[tag].append(s)
    out = []
    for i, e in enumerate(events):
        (ax, ay), (bx, by) = chords[i]
        cuts = sorted(set([0.0, 1.0]) | set(params[i]))
        direction = _direction((ax, ay), (bx, by))
        for k in range(len(cuts) - 1):
            s0, s1 = cuts[k], cuts[k + 1]
            p0 = (ax + s0 * (bx - ax), ay + s0 * (by - ay))
            p1 = (ax + s1 * (bx - ax), ay + s1 * (by - ay))
            touches = (k == 0 and boundary_end[i][0]) or (
                k == len(cuts) - 2 and boundary_end[i][1]
            )
            out.append(SkeletonEdge(p0, p1, _dist(p0, p1), direction, touches))
    return out


# ---------------------------------------------------------------------------
# sampling and empirical distributions


def minus_sample(objects, window: Window, margin: float = 0.15) -> list:
    """Keep objects entirely inside the margin-shrunken window; objects that
    touch the window boundary are dropped regardless."""
    lo, hi = window.inner_box(margin)

    def inside(p):
        return all(l <= x <= h for x, l, h in zip(p, lo, hi))

    out = []
    for obj in objects:
        if getattr(obj, "touches_boundary", False):
            continue
        pts = obj.verts if hasattr(obj, "verts") else (obj.p0, obj.p1)
        if all(inside(p) for p in pts):
            out.append(obj)
    return out


@dataclass(frozen=True)
class WeightedSample:
    """Sample values with normalized nonnegative weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.values) != len(self.weights):
            raise ExtractError("values and weights length mismatch")

    @property
    def size(self) -> int:
        return len(self.values)

    def effective_size(self) -> float:
        s = float(np.sum(self.weights))
        return s * s / float(np.sum(self.weights**2))

    def mean(self) -> float:
        return float(np.average(self.values, weights=self.weights, axis=0))

    def prob(self, value) -> float:
        return float(np.sum(self.weights[self.values == value]))


STATISTICS = ("internal_vertices", "birth_times", "length", "last_birth_time")


def empirical_distribution(segments, mode: int, statistic: str) -> WeightedSample:
    """Weighted empirical law of a segment statistic.

    ``mode`` is the weighting exponent j: 0 gives the typical (count
    weighted) object, 1 the length-weighted one.
    """
    if not segments:
        raise ExtractError("no interior segments; enlarge t or window")
    if statistic not in STATISTICS:
        raise ExtractError(f"unknown statistic {statistic!r}")
    if mode not in (0, 1):
        raise ExtractError("weighting mode must be 0 (typical) or 1 (length)")
    if statistic == "internal_vertices":
        values = np.array([s.internal_vertices for s in segments], dtype=float)
    elif statistic == "length":
        values = np.array([s.length for s in segments], dtype=float)
    elif statistic == "last_birth_time":
        values = np.array([s.last_birth_time for s in segments], dtype=float)
    else:
        values = np.array([s.birth_times for s in segments], dtype=float)
    if mode == 0:
        weights = np.full(len(segments), 1.0 / len(segments))
    else:
        weights = np.array([s.length for s in segments], dtype=float)
        weights = weights / weights.sum()
    return WeightedSample(values, weights)


# ---------------------------------------------------------------------------
# line sections


def line_section(tess, base, direction) -> np.ndarray:
    """Sorted parameters of the intersections of the line ``base + s *
    direction`` with the union of the splitting faces."""
    u = canonical_normal(direction)
    params = []
    if tess.dim == 2:
        for e in tess.events:
            (ax, ay), (bx, by) = e.face.verts
            vx, vy = bx - ax, by - ay
            den = u[0] * vy - u[1] * vx
            if den == 0.0:
                continue
            # solve base + s*u = a + r*v
            wx, wy = ax - base[0], ay - base[1]
            s = (wx * vy - wy * vx) / den
            r = (wx * u[1] - wy * u[0]) / den
            if 0.0 <= r <= 1.0:
                params.append(s)
    else:
        for e in tess.events:
            n = e.face.normal
            un = u[0] * n[0] + u[1] * n[1] + u[2] * n[2]
            if abs(un) < 1e-14:
                continue
            bn = base[0] * n[0] + base[1] * n[1] + base[2] * n[2]
            s = (e.face.offset - bn) / un
            p = tuple(base[k] + s * u[k] for k in range(3))
            if _point_in_face_3d(p, e.face):
                params.append(s)
    return np.array(sorted(params))


def _point_in_face_3d(p, face, tol_rel: float = 1e-12) -> bool:
    verts = face.verts
    n = face.normal
    m = len(verts)
    sign = 0
    for i in range(m):
        a = verts[i]
        b = verts[(i + 1) % m]
        ex, ey, ez = b[0] - a[0], b[1] - a[1], b[2] - a[2]
        px, py, pz = p[0] - a[0], p[1] - a[1], p[2] - a[2]
        cx = ey * pz - ez * py
        cy = ez * px - ex * pz
        cz = ex * py - ey * px
        s = cx * n[0] + cy * n[1] + cz * n[2]
        scale = (ex * ex + ey * ey + ez * ez) + (px * px + py * py + pz * pz)
        if abs(s) <= tol_rel * scale:
            continue
        if sign == 0:
            sign = 1 if s > 0 else -1
        elif (s > 0) != (sign > 0):
            return False
    return True


# ---------------------------------------------------------------------------
# intrinsic-volume densities


def kappa_d(d: int) -> float:
    """Volume of the d-dimensional unit ball (used only for ball-shaped
    sampling windows; box windows normalize by the box volume)."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def density_estimate(tessellations, k: int, j: int, margin: float = 0.15) -> float:
    """Empirical density of the j-th intrinsic volume of the maximal
    k-polytopes: sum of ``V_j`` over minus-sampled objects per unit sampled
    volume, averaged over replicates."""
    tessellations = list(tessellations)
    if not tessellations:
        raise ExtractError("no replicates")
    dim = tessellations[0].dim
    if k not in (1, dim - 1):
        raise ExtractError("k must be 1 or d-1")
    if j not in (0, k):
        raise ExtractError("j must be 0 or k")
    totals = []
    for tess in tessellations:
        window = tess.window
        lo, hi = window.inner_box(margin)
        sampled_volume = math.prod(h - l for l, h in zip(lo, hi))
        if k == 1 and dim != 2:
            objs = minus_sample(maximal_segments(tess), window, margin)
        elif k == dim - 1 and dim == 3:
            objs = minus_sample(maximal_facets(tess), window, margin)
        else:  # d = 2: facets and segments coincide (chords)
            objs = minus_sample(maximal_segments(tess), window, margin)
        if j == 0:
            total = float(len(objs))
        elif k == 1:
            total = math.fsum(o.length for o in objs)
        else:
            total = math.fsum(o.measure() for o in objs)
        totals.append(total / sampled_volume)
    return float(np.mean(totals))
