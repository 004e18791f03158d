"""Pure-Python geometry kernel.

Convex cells are plain tuples so that the compiled kernel and this module can
be used interchangeably:

* 2-d cell: ``verts`` is a CCW tuple of ``(x, y)`` pairs, ``tags`` is a
  parallel tuple where ``tags[i]`` labels the edge ``verts[i] -> verts[i+1]``.
* 3-d cell: ``verts`` is a tuple of ``(x, y, z)`` points, ``facets`` is a
  tuple of ``(tag, cycle)`` with ``cycle`` a tuple of vertex indices walking
  the facet boundary.

Tags are integers: negative values label window facets, non-negative values
refer to the splitting event that created the facet.

All clipping routines split a cell by the hyperplane ``<x, n> = off`` into the
part with ``<x, n> >= off`` ("plus") and the rest ("minus").  Vertices within
``eps`` of the plane are snapped onto it; crossing points on shared edges are
computed once so both output cells agree bitwise.
"""

import math

BACKEND = "python"


class KernelError(ValueError):
    """Degenerate geometry handed to a kernel routine."""


# ---------------------------------------------------------------------------
# 2-d routines


def support_2d(verts, nx, ny):
    """Support interval (min, max) of the polygon in direction (nx, ny)."""
    if not verts:
        raise KernelError("empty body")
    lo = hi = verts[0][0] * nx + verts[0][1] * ny
    for i in range(1, len(verts)):
        s = verts[i][0] * nx + verts[i][1] * ny
        if s < lo:
            lo = s
        elif s > hi:
            hi = s
    return lo, hi


def area_2d(verts):
    """Shoelace area of a CCW polygon."""
    a = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        a += x0 * y1 - x1 * y0
    return 0.5 * abs(a)


def perimeter_2d(verts):
    p = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        dx = x1 - x0
        dy = y1 - y0
        p += math.sqrt(dx * dx + dy * dy)
    return p


def diameter_2d(verts):
    best = 0.0
    n = len(verts)
    for i in range(n):
        xi, yi = verts[i]
        for j in range(i + 1, n):
            dx = verts[j][0] - xi
            dy = verts[j][1] - yi
            d = dx * dx + dy * dy
            if d > best:
                best = d
    return math.sqrt(best)


def discrete_rate_2d(verts, nxs, nys, weights):
    """Weighted sum of directional widths (the discrete hitting measure)."""
    total = 0.0
    for k in range(len(weights)):
        nx = nxs[k]
        ny = nys[k]
        lo = hi = verts[0][0] * nx + verts[0][1] * ny
        for i in range(1, len(verts)):
            s = verts[i][0] * nx + verts[i][1] * ny
            if s < lo:
                lo = s
            elif s > hi:
                hi = s
        total += weights[k] * (hi - lo)
    return total


def clip_2d(verts, tags, nx, ny, off, new_tag, eps):
    """Split a convex polygon by a line.

    Returns ``(verts_p, tags_p, verts_m, tags_m, chord, end_tags)`` where
    ``chord`` is the pair of crossing points and ``end_tags[k]`` is the tag of
    the edge that ``chord[k]`` lies on.  Raises :class:`KernelError` when the
    line misses the polygon interior.
    """
    n = len(verts)
    dists = []
    has_pos = has_neg = False
    for x, y in verts:
        d = x * nx + y * ny - off
        if -eps < d < eps:
            d = 0.0
        elif d > 0.0:
            has_pos = True
        else:
            has_neg = True
        dists.append(d)
    if not (has_pos and has_neg):
        raise KernelError("non-splitting hyperplane")

    pos_v, pos_t = [], []
    neg_v, neg_t = [], []
    chord = []
    end_tags = []
    for i in range(n):
        a = verts[i]
        da = dists[i]
        tag = tags[i]
        j = (i + 1) % n
        b = verts[j]
        db = dists[j]
        if da > 0.0:
            pos_v.append(a)
            pos_t.append(tag)
        elif da < 0.0:
            neg_v.append(a)
            neg_t.append(tag)
        else:
            # vertex on the line: belongs to both parts and ends the chord
            if db > 0.0:
                pos_v.append(a)
                pos_t.append(tag)
                neg_v.append(a)
                neg_t.append(new_tag)
            else:
                pos_v.append(a)
                pos_t.append(new_tag)
                neg_v.append(a)
                neg_t.append(tag)
            chord.append(a)
            end_tags.append(tags[i - 1])
        if da * db < 0.0:
            t = da / (da - db)
            p = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            if da > 0.0:  # leaving the plus side
                pos_v.append(p)
                pos_t.append(new_tag)
                neg_v.append(p)
                neg_t.append(tag)
            else:
                pos_v.append(p)
                pos_t.append(tag)
                neg_v.append(p)
                neg_t.append(new_tag)
            chord.append(p)
            end_tags.append(tag)
    if len(chord) != 2:
        raise KernelError("degenerate clip: %d crossing points" % len(chord))
    return (
        tuple(pos_v),
        tuple(pos_t),
        tuple(neg_v),
        tuple(neg_t),
        (chord[0], chord[1]),
        (end_tags[0], end_tags[1]),
    )


# ---------------------------------------------------------------------------
# 3-d routines


def support_3d(verts, nx, ny, nz):
    if not verts:
        raise KernelError("empty body")
    lo = hi = verts[0][0] * nx + verts[0][1] * ny + verts[0][2] * nz
    for i in range(1, len(verts)):
        v = verts[i]
        s = v[0] * nx + v[1] * ny + v[2] * nz
        if s < lo:
            lo = s
        elif s > hi:
            hi = s
    return lo, hi


def diameter_3d(verts):
    best = 0.0
    n = len(verts)
    for i in range(n):
        xi, yi, zi = verts[i]
        for j in range(i + 1, n):
            v = verts[j]
            dx = v[0] - xi
            dy = v[1] - yi
            dz = v[2] - zi
            d = dx * dx + dy * dy + dz * dz
            if d > best:
                best = d
    return math.sqrt(best)


def discrete_rate_3d(verts, nxs, nys, nzs, weights):
    total = 0.0
    for k in range(len(weights)):
        nx = nxs[k]
        ny = nys[k]
        nz = nzs[k]
        v = verts[0]
        lo = hi = v[0] * nx + v[1] * ny + v[2] * nz
        for i in range(1, len(verts)):
            v = verts[i]
            s = v[0] * nx + v[1] * ny + v[2] * nz
            if s < lo:
                lo = s
            elif s > hi:
                hi = s
        total += weights[k] * (hi - lo)
    return total


def _centroid_3d(verts):
    cx = cy = cz = 0.0
    for x, y, z in verts:
        cx += x
        cy += y
        cz += z
    n = float(len(verts))
    return cx / n, cy / n, cz / n


def volume_3d(verts, facets):
    """Volume via tetrahedra fanned from the vertex centroid.

    Orientation-free: the signed sum is taken per facet and its absolute
    value added, which is valid for convex cells with planar facets.
    """
    rx, ry, rz = _centroid_3d(verts)
    total = 0.0
    for _tag, cyc in facets:
        if len(cyc) < 3:
            continue
        ax, ay, az = verts[cyc[0]]
        ax -= rx
        ay -= ry
        az -= rz
        s = 0.0
        for k in range(1, len(cyc) - 1):
            bx, by, bz = verts[cyc[k]]
            cx, cy, cz = verts[cyc[k + 1]]
            bx -= rx
            by -= ry
            bz -= rz
            cx -= rx
            cy -= ry
            cz -= rz
            s += ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx)
        total += abs(s)
    return total / 6.0


def facet_area_3d(verts, cycle):
    """Area of a planar facet given by a vertex cycle."""
    if len(cycle) < 3:
        return 0.0
    ox, oy, oz = verts[cycle[0]]
    sx = sy = sz = 0.0
    for k in range(1, len(cycle) - 1):
        ax, ay, az = verts[cycle[k]]
        bx, by, bz = verts[cycle[k + 1]]
        ax -= ox
        ay -= oy
        az -= oz
        bx -= ox
        by -= oy
        bz -= oz
        sx += ay * bz - az * by
        sy += az * bx - ax * bz
        sz += ax * by - ay * bx
    return 0.5 * math.sqrt(sx * sx + sy * sy + sz * sz)


def mean_width_3d(verts, facets):
    """Mean width of a convex polytope from edge lengths and dihedral angles.

    Uses ``b = (1/4pi) * sum_e len(e) * exterior_angle(e)``; the exterior
    angle is the angle between the outward normals of the two incident facets.
    """
    rx, ry, rz = _centroid_3d(verts)
    normals = []
    for _tag, cyc in facets:
        ox, oy, oz = verts[cyc[0]]
        sx = sy = sz = 0.0
        for k in range(1, len(cyc) - 1):
            ax, ay, az = verts[cyc[k]]
            bx, by, bz = verts[cyc[k + 1]]
            sx += (ay - oy) * (bz - oz) - (az - oz) * (by - oy)
            sy += (az - oz) * (bx - ox) - (ax - ox) * (bz - oz)
            sz += (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
        nrm = math.sqrt(sx * sx + sy * sy + sz * sz)
        if nrm == 0.0:
            normals.append((0.0, 0.0, 0.0))
            continue
        sx /= nrm
        sy /= nrm
        sz /= nrm
        # orient outward relative to the centroid
        if sx * (ox - rx) + sy * (oy - ry) + sz * (oz - rz) < 0.0:
            sx, sy, sz = -sx, -sy, -sz
        normals.append((sx, sy, sz))

    edges = {}
    for fi, (_tag, cyc) in enumerate(facets):
        m = len(cyc)
        for k in range(m):
            i = cyc[k]
            j = cyc[(k + 1) % m]
            key = (i, j) if i < j else (j, i)
            if key in edges:
                edges[key] = (edges[key][0], fi)
            else:
                edges[key] = (fi, -1)

    total = 0.0
    for (i, j), (f1, f2) in edges.items():
        if f2 < 0:
            continue
        n1 = normals[f1]
        n2 = normals[f2]
        c = n1[0] * n2[0] + n1[1] * n2[1] + n1[2] * n2[2]
        if c > 1.0:
            c = 1.0
        elif c < -1.0:
            c = -1.0
        a = verts[i]
        b = verts[j]
        dx = b[0] - a[0]
        dy = b[1] - a[1]
        dz = b[2] - a[2]
        total += math.sqrt(dx * dx + dy * dy + dz * dz) * math.acos(c)
    return total / (4.0 * math.pi)


def clip_3d(verts, facets, nx, ny, nz, off, new_tag, eps):
    """Split a convex polytope by a plane.

    Returns ``(verts_p, facets_p, verts_m, facets_m, face_verts, face_tags)``.
    ``face_verts`` is the section polygon (cycle of points) and
    ``face_tags[i]`` is the tag of the facet that the section edge
    ``face_verts[i] -> face_verts[i+1]`` lies on.
    """
    nv = len(verts)
    dists = []
    has_pos = has_neg = False
    for x, y, z in verts:
        d = x * nx + y * ny + z * nz - off
        if -eps < d < eps:
            d = 0.0
        elif d > 0.0:
            has_pos = True
        else:
            has_neg = True
        dists.append(d)
    if not (has_pos and has_neg):
        raise KernelError("non-splitting hyperplane")

    # crossing points keyed by undirected edge; on-plane vertices keyed by index
    xpoints = {}

    def crossing(i, j):
        key = (i, j) if i < j else (j, i)
        p = xpoints.get(key)
        if p is None:
            a = verts[i]
            b = verts[j]
            t = dists[i] / (dists[i] - dists[j])
            p = (
                a[0] + t * (b[0] - a[0]),
                a[1] + t * (b[1] - a[1]),
                a[2] + t * (b[2] - a[2]),
            )
            xpoints[key] = p
        return key

    pos_facets = []  # (tag, list of vertex keys)
    neg_facets = []
    section = []  # (exit_key, entry_key, tag) walking each facet cycle

    for tag, cyc in facets:
        m = len(cyc)
        pos_c, neg_c = [], []
        exit_key = entry_key = None
        for k in range(m):
            i = cyc[k]
            j = cyc[(k + 1) % m]
            di = dists[i]
            dj = dists[j]
            if di > 0.0:
                pos_c.append(i)
            elif di < 0.0:
                neg_c.append(i)
            else:
                pos_c.append(("v", i))
                neg_c.append(("v", i))
                dprev = dists[cyc[k - 1]]
                if dprev > 0.0 and dj < 0.0:
                    exit_key = ("v", i)
                elif dprev < 0.0 and dj > 0.0:
                    entry_key = ("v", i)
            if di * dj < 0.0:
                key = crossing(i, j)
                pos_c.append(key)
                neg_c.append(key)
                if di > 0.0:
                    exit_key = key
                else:
                    entry_key = key
        if exit_key is not None and entry_key is not None and exit_key != entry_key:
            section.append((exit_key, entry_key, tag))
        if len(pos_c) >= 3:
            pos_facets.append((tag, pos_c))
        if len(neg_c) >= 3:
            neg_facets.append((tag, neg_c))

    if len(section) < 3:
        raise KernelError("degenerate clip: open section polygon")

    # chain the section edges into a cycle
    nxt = {}
    for a, b, tag in section:
        nxt[a] = (b, tag)
    start = section[0][0]
    cycle_keys = []
    face_tags = []
    key = start
    for _ in range(len(section)):
        cycle_keys.append(key)
        b, tag = nxt[key]
        face_tags.append(tag)
        key = b
    if key != start or len(cycle_keys) != len(section):
        raise KernelError("degenerate clip: section chaining failed")

    # chained direction has right-hand normal on the plus side: outward for
    # the minus cell, reversed for the plus cell
    neg_facets.append((new_tag, cycle_keys))
    pos_facets.append((new_tag, list(reversed(cycle_keys))))

    def lookup(key):
        if isinstance(key, int):
            return verts[key]
        if key[0] == "v":
            return verts[key[1]]
        return xpoints[key]

    def build(raw_facets):
        index = {}
        out_verts = []
        out_facets = []
        for tag, cyc in raw_facets:
            mapped = []
            for key in cyc:
                k2 = key[1] if (isinstance(key, tuple) and key[0] == "v") else key
                idx = index.get(k2)
                if idx is None:
                    idx = len(out_verts)
                    index[k2] = idx
                    out_verts.append(lookup(key))
                mapped.append(idx)
            out_facets.append((tag, tuple(mapped)))
        return tuple(out_verts), tuple(out_facets)

    verts_p, facets_p = build(pos_facets)
    verts_m, facets_m = build(neg_facets)
    face_verts = tuple(lookup(k) for k in cycle_keys)
    return verts_p, facets_p, verts_m, facets_m, face_verts, tuple(face_tags)
