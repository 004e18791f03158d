# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernel: a C-speed twin of ``pycore``.

Same functions, same plain-tuple cell representation, same arithmetic
operation order, so results are bit-identical to the pure-Python kernel on
every platform with IEEE doubles.  Inputs are parsed once into stack/heap C
arrays; only the outputs are boxed back into tuples.
"""

from libc.math cimport acos, sqrt
from libc.stdlib cimport free, malloc

from stitgeo.kernels.pycore import KernelError

BACKEND = "compiled"

cdef int MAXV = 256


cdef inline int _load2(object verts, double* xs, double* ys) except -1:
    cdef int n = len(verts)
    cdef int i
    if n > MAXV:
        raise KernelError("polygon too large for kernel buffer")
    for i in range(n):
        v = verts[i]
        xs[i] = v[0]
        ys[i] = v[1]
    return n


def support_2d(verts, double nx, double ny):
    cdef double xs[256]
    cdef double ys[256]
    cdef int n = _load2(verts, xs, ys)
    if n == 0:
        raise KernelError("empty body")
    cdef double lo, hi, s
    cdef int i
    lo = hi = xs[0] * nx + ys[0] * ny
    for i in range(1, n):
        s = xs[i] * nx + ys[i] * ny
        if s < lo:
            lo = s
        elif s > hi:
            hi = s
    return lo, hi


def area_2d(verts):
    cdef double xs[256]
    cdef double ys[256]
    cdef int n = _load2(verts, xs, ys)
    cdef double a = 0.0
    cdef int i, j
    for i in range(n):
        j = (i + 1) % n
        a += xs[i] * ys[j] - xs[j] * ys[i]
    if a < 0.0:
        a = -a
    return 0.5 * a


def perimeter_2d(verts):
    cdef double xs[256]
    cdef double ys[256]
    cdef int n = _load2(verts, xs, ys)
    cdef double p = 0.0, dx, dy
    cdef int i, j
    for i in range(n):
        j = (i + 1) % n
        dx = xs[j] - xs[i]
        dy = ys[j] - ys[i]
        p += sqrt(dx * dx + dy * dy)
    return p


def diameter_2d(verts):
    cdef double xs[256]
    cdef double ys[256]
    cdef int n = _load2(verts, xs, ys)
    cdef double best = 0.0, dx, dy, d
    cdef int i, j
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[j] - xs[i]
            dy = ys[j] - ys[i]
            d = dx * dx + dy * dy
            if d > best:
                best = d
    return sqrt(best)


def clip_2d(verts, tags, double nx, double ny, double off, new_tag, double eps):
    cdef double xs[256]
    cdef double ys[256]
    cdef double dist[256]
    cdef int n = _load2(verts, xs, ys)
    cdef int i, j
    cdef double d
    cdef bint has_pos = False, has_neg = False
    for i in range(n):
        d = xs[i] * nx + ys[i] * ny - off
        if -eps < d < eps:
            d = 0.0
        elif d > 0.0:
            has_pos = True
        else:
            has_neg = True
        dist[i] = d
    if not (has_pos and has_neg):
        raise KernelError("non-splitting hyperplane")

    pos_v = []
    pos_t = []
    neg_v = []
    neg_t = []
    chord = []
    end_tags = []
    cdef double da, db, t, px, py
    for i in range(n):
        da = dist[i]
        tag = tags[i]
        j = (i + 1) % n
        db = dist[j]
        if da > 0.0:
            pos_v.append((xs[i], ys[i]))
            pos_t.append(tag)
        elif da < 0.0:
            neg_v.append((xs[i], ys[i]))
            neg_t.append(tag)
        else:
            a = (xs[i], ys[i])
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
            end_tags.append(tags[i - 1] if i > 0 else tags[n - 1])
        if da * db < 0.0:
            t = da / (da - db)
            px = xs[i] + t * (xs[j] - xs[i])
            py = ys[i] + t * (ys[j] - ys[i])
            p = (px, py)
            if da > 0.0:
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


def discrete_rate_2d(verts, nxs, nys, weights):
    cdef double xs[256]
    cdef double ys[256]
    cdef int n = _load2(verts, xs, ys)
    cdef int nk = len(weights)
    cdef double total = 0.0, nx, ny, lo, hi, s
    cdef int k, i
    for k in range(nk):
        nx = nxs[k]
        ny = nys[k]
        lo = hi = xs[0] * nx + ys[0] * ny
        for i in range(1, n):
            s = xs[i] * nx + ys[i] * ny
            if s < lo:
                lo = s
            elif s > hi:
                hi = s
        total += weights[k] * (hi - lo)
    return total


# ---------------------------------------------------------------------------
# 3-d


cdef inline int _load3(object verts, double* xs, double* ys, double* zs) except -1:
    cdef int n = len(verts)
    cdef int i
    if n > MAXV:
        raise KernelError("polytope too large for kernel buffer")
    for i in range(n):
        v = verts[i]
        xs[i] = v[0]
        ys[i] = v[1]
        zs[i] = v[2]
    return n


def support_3d(verts, double nx, double ny, double nz):
    cdef double xs[256]
    cdef double ys[256]
    cdef double zs[256]
    cdef int n = _load3(verts, xs, ys, zs)
    if n == 0:
        raise KernelError("empty body")
    cdef double lo, hi, s
    cdef int i
    lo = hi = xs[0] * nx + ys[0] * ny + zs[0] * nz
    for i in range(1, n):
        s = xs[i] * nx + ys[i] * ny + zs[i] * nz
        if s < lo:
            lo = s
        elif s > hi:
            hi = s
    return lo, hi


def diameter_3d(verts):
    cdef double xs[256]
    cdef double ys[256]
    cdef double zs[256]
    cdef int n = _load3(verts, xs, ys, zs)
    cdef double best = 0.0, dx, dy, dz, d
    cdef int i, j
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[j] - xs[i]
            dy = ys[j] - ys[i]
            dz = zs[j] - zs[i]
            d = dx * dx + dy * dy + dz * dz
            if d > best:
                best = d
    return sqrt(best)


def discrete_rate_3d(verts, nxs, nys, nzs, weights):
    cdef double xs[256]
    cdef double ys[256]
    cdef double zs[256]
    cdef int n = _load3(verts, xs, ys, zs)
    cdef int nk = len(weights)
    cdef double total = 0.0, nx, ny, nz, lo, hi, s
    cdef int k, i
    for k in range(nk):
        nx = nxs[k]
        ny = nys[k]
        nz = nzs[k]
        lo = hi = xs[0] * nx + ys[0] * ny + zs[0] * nz
        for i in range(1, n):
            s = xs[i] * nx + ys[i] * ny + zs[i] * nz
            if s < lo:
                lo = s
            elif s > hi:
                hi = s
        total += weights[k] * (hi - lo)
    return total


def volume_3d(verts, facets):
    cdef double xs[256]
    cdef double ys[256]
    cdef double zs[256]
    cdef int n = _load3(verts, xs, ys, zs)
    cdef double rx = 0.0, ry = 0.0, rz = 0.0
    cdef int i, k, m, i0, i1, i2
    for i in range(n):
        rx += xs[i]
        ry += ys[i]
        rz += zs[i]
    cdef double fn = <double> n
    rx /= fn
    ry /= fn
    rz /= fn
    cdef double total = 0.0, s, ax, ay, az, bx, by, bz, cx, cy, cz
    for tag_cyc in facets:
        cyc = tag_cyc[1]
        m = len(cyc)
        if m < 3:
            continue
        i0 = cyc[0]
        ax = xs[i0] - rx
        ay = ys[i0] - ry
        az = zs[i0] - rz
        s = 0.0
        for k in range(1, m - 1):
            i1 = cyc[k]
            i2 = cyc[k + 1]
            bx = xs[i1] - rx
            by = ys[i1] - ry
            bz = zs[i1] - rz
            cx = xs[i2] - rx
            cy = ys[i2] - ry
            cz = zs[i2] - rz
            s += ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx)
        if s < 0.0:
            s = -s
        total += s
    return total / 6.0


def facet_area_3d(verts, cycle):
    cdef double xs[256]
    cdef double ys[256]
    cdef double zs[256]
    cdef int n = _load3(verts, xs, ys, zs)
    cdef int m = len(cycle)
    if m < 3:
        return 0.0
    cdef int i0 = cycle[0], i1, i2, k
    cdef double ox = xs[i0], oy = ys[i0], oz = zs[i0]
    cdef double sx = 0.0, sy = 0.0, sz = 0.0
    cdef double ax, ay, az, bx, by, bz
    for k in range(1, m - 1):
        i1 = cycle[k]
        i2 = cycle[k + 1]
        ax = xs[i1] - ox
        ay = ys[i1] - oy
        az = zs[i1] - oz
        bx = xs[i2] - ox
        by = ys[i2] - oy
        bz = zs[i2] - oz
        sx += ay * bz - az * by
        sy += az * bx - ax * bz
        sz += ax * by - ay * bx
    return 0.5 * sqrt(sx * sx + sy * sy + sz * sz)


def mean_width_3d(verts, facets):
    cdef double xs[256]
    cdef double ys[256]
    cdef double zs[256]
    cdef int n = _load3(verts, xs, ys, zs)
    cdef int nf = len(facets)
    cdef double rx = 0.0, ry = 0.0, rz = 0.0
    cdef int i, j, fi, k, m, i1, i2, f1, f2
    cdef double ox, oy, oz, sx, sy, sz, nrm
    cdef double total = 0.0, c, dx, dy, dz
    for i in range(n):
        rx += xs[i]
        ry += ys[i]
        rz += zs[i]
    cdef double fn = <double> n
    rx /= fn
    ry /= fn
    rz /= fn

    cdef double* nxs = <double*> malloc(3 * nf * sizeof(double))
    if nxs == NULL:
        raise MemoryError()
    try:
        for fi in range(nf):
            cyc = facets[fi][1]
            m = len(cyc)
            i1 = cyc[0]
            ox = xs[i1]
            oy = ys[i1]
            oz = zs[i1]
            sx = sy = sz = 0.0
            for k in range(1, m - 1):
                i1 = cyc[k]
                i2 = cyc[k + 1]
                sx += (ys[i1] - oy) * (zs[i2] - oz) - (zs[i1] - oz) * (ys[i2] - oy)
                sy += (zs[i1] - oz) * (xs[i2] - ox) - (xs[i1] - ox) * (zs[i2] - oz)
                sz += (xs[i1] - ox) * (ys[i2] - oy) - (ys[i1] - oy) * (xs[i2] - ox)
            nrm = sqrt(sx * sx + sy * sy + sz * sz)
            if nrm == 0.0:
                nxs[3 * fi] = 0.0
                nxs[3 * fi + 1] = 0.0
                nxs[3 * fi + 2] = 0.0
                continue
            sx /= nrm
            sy /= nrm
            sz /= nrm
            if sx * (ox - rx) + sy * (oy - ry) + sz * (oz - rz) < 0.0:
                sx = -sx
                sy = -sy
                sz = -sz
            nxs[3 * fi] = sx
            nxs[3 * fi + 1] = sy
            nxs[3 * fi + 2] = sz

        # undirected edges -> the two incident facets (insertion order kept)
        edges = {}
        for fi in range(nf):
            cyc = facets[fi][1]
            m = len(cyc)
            for k in range(m):
                i = cyc[k]
                j = cyc[(k + 1) % m]
                key = (i, j) if i < j else (j, i)
                prev = edges.get(key)
                if prev is None:
                    edges[key] = (fi, -1)
                else:
                    edges[key] = (prev[0], fi)

        for key, pair in edges.items():
            f1 = pair[0]
            f2 = pair[1]
            if f2 < 0:
                continue
            c = (
                nxs[3 * f1] * nxs[3 * f2]
                + nxs[3 * f1 + 1] * nxs[3 * f2 + 1]
                + nxs[3 * f1 + 2] * nxs[3 * f2 + 2]
            )
            if c > 1.0:
                c = 1.0
            elif c < -1.0:
                c = -1.0
            i = key[0]
            j = key[1]
            dx = xs[j] - xs[i]
            dy = ys[j] - ys[i]
            dz = zs[j] - zs[i]
            total += sqrt(dx * dx + dy * dy + dz * dz) * acos(c)
        return total / (4.0 * 3.141592653589793)
    finally:
        free(nxs)


def clip_3d(verts, facets, double nx, double ny, double nz, double off, new_tag, double eps):
    cdef double xs[256]
    cdef double ys[256]
    cdef double zs[256]
    cdef int nv = _load3(verts, xs, ys, zs)
    cdef double dist[256]
    cdef int i, j, k, m
    cdef double d
    cdef bint has_pos = False, has_neg = False
    for i in range(nv):
        d = xs[i] * nx + ys[i] * ny + zs[i] * nz - off
        if -eps < d < eps:
            d = 0.0
        elif d > 0.0:
            has_pos = True
        else:
            has_neg = True
        dist[i] = d
    if not (has_pos and has_neg):
        raise KernelError("non-splitting hyperplane")

    xpoints = {}
    pos_facets = []
    neg_facets = []
    section = []
    cdef double di, dj, dprev, t

    for tag_cyc in facets:
        tag = tag_cyc[0]
        cyc = tag_cyc[1]
        m = len(cyc)
        pos_c = []
        neg_c = []
        exit_key = None
        entry_key = None
        for k in range(m):
            i = cyc[k]
            j = cyc[(k + 1) % m]
            di = dist[i]
            dj = dist[j]
            if di > 0.0:
                pos_c.append(i)
            elif di < 0.0:
                neg_c.append(i)
            else:
                vk = ("v", i)
                pos_c.append(vk)
                neg_c.append(vk)
                dprev = dist[cyc[k - 1]] if k > 0 else dist[cyc[m - 1]]
                if dprev > 0.0 and dj < 0.0:
                    exit_key = vk
                elif dprev < 0.0 and dj > 0.0:
                    entry_key = vk
            if di * dj < 0.0:
                key = (i, j) if i < j else (j, i)
                p = xpoints.get(key)
                if p is None:
                    t = di / (di - dj)
                    p = (
                        xs[i] + t * (xs[j] - xs[i]),
                        ys[i] + t * (ys[j] - ys[i]),
                        zs[i] + t * (zs[j] - zs[i]),
                    )
                    xpoints[key] = p
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

    nxt = {}
    for a, b, tag in section:
        nxt[a] = (b, tag)
    start = section[0][0]
    cycle_keys = []
    face_tags = []
    key = start
    for _ in range(len(section)):
        cycle_keys.append(key)
        nb = nxt[key]
        face_tags.append(nb[1])
        key = nb[0]
    if key != start or len(cycle_keys) != len(section):
        raise KernelError("degenerate clip: section chaining failed")

    neg_facets.append((new_tag, cycle_keys))
    rev = list(cycle_keys)
    rev.reverse()
    pos_facets.append((new_tag, rev))

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
        for tag, cyc2 in raw_facets:
            mapped = []
            for key2 in cyc2:
                k2 = key2[1] if (isinstance(key2, tuple) and key2[0] == "v") else key2
                idx = index.get(k2)
                if idx is None:
                    idx = len(out_verts)
                    index[k2] = idx
                    out_verts.append(lookup(key2))
                mapped.append(idx)
            out_facets.append((tag, tuple(mapped)))
        return tuple(out_verts), tuple(out_facets)

    verts_p, facets_p = build(pos_facets)
    verts_m, facets_m = build(neg_facets)
    face_verts = tuple(lookup(k) for k in cycle_keys)
    return verts_p, facets_p, verts_m, facets_m, face_verts, tuple(face_tags)
