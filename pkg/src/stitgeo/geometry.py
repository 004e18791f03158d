"""Convex polytope types for d in {2, 3}: clipping, facet provenance tags,
edge enumeration and serialization.

Facet tags are integers.  Non-negative tags name the splitting event that
created the facet; negative tags label window boundary facets (facet ``i`` of
the window carries tag ``-(i + 1)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels
from .kernels import KernelError

VOLUME_TOL = 1e-9  # relative tolerance used by tiling checks
SNAP_FACTOR = 1e-9  # vertex-on-plane snapping, relative to cell diameter


def is_window_tag(tag: int) -> bool:
    return tag < 0


def window_tag(facet_index: int) -> int:
    return -(facet_index + 1)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    """Section of a cell by a splitting hyperplane: a (d-1)-polytope.

    For d = 3, ``verts`` is the polygon cycle and ``tags[i]`` is the tag of
    the parent facet that the boundary edge ``verts[i] -> verts[i+1]`` lies
    on.  For d = 2, ``verts`` is the chord endpoint pair and ``tags[i]`` is
    the tag of the parent facet that endpoint ``i`` lies on.
    """

    dim: int  # dimension of the ambient space
    verts: tuple
    tags: tuple
    normal: tuple
    offset: float

    def measure(self) -> float:
        """Length (d=2) or area (d=3) of the face."""
        if self.dim == 2:
            (ax, ay), (bx, by) = self.verts
            return math.hypot(bx - ax, by - ay)
        return kernels.facet_area_3d(self.verts, tuple(range(len(self.verts))))


@dataclass
class ConvexPolytope:
    """Bounded convex cell with facet provenance tags.

    ``facets`` holds ``(tag, vertex_indices)`` pairs; in 2-d each facet is an
    edge ``(i, j)`` of the CCW vertex cycle, in 3-d a facet is a vertex cycle
    of length >= 3.
    """

    dim: int
    verts: tuple
    facets: tuple
    _volume: float | None = field(default=None, repr=False, compare=False)
    _diameter: float | None = field(default=None, repr=False, compare=False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_raw2d(cls, verts, tags) -> "ConvexPolytope":
        n = len(verts)
        facets = tuple((tags[i], (i, (i + 1) % n)) for i in range(n))
        return cls(2, tuple(verts), facets)

    @classmethod
    def from_raw3d(cls, verts, facets) -> "ConvexPolytope":
        return cls(3, tuple(verts), tuple((t, tuple(c)) for t, c in facets))

    @classmethod
    def box(cls, lo, hi) -> "ConvexPolytope":
        """Axis-aligned box with facets tagged as window boundary."""
        lo = tuple(float(v) for v in lo)
        hi = tuple(float(v) for v in hi)
        if len(lo) != len(hi) or len(lo) not in (2, 3):
            raise GeometryError("box must be 2- or 3-dimensional")
        if any(h <= l for l, h in zip(lo, hi)):
            raise GeometryError("box sides must be positive")
        if len(lo) == 2:
            (x0, y0), (x1, y1) = lo, hi
            verts = ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
            tags = (window_tag(0), window_tag(1), window_tag(2), window_tag(3))
            return cls.from_raw2d(verts, tags)
        (x0, y0, z0), (x1, y1, z1) = lo, hi
        verts = (
            (x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0),
            (x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1),
        )
        # outward-oriented cycles (CCW seen from outside)
        cycles = (
            (0, 3, 2, 1),  # bottom, z = z0
            (4, 5, 6, 7),  # top, z = z1
            (0, 1, 5, 4),  # y = y0
            (2, 3, 7, 6),  # y = y1
            (0, 4, 7, 3),  # x = x0
            (1, 2, 6, 5),  # x = x1
        )
        facets = tuple((window_tag(i), cyc) for i, cyc in enumerate(cycles))
        return cls(3, verts, facets)

    # -- raw views ---------------------------------------------------------

    def raw2d(self):
        """(verts, edge_tags) in kernel form; facets must be the CCW cycle."""
        tags = [0] * len(self.verts)
        for tag, (i, _j) in self.facets:
            tags[i] = tag
        return self.verts, tuple(tags)

    def raw3d(self):
        return self.verts, self.facets

    # -- metrics -----------------------------------------------------------

    @property
    def volume(self) -> float:
        if self._volume is None:
            if not self.verts:
                raise GeometryError("empty body")
            if self.dim == 2:
                self._volume = kernels.area_2d(self.verts)
            else:
                self._volume = kernels.volume_3d(self.verts, self.facets)
        return self._volume

    @property
    def diameter(self) -> float:
        if self._diameter is None:
            if not self.verts:
                raise GeometryError("empty body")
            if self.dim == 2:
                self._diameter = kernels.diameter_2d(self.verts)
            else:
                self._diameter = kernels.diameter_3d(self.verts)
        return self._diameter

    def support(self, normal) -> tuple:
        """Support interval (min, max) of <x, normal> over the cell."""
        if not self.verts:
            raise GeometryError("empty body")
        if self.dim == 2:
            return kernels.support_2d(self.verts, normal[0], normal[1])
        return kernels.support_3d(self.verts, normal[0], normal[1], normal[2])

    def perimeter(self) -> float:
        if self.dim != 2:
            raise GeometryError("perimeter is a 2-d quantity")
        return kernels.perimeter_2d(self.verts)

    def mean_width(self) -> float:
        if self.dim == 2:
            return kernels.perimeter_2d(self.verts) / math.pi
        return kernels.mean_width_3d(self.verts, self.facets)

    def centroid(self) -> tuple:
        n = float(len(self.verts))
        return tuple(sum(v[k] for v in self.verts) / n for k in range(self.dim))

    def contains(self, point, tol: float = 1e-9) -> bool:
        """Point containment via facet half-space tests (tol is absolute)."""
        for k in range(len(self.facets)):
            normal, offset = self.facet_plane(k)
            s = sum(point[i] * normal[i] for i in range(self.dim))
            if s > offset + tol:
                return False
        return True

    def facet_plane(self, k: int) -> tuple:
        """Outward (normal, offset) of facet k, so the cell is <x,n> <= off."""
        tag, idx = self.facets[k]
        if self.dim == 2:
            (ax, ay) = self.verts[idx[0]]
            (bx, by) = self.verts[idx[1]]
            nx, ny = by - ay, ax - bx  # outward for a CCW cycle
            nrm = math.hypot(nx, ny)
            nx, ny = nx / nrm, ny / nrm
            return (nx, ny), nx * ax + ny * ay
        o = self.verts[idx[0]]
        sx = sy = sz = 0.0
        for k2 in range(1, len(idx) - 1):
            a = self.verts[idx[k2]]
            b = self.verts[idx[k2 + 1]]
            sx += (a[1] - o[1]) * (b[2] - o[2]) - (a[2] - o[2]) * (b[1] - o[1])
            sy += (a[2] - o[2]) * (b[0] - o[0]) - (a[0] - o[0]) * (b[2] - o[2])
            sz += (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        nrm = math.sqrt(sx * sx + sy * sy + sz * sz)
        n = (sx / nrm, sy / nrm, sz / nrm)
        c = self.centroid()
        off = n[0] * o[0] + n[1] * o[1] + n[2] * o[2]
        if n[0] * c[0] + n[1] * c[1] + n[2] * c[2] > off:
            n = (-n[0], -n[1], -n[2])
            off = -off
        return n, off

    def scaled(self, r: float) -> "ConvexPolytope":
        verts = tuple(tuple(r * x for x in v) for v in self.verts)
        return ConvexPolytope(self.dim, verts, self.facets)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.verts],
            "facets": [
                {"tag": tag, "vertex_indices": list(idx)} for tag, idx in self.facets
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConvexPolytope":
        verts = tuple(tuple(float(x) for x in v) for v in obj["vertices"])
        facets = tuple(
            (int(f["tag"]), tuple(int(i) for i in f["vertex_indices"]))
            for f in obj["facets"]
        )
        dim = len(verts[0])
        return cls(dim, verts, facets)


@dataclass(frozen=True)
class Window:
    """Axis-aligned simulation domain."""

    lo: tuple
    hi: tuple

    @classmethod
    def box(cls, sides, origin=None) -> "Window":
        sides = tuple(float(s) for s in sides)
        lo = tuple(float(v) for v in origin) if origin is not None else (0.0,) * len(sides)
        return cls(lo, tuple(l + s for l, s in zip(lo, sides)))

    @classmethod
    def unit(cls, dim: int) -> "Window":
        return cls.box((1.0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> tuple:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    @property
    def volume(self) -> float:
        return math.prod(self.sides)

    def polytope(self) -> ConvexPolytope:
        return ConvexPolytope.box(self.lo, self.hi)

    def inner_box(self, margin: float) -> tuple:
        """(lo, hi) of the window shrunk by ``margin`` of each side length."""
        if not 0.0 <= margin < 0.5:
            raise GeometryError("margin must lie in [0, 1/2)")
        lo = tuple(l + margin * s for l, s in zip(self.lo, self.sides))
        hi = tuple(h - margin * s for h, s in zip(self.hi, self.sides))
        return lo, hi

    def contains(self, point, tol: float = 0.0) -> bool:
        return all(l - tol <= x <= h + tol for x, l, h in zip(point, self.lo, self.hi))

    def on_boundary(self, point, tol: float) -> bool:
        if not self.contains(point, tol):
            return True
        return any(
            x - l <= tol or h - x <= tol for x, l, h in zip(point, self.lo, self.hi)
        )

    def scaled(self, r: float) -> "Window":
        return Window(tuple(r * v for v in self.lo), tuple(r * v for v in self.hi))

    def to_json(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_json(cls, obj) -> "Window":
        return cls(tuple(float(v) for v in obj["lo"]), tuple(float(v) for v in obj["hi"]))


# ---------------------------------------------------------------------------
# operations


def clip(cell: ConvexPolytope, hyperplane, tag: int | None = None):
    """Split ``cell`` by ``hyperplane`` into (plus, minus, face).

    ``plus`` is the part with ``<x, normal> >= offset``.  The new shared
    facet carries the splitting event tag in both parts and ``face`` is the
    section polytope with boundary tags inherited from the parent facets.
    Raises :class:`GeometryError` when the hyperplane misses the interior.
    """
    if tag is None:
        tag = hyperplane.id
    if tag is None or tag < 0:
        raise GeometryError("clip needs a non-negative splitting event tag")
    n = hyperplane.normal
    off = hyperplane.offset
    eps = SNAP_FACTOR * cell.diameter
    try:
        if cell.dim == 2:
            verts, tags = cell.raw2d()
            vp, tp, vm, tm, chord, end_tags = kernels.clip_2d(
                verts, tags, n[0], n[1], off, tag, eps
            )
            plus = ConvexPolytope.from_raw2d(vp, tp)
            minus = ConvexPolytope.from_raw2d(vm, tm)
            face = Face(2, chord, end_tags, tuple(n), off)
        elif cell.dim == 3:
            vp, fp, vm, fm, fverts, ftags = kernels.clip_3d(
                cell.verts, cell.facets, n[0], n[1], n[2], off, tag, eps
            )
            plus = ConvexPolytope.from_raw3d(vp, fp)
            minus = ConvexPolytope.from_raw3d(vm, fm)
            face = Face(3, fverts, ftags, tuple(n), off)
        else:
            raise GeometryError(f"unsupported dimension {cell.dim}")
    except KernelError as exc:
        raise GeometryError(str(exc)) from None
    return plus, minus, face


def edges_with_tags(cell: ConvexPolytope):
    """Edges of the cell with the tags of their incident facets.

    Returns a list of ``((p, q), tags)`` where ``tags`` has one entry in 2-d
    (each facet is itself an edge) and two in 3-d.
    """
    if cell.dim == 2:
        return [
            ((cell.verts[i], cell.verts[j]), (tag,)) for tag, (i, j) in cell.facets
        ]
    if cell.dim != 3:
        raise GeometryError("unsupported dimension for edge extraction")
    seen = {}
    for tag, cyc in cell.facets:
        m = len(cyc)
        for k in range(m):
            i, j = cyc[k], cyc[(k + 1) % m]
            key = (i, j) if i < j else (j, i)
            if key in seen:
                seen[key] = (seen[key][0], tag)
            else:
                seen[key] = (tag, None)
    out = []
    for (i, j), tags in seen.items():
        if tags[1] is None:
            raise GeometryError("open polytope surface: edge with one facet")
        out.append(((cell.verts[i], cell.verts[j]), tags))
    return out


def volume(cell: ConvexPolytope) -> float:
    return cell.volume


def diameter(cell: ConvexPolytope) -> float:
    return cell.diameter
