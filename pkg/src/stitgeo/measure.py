"""Translation-invariant hyperplane measures.

A measure is specified by its directional distribution ``Q`` on linear
hyperplane directions (the translational part is always Lebesgue).  The
hitting measure of a convex body ``c`` is

    lambda(c) = integral of width(c, n) over Q(dn),

evaluated in closed form (Cauchy / mean-width formulas for the isotropic
case, finite sums otherwise).  ``lambda_quadrature`` provides the
Gauss-Legendre evaluation used as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import ConvexPolytope, GeometryError

UNIT_TOL = 1e-12


class MeasureError(ValueError):
    pass


def canonical_normal(vec) -> tuple:
    """Normalize to unit length with the last nonzero coordinate positive."""
    nrm = math.sqrt(sum(x * x for x in vec))
    if nrm == 0.0:
        raise MeasureError("zero normal vector")
    n = tuple(x / nrm for x in vec)
    for x in reversed(n):
        if x != 0.0:
            if x < 0.0:
                n = tuple(-y for y in n)
            break
    return n


@dataclass(frozen=True)
class Hyperplane:
    """Affine hyperplane {x : <x, normal> = offset}."""

    normal: tuple
    offset: float
    id: int | None = None
    birth_time: float | None = None

    def __post_init__(self):
        nrm = sum(x * x for x in self.normal)
        if abs(nrm - 1.0) > 16 * UNIT_TOL:
            raise MeasureError("hyperplane normal must be a unit vector")

    @classmethod
    def make(cls, normal, offset, id=None, birth_time=None) -> "Hyperplane":
        n = canonical_normal(normal)
        if n != tuple(normal):
            # flipping the normal flips the offset sign
            s = sum(a * b for a, b in zip(n, normal))
            offset = offset if s > 0 else -offset
        return cls(n, float(offset), id, birth_time)

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "offset": self.offset}


@dataclass(frozen=True)
class DirectionalDistribution:
    """Directional part Q of the hyperplane measure.

    ``kind`` is one of ``isotropic`` (uniform on the upper half-sphere),
    ``axis`` (equal atoms on the coordinate directions) or ``discrete``
    (explicit atoms).  Atoms are stored for the two discrete kinds.
    """

    dim: int
    kind: str
    normals: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        if self.dim < 2:
            raise MeasureError("dimension must be >= 2")
        if self.kind not in ("isotropic", "axis", "discrete"):
            raise MeasureError(f"unknown directional distribution kind {self.kind!r}")
        if self.kind == "isotropic":
            if self.normals or self.weights:
                raise MeasureError("isotropic Q takes no atoms")
            return
        if len(self.normals) != len(self.weights) or not self.normals:
            raise MeasureError("atoms must pair normals with weights")
        if any(w <= 0 for w in self.weights):
            raise MeasureError("atom weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise MeasureError("atom weights must sum to 1")
        for n in self.normals:
            if len(n) != self.dim:
                raise MeasureError("normal dimension mismatch")
            if abs(sum(x * x for x in n) - 1.0) > 16 * UNIT_TOL:
                raise MeasureError("atom normals must be unit vectors")
            if n != canonical_normal(n):
                raise MeasureError("atom normals must lie in the upper half-sphere")
        rank = np.linalg.matrix_rank(np.asarray(self.normals, dtype=float))
        if rank < self.dim:
            raise MeasureError("degenerate directional distribution")

    # -- constructors ------------------------------------------------------

    @classmethod
    def isotropic(cls, dim: int) -> "DirectionalDistribution":
        return cls(dim, "isotropic")

    @classmethod
    def axis_aligned(cls, dim: int) -> "DirectionalDistribution":
        normals = tuple(
            tuple(1.0 if k == i else 0.0 for k in range(dim)) for i in range(dim)
        )
        return cls(dim, "axis", normals, (1.0 / dim,) * dim)

    @classmethod
    def discrete(cls, atoms) -> "DirectionalDistribution":
        normals = tuple(canonical_normal(n) for n, _w in atoms)
        weights = tuple(float(w) for _n, w in atoms)
        return cls(len(normals[0]), "discrete", normals, weights)

    # -- config parsing ----------------------------------------------------

    @classmethod
    def parse(cls, text: str, dim: int) -> "DirectionalDistribution":
        """Parse ``isotropic | axis | discrete:[(n1,w1),...]`` config syntax."""
        text = text.strip()
        if text == "isotropic":
            return cls.isotropic(dim)
        if text == "axis":
            return cls.axis_aligned(dim)
        if text.startswith("discrete:"):
            import ast

            atoms = ast.literal_eval(text[len("discrete:"):])
            return cls.discrete([(tuple(n), w) for n, w in atoms])
        raise MeasureError(f"cannot parse directional distribution {text!r}")

    def spec_string(self) -> str:
        if self.kind == "discrete":
            atoms = [(tuple(n), w) for n, w in zip(self.normals, self.weights)]
            return "discrete:" + repr(atoms)
        return {"isotropic": "isotropic", "axis": "axis"}[self.kind]


# ---------------------------------------------------------------------------
# hitting measures


def width(cell: ConvexPolytope, normal) -> float:
    """Width of the cell in a direction: max - min of <x, normal>."""
    lo, hi = cell.support(normal)
    return hi - lo


def lambda_of_body(q: DirectionalDistribution, cell: ConvexPolytope) -> float:
    """Hitting measure lambda(<c>) of a convex body.

    Discrete kinds use the exact weighted width sum; the isotropic kind uses
    the exact mean-width formulas (perimeter/pi in the plane, the
    edge/dihedral formula in space).
    """
    if cell.dim != q.dim:
        raise MeasureError("dimension mismatch between Q and body")
    if not cell.verts:
        raise GeometryError("empty body")
    if q.kind == "isotropic":
        return cell.mean_width()
    return math.fsum(
        w * width(cell, n) for n, w in zip(q.normals, q.weights)
    )


@lru_cache(maxsize=None)
def _gl_nodes(n: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def lambda_quadrature(
    q: DirectionalDistribution, cell: ConvexPolytope, order: int = 64
) -> float:
    """Gauss-Legendre evaluation of the hitting measure (cross-check path).

    For the isotropic kind integrates the width over the upper half-sphere
    (a 64-node rule on the half-circle in 2-d, a product rule over the
    cylindrical parametrization in 3-d); for discrete kinds this coincides
    with the exact sum.
    """
    if q.kind != "isotropic":
        return lambda_of_body(q, cell)
    if cell.dim == 2:
        thetas, wts = _gl_nodes(order, 0.0, math.pi)
        total = sum(
            wt * width(cell, (math.cos(t), math.sin(t)))
            for t, wt in zip(thetas, wts)
        )
        return total / math.pi
    # uniform measure on the upper half-sphere: z in (0,1), phi in (0, 2pi)
    zs, wz = _gl_nodes(max(32, order // 2), 0.0, 1.0)
    phis, wp = _gl_nodes(max(64, order), 0.0, 2.0 * math.pi)
    total = 0.0
    for z, a in zip(zs, wz):
        s = math.sqrt(max(0.0, 1.0 - z * z))
        for phi, b in zip(phis, wp):
            n = (s * math.cos(phi), s * math.sin(phi), z)
            total += a * b * width(cell, n)
    return total / (2.0 * math.pi)


def lambda_of_direction(q: DirectionalDistribution, u) -> float:
    """Hitting measure lambda(<u>) of the unit segment from the origin to u."""
    u = canonical_normal(u)
    if q.kind == "isotropic":
        return 2.0 / math.pi if q.dim == 2 else 0.5
    return math.fsum(
        w * abs(sum(a * b for a, b in zip(u, n)))
        for n, w in zip(q.normals, q.weights)
    )


# ---------------------------------------------------------------------------
# sampling


def _sample_direction_isotropic(dim: int, rng) -> tuple:
    if dim == 2:
        t = math.pi * rng.random()
        return (math.cos(t), math.sin(t))
    z = rng.random()
    phi = 2.0 * math.pi * rng.random()
    s = math.sqrt(max(0.0, 1.0 - z * z))
    return (s * math.cos(phi), s * math.sin(phi), z)


def sample_hitting_hyperplane(
    q: DirectionalDistribution, cell: ConvexPolytope, rng
) -> Hyperplane:
    """Draw a hyperplane from the conditional law given that it hits ``cell``.

    The direction density is proportional to ``width(cell, .)`` with respect
    to Q; given the direction, the offset is uniform on the support interval.
    Isotropic directions are drawn by rejection with the cell diameter as
    envelope constant.
    """
    verts = cell.verts
    if not verts:
        raise GeometryError("empty body")
    if q.kind == "isotropic":
        diam = cell.diameter
        while True:
            n = _sample_direction_isotropic(q.dim, rng)
            lo, hi = cell.support(n)
            if rng.random() * diam <= hi - lo:
                break
    else:
        supports = [cell.support(n) for n in q.normals]
        weights = [
            w * (hi - lo) for w, (lo, hi) in zip(q.weights, supports)
        ]
        total = math.fsum(weights)
        if total <= 0.0:
            raise MeasureError("cell has zero width in every supported direction")
        u = rng.random() * total
        acc = 0.0
        k = len(weights) - 1
        for i, w in enumerate(weights):
            acc += w
            if u <= acc:
                k = i
                break
        n = q.normals[k]
        lo, hi = supports[k]
    off = lo + rng.random() * (hi - lo)
    return Hyperplane(tuple(n), off)
