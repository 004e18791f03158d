"""Stochastic tessellation processes.

``simulate_stit`` runs the continuous-time cell-division construction: every
live cell carries an exponential lifetime with rate equal to its hitting
measure, and on death is split by a hyperplane drawn from the conditional
hitting law.  ``simulate_pht`` builds the Poisson hyperplane tessellation
with intensity measure ``t * Lambda``.  ``iterate`` nests independent
tessellations inside the cells of an outer one; ``rescale`` dilates space.

All randomness flows from a seed (or a ``numpy.random.SeedSequence``);
replicate- and cell-level streams are spawned deterministically, so results
never depend on scheduling or worker count.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .geometry import SNAP_FACTOR, ConvexPolytope, Face, GeometryError, Window, clip
from .kernels import KernelError
from .measure import DirectionalDistribution, Hyperplane, MeasureError, lambda_of_body

SLIVER_FACTOR = 1e-12  # children smaller than this fraction of the window volume
                       # are kept but no longer scheduled for splitting


@dataclass(frozen=True)
class SplitEvent:
    """One cell division: the splitting hyperplane piece and its birth time."""

    id: int
    birth_time: float
    parent_cell_id: int
    face: Face

    @property
    def hyperplane(self) -> Hyperplane:
        return Hyperplane(self.face.normal, self.face.offset, self.id, self.birth_time)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "birth_time": self.birth_time,
            "parent_cell_id": self.parent_cell_id,
            "hyperplane": {"normal": list(self.face.normal), "offset": self.face.offset},
            "face_vertices": [list(v) for v in self.face.verts],
            "face_tags": list(self.face.tags),
        }

    @classmethod
    def from_json(cls, obj: dict, dim: int) -> "SplitEvent":
        face = Face(
            dim,
            tuple(tuple(float(x) for x in v) for v in obj["face_vertices"]),
            tuple(int(t) for t in obj["face_tags"]),
            tuple(float(x) for x in obj["hyperplane"]["normal"]),
            float(obj["hyperplane"]["offset"]),
        )
        return cls(int(obj["id"]), float(obj["birth_time"]), int(obj["parent_cell_id"]), face)


@dataclass
class Tessellation:
    """Result of a tessellation process on a window."""

    dim: int
    window: Window
    q: DirectionalDistribution
    t: float
    kind: str  # "stit" | "pht" | "iteration"
    events: list
    cells: list
    seed: object = None
    frozen_cells: tuple = ()

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def total_cell_volume(self) -> float:
        return math.fsum(c.volume for c in self.cells)

    def total_face_measure(self) -> float:
        """Total length (d=2) / area (d=3) of the splitting faces."""
        return math.fsum(e.face.measure() for e in self.events)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "window": self.window.to_json(),
            "q": self.q.spec_string(),
            "t": self.t,
            "kind": self.kind,
            "seed": self.seed if isinstance(self.seed, (int, type(None))) else repr(self.seed),
            "events": [e.to_json() for e in self.events],
            "cells": [c.to_json() for c in self.cells],
            "frozen_cells": list(self.frozen_cells),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Tessellation":
        dim = int(obj["dim"])
        return cls(
            dim=dim,
            window=Window.from_json(obj["window"]),
            q=DirectionalDistribution.parse(obj["q"], dim),
            t=float(obj["t"]),
            kind=obj["kind"],
            events=[SplitEvent.from_json(e, dim) for e in obj["events"]],
            cells=[ConvexPolytope.from_json(c) for c in obj["cells"]],
            seed=obj.get("seed"),
            frozen_cells=tuple(obj.get("frozen_cells", ())),
        )


# ---------------------------------------------------------------------------
# random streams


def seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def subseed(seed, *key) -> np.random.SeedSequence:
    """Deterministic child seed for (seed, key...)."""
    ss = seed_sequence(seed)
    if key:
        ss = np.random.SeedSequence(ss.entropy, spawn_key=ss.spawn_key + tuple(key))
    return ss


def stream(seed, *key) -> np.random.Generator:
    return np.random.default_rng(subseed(seed, *key))


# ---------------------------------------------------------------------------
# core cell-division loop
#
# The loop works on the kernels' raw cell tuples; ConvexPolytope objects are
# only materialized for the final cells.


class _RawOps:
    """Kernel dispatch bound to a directional distribution."""

    def __init__(self, dim: int, q: DirectionalDistribution):
        self.dim = dim
        self.q = q
        if q.kind != "isotropic":
            self.nxs = tuple(n[0] for n in q.normals)
            self.nys = tuple(n[1] for n in q.normals)
            self.nzs = tuple(n[2] for n in q.normals) if dim == 3 else ()

    def rate(self, verts, facets) -> float:
        q = self.q
        if self.dim == 2:
            if q.kind == "isotropic":
                return kernels.perimeter_2d(verts) / math.pi
            return kernels.discrete_rate_2d(verts, self.nxs, self.nys, q.weights)
        if q.kind == "isotropic":
            return kernels.mean_width_3d(verts, facets)
        return kernels.discrete_rate_3d(verts, self.nxs, self.nys, self.nzs, q.weights)

    def volume(self, verts, facets) -> float:
        if self.dim == 2:
            return kernels.area_2d(verts)
        return kernels.volume_3d(verts, facets)

    def support(self, verts, n):
        if self.dim == 2:
            return kernels.support_2d(verts, n[0], n[1])
        return kernels.support_3d(verts, n[0], n[1], n[2])

    def diameter(self, verts) -> float:
        if self.dim == 2:
            return kernels.diameter_2d(verts)
        return kernels.diameter_3d(verts)

    def sample_split(self, verts, rng):
        """Mirror of measure.sample_hitting_hyperplane on raw vertices."""
        q = self.q
        if q.kind == "isotropic":
            diam = self.diameter(verts)
            while True:
                if q.dim == 2:
                    a = math.pi * rng.random()
                    n = (math.cos(a), math.sin(a))
                else:
                    z = rng.random()
                    phi = 2.0 * math.pi * rng.random()
                    s = math.sqrt(max(0.0, 1.0 - z * z))
                    n = (s * math.cos(phi), s * math.sin(phi), z)
                lo, hi = self.support(verts, n)
                if rng.random() * diam <= hi - lo:
                    break
        else:
            supports = [self.support(verts, n) for n in q.normals]
            weights = [w * (hi - lo) for w, (lo, hi) in zip(q.weights, supports)]
            total = math.fsum(weights)
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
        return n, off

    def clip(self, verts, extra, n, off, tag):
        """Returns (plus, minus, face_verts, face_tags) on raw cells."""
        eps = SNAP_FACTOR * self.diameter(verts)
        if self.dim == 2:
            vp, tp, vm, tm, chord, end_tags = kernels.clip_2d(
                verts, extra, n[0], n[1], off, tag, eps
            )
            return (vp, tp), (vm, tm), chord, end_tags
        vp, fp, vm, fm, fverts, ftags = kernels.clip_3d(
            verts, extra, n[0], n[1], n[2], off, tag, eps
        )
        return (vp, fp), (vm, fm), fverts, ftags

    def to_polytope(self, raw) -> ConvexPolytope:
        if self.dim == 2:
            return ConvexPolytope.from_raw2d(*raw)
        return ConvexPolytope.from_raw3d(*raw)

    def from_polytope(self, cell: ConvexPolytope):
        return cell.raw2d() if self.dim == 2 else cell.raw3d()


def _run_division(initial_cells, ops: _RawOps, t_end, rng, id_start, sliver_volume):
    """Event-driven recursion from raw (cell, birth_time) pairs up to ``t_end``.

    Returns (events, final_raw_cells, frozen_indices, next_event_id).  Cells
    whose volume falls below ``sliver_volume`` are frozen: they stay in the
    output but are not scheduled, which guards the scheduler against
    degenerate numerics without resampling (and hence without biasing the
    law).
    """
    heap = []
    seq = 0
    finals = []
    frozen = []
    next_id = id_start

    def schedule(raw, birth):
        nonlocal seq
        if ops.volume(*raw) < sliver_volume:
            finals.append(raw)
            frozen.append(len(finals) - 1)
            return
        rate = ops.rate(*raw)
        life = rng.standard_exponential() / rate
        heapq.heappush(heap, (birth + life, seq, raw))
        seq += 1

    events = []
    dim = ops.dim
    for raw, birth in initial_cells:
        schedule(raw, birth)
    while heap:
        death, cell_id, raw = heapq.heappop(heap)
        if death >= t_end:
            finals.append(raw)
            continue
        n, off = ops.sample_split(raw[0], rng)
        try:
            plus, minus, face_verts, face_tags = ops.clip(raw[0], raw[1], n, off, next_id)
        except KernelError as exc:  # offset landed outside by roundoff
            raise GeometryError(str(exc)) from None
        events.append(
            SplitEvent(next_id, death, cell_id, Face(dim, face_verts, face_tags, n, off))
        )
        next_id += 1
        schedule(plus, death)
        schedule(minus, death)
    return events, finals, tuple(frozen), next_id


def simulate_stit(window: Window, q: DirectionalDistribution, t: float, seed) -> Tessellation:
    """STIT tessellation of the window up to time horizon ``t``.

    Deterministic given (seed, window, q, t): same seed, same event log.
    """
    if t <= 0.0:
        raise ValueError("time horizon must be positive")
    if window.dim != q.dim:
        raise MeasureError("dimension mismatch between window and Q")
    rng = np.random.default_rng(seed_sequence(seed))
    ops = _RawOps(window.dim, q)
    root = ops.from_polytope(window.polytope())
    events, finals, frozen, _ = _run_division(
        [(root, 0.0)], ops, t, rng, 0, SLIVER_FACTOR * window.volume
    )
    return Tessellation(
        dim=window.dim, window=window, q=q, t=t, kind="stit",
        events=events, cells=[ops.to_polytope(raw) for raw in finals],
        seed=seed if isinstance(seed, int) else None, frozen_cells=frozen,
    )


def simulate_pht(window: Window, q: DirectionalDistribution, t: float, seed) -> Tessellation:
    """Poisson hyperplane tessellation with intensity measure ``t * Lambda``.

    Draws ``N ~ Poisson(t * lambda(<W>))`` hyperplanes i.i.d. from the
    conditional hitting law of the window and inserts them simultaneously;
    every hyperplane splits every cell it meets.  All birth times are
    recorded as ``t`` (a PHT has no temporal hierarchy).
    """
    if t < 0.0:
        raise ValueError("intensity multiplier must be nonnegative")
    rng = np.random.default_rng(seed_sequence(seed))
    root = window.polytope()
    cells = [root]
    events = []
    n = int(rng.poisson(t * lambda_of_body(q, root))) if t > 0.0 else 0
    ops = _RawOps(window.dim, q)
    for i in range(n):
        normal, off = ops.sample_split(root.verts, rng)
        h = Hyperplane(normal, off)
        _, _, wface = clip(root, h, tag=i)
        events.append(SplitEvent(i, t, -1, wface))
        new_cells = []
        for cell in cells:
            lo, hi = cell.support(h.normal)
            eps = 1e-12 * cell.diameter
            if lo + eps < h.offset < hi - eps:
                plus, minus, _ = clip(cell, h, tag=i)
                new_cells.append(plus)
                new_cells.append(minus)
            else:
                new_cells.append(cell)
        cells = new_cells
    return Tessellation(
        dim=window.dim, window=window, q=q, t=t, kind="pht",
        events=events, cells=cells,
        seed=seed if isinstance(seed, int) else None,
    )


def iterate(window: Window, q: DirectionalDistribution, s: float, t: float, seed) -> Tessellation:
    """Nest independent tessellations of horizon ``t`` inside the cells of a
    horizon-``s`` tessellation (the iteration operation).

    The outer construction runs on stream (seed, 0); the copy nested in outer
    cell ``i`` runs on stream (seed, 1 + i).  Outer events keep their times
    in (0, s); inner events are shifted into (s, s + t).
    """
    if s <= 0.0 or t <= 0.0:
        raise ValueError("both time horizons must be positive")
    outer = simulate_stit(window, q, s, subseed(seed, 0))
    events = list(outer.events)
    next_id = len(events)
    ops = _RawOps(window.dim, q)
    cells = []
    frozen = []
    sliver = SLIVER_FACTOR * window.volume
    for i, cell in enumerate(outer.cells):
        rng = stream(seed, 1 + i)
        # run the nested copy in local time (0, t); memorylessness makes this
        # equivalent to continuing the construction from time s
        inner_events, inner_finals, inner_frozen, next_id = _run_division(
            [(ops.from_polytope(cell), 0.0)], ops, t, rng, next_id, sliver
        )
        for e in inner_events:
            events.append(SplitEvent(e.id, s + e.birth_time, e.parent_cell_id, e.face))
        frozen.extend(len(cells) + k for k in inner_frozen)
        cells.extend(ops.to_polytope(raw) for raw in inner_finals)
    events.sort(key=lambda e: e.birth_time)
    return Tessellation(
        dim=window.dim, window=window, q=q, t=s + t, kind="iteration",
        events=events, cells=cells,
        seed=seed if isinstance(seed, int) else None, frozen_cells=tuple(frozen),
    )


def rescale(tess: Tessellation, r: float) -> Tessellation:
    """Dilate all coordinates by ``r``; birth times are unchanged."""
    if r <= 0.0:
        raise ValueError("scaling factor must be positive")

    def scale_face(face: Face) -> Face:
        verts = tuple(tuple(r * x for x in v) for v in face.verts)
        return Face(face.dim, verts, face.tags, face.normal, r * face.offset)

    events = [
        SplitEvent(e.id, e.birth_time, e.parent_cell_id, scale_face(e.face))
        for e in tess.events
    ]
    cells = [c.scaled(r) for c in tess.cells]
    return Tessellation(
        dim=tess.dim, window=tess.window.scaled(r), q=tess.q, t=tess.t,
        kind=tess.kind, events=events, cells=cells, seed=tess.seed,
        frozen_cells=tess.frozen_cells,
    )


def check_tessellation(tess: Tessellation, rel_tol: float = 1e-8) -> None:
    """Structural invariants: cells tile the window, the event log is sorted,
    and every splitting tag occurs exactly once per side of its event.

    Raises AssertionError on violation (used by tests and verify).
    """
    vol = tess.total_cell_volume()
    assert abs(vol - tess.window.volume) <= rel_tol * tess.window.volume, (
        f"cells do not tile the window: {vol} vs {tess.window.volume}"
    )
    times = [e.birth_time for e in tess.events]
    assert times == sorted(times), "event log not sorted by birth time"
    if tess.kind == "stit":
        assert len(set(times)) == len(times), "birth times not distinct"
        seen = set()
        for cell in tess.cells:
            tags = [tag for tag, _idx in cell.facets if tag >= 0]
            assert len(tags) == len(set(tags)), "duplicate split tag within one cell"
            seen.update(tags)
        event_ids = {e.id for e in tess.events}
        assert seen == event_ids, "facet tags do not match the event log"
