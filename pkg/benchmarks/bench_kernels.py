#!/usr/bin/env python3
"""Benchmark the compiled geometry kernel against the pure-Python fallback.

Runs identical seeded workloads through both backends (in subprocesses, since
the backend is chosen at import time) and reports wall-clock times plus the
speedup.  The two backends are bit-identical by construction, so the timings
are directly comparable.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r'''
import json, time
import stitgeo as sg
from stitgeo.extract import maximal_segments

quick = {quick}
scale = 0.3 if quick else 1.0

results = {{}}

# d=2 STIT, isotropic: rejection sampling + polygon clipping
w = sg.Window.unit(2)
q = sg.DirectionalDistribution.isotropic(2)
reps = max(3, int(60 * scale))
t0 = time.perf_counter()
ev = 0
for r in range(reps):
    T = sg.simulate_stit(w, q, 25.0, seed=sg.engine.subseed(1, r))
    ev += len(T.events)
results["stit_d2_iso_t25"] = (time.perf_counter() - t0, ev)

# d=2 STIT, axis-aligned: the Monte Carlo acceptance workload
q = sg.DirectionalDistribution.axis_aligned(2)
reps = max(5, int(400 * scale))
t0 = time.perf_counter()
ev = 0
for r in range(reps):
    T = sg.simulate_stit(w, q, 20.0, seed=sg.engine.subseed(2, r))
    ev += len(T.events)
results["stit_d2_axis_t20"] = (time.perf_counter() - t0, ev)

# d=3 STIT + segment extraction
w3 = sg.Window.unit(3)
q3 = sg.DirectionalDistribution.axis_aligned(3)
reps = max(3, int(40 * scale))
t0 = time.perf_counter()
ev = 0
for r in range(reps):
    T = sg.simulate_stit(w3, q3, 15.0, seed=sg.engine.subseed(3, r))
    segs = maximal_segments(T)
    ev += len(T.events)
results["stit_d3_axis_t15_extract"] = (time.perf_counter() - t0, ev)

# raw 3-d clip microbenchmark
from stitgeo import kernels
cube = sg.ConvexPolytope.box((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
import math
n = (1/math.sqrt(3),)*3
reps = max(2000, int(20000 * scale))
t0 = time.perf_counter()
for i in range(reps):
    kernels.clip_3d(cube.verts, cube.facets, n[0], n[1], n[2], 0.5 + 1e-7*i, 7, 1e-12)
results["clip3d_cube"] = (time.perf_counter() - t0, reps)

print(json.dumps({{"backend": sg.KERNEL_BACKEND, "results": results}}))
'''


def run_backend(backend: str, quick: bool) -> dict:
    env = dict(os.environ, STITGEO_KERNEL=backend)
    code = WORKLOAD.format(quick=quick)
    proc = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    if proc.returncode != 0:
        raise RuntimeError(f"{backend} workload failed:\n{proc.stderr}")
    return json.loads(proc.stdout)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    out = {}
    for backend in ("python", "compiled"):
        try:
            out[backend] = run_backend(backend, args.quick)
        except RuntimeError as exc:
            if backend == "compiled":
                print("compiled kernel unavailable; build with `pip install -e .`")
                print(exc)
                return 1
            raise

    py = out["python"]["results"]
    cy = out["compiled"]["results"]
    name_w = max(len(k) for k in py)
    print(f"{'workload':<{name_w}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}  units")
    for key in py:
        tp, n = py[key]
        tc, _ = cy[key]
        print(
            f"{key:<{name_w}}  {tp:>9.3f}s  {tc:>9.3f}s  {tp / tc:>7.1f}x  {n}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
