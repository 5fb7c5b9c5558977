"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeats N]

Prints median wall time per kernel and backend, and checks that both
backends return identical results on every workload.
"""

import argparse
import math
import statistics
import time

import numpy as np

from epsortho import _kernels, builtin_surface
from epsortho.region import OrthoParams, surface_region


def _time(fn, repeats):
    out = None
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def region_workloads():
    cos2 = builtin_surface("cos2_plus_cos2")
    for eps, d, dx in [(10, 2.0, 0.01), (15, 2.0, 0.01), (10, 2.0, 0.005)]:
        yield f"region (grow_rings) eps={eps} d={d} dx={dx}", cos2, OrthoParams.from_degrees(eps, d, dx)


def polygon_workloads(rng):
    for n_pts, n_vert in [(10_000, 16), (100_000, 32)]:
        ang = np.linspace(0, 2 * math.pi, n_vert, endpoint=False)
        rad = rng.uniform(0.5, 1.0, n_vert)
        poly = np.ascontiguousarray(np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]))
        xs = rng.uniform(-1, 1, n_pts)
        ys = rng.uniform(-1, 1, n_pts)
        yield f"polygon_mask {n_pts} pts x {n_vert} verts", xs, ys, poly


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels.compiled is None:
        print("compiled extension not available; only the Python backend can run")
    backends = [("python", _kernels.python)] + ([("compiled", _kernels.compiled)] if _kernels.compiled else [])

    print(f"{'workload':<40} {'backend':<9} {'median':>10} {'speedup':>8}")
    rows = []
    for label, surf, params in region_workloads():
        res = {}
        for name, k in backends:
            t, region = _time(lambda: surface_region(surf, -0.5, -0.5, params, kernels=k), args.repeats)
            res[name] = (t, region.members)
        rows.append((label, res))
    rng = np.random.default_rng(0)
    for label, xs, ys, poly in polygon_workloads(rng):
        res = {}
        for name, k in backends:
            t, mask = _time(lambda: np.asarray(k.polygon_mask(xs, ys, poly), bool), args.repeats)
            res[name] = (t, mask.tobytes())
        rows.append((label, res))

    for label, res in rows:
        base = res["python"][0]
        for name, (t, _) in res.items():
            print(f"{label:<40} {name:<9} {t * 1e3:>8.2f}ms {base / t:>7.1f}x")
        outputs = [out for _, out in res.values()]
        if any(o != outputs[0] for o in outputs[1:]):
            raise SystemExit(f"backends disagree on {label}")
    print("backends agree on every workload")


if __name__ == "__main__":
    main()
