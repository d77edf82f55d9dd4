#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-Python fallback.

Times three representative workloads through the public API with each
backend active, checks that the results agree, and prints a table:

  * height evaluations (adaptive panels on closed-form integrand families)
  * generating-curve sampling (incremental profile quadrature)
  * mesh construction + intrinsic distances (edge lengths plus Dijkstra)

Run from the repository root:  python benchmarks/bench_backends.py
"""

import argparse
import time

from hrzero import _backend
from hrzero.heights import height
from hrzero.profile import default_grid, sample_profile, waist_radius
from hrzero.stc import build_fermi_mesh, strong_total_curvature


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def workload_heights():
    total = 0.0
    for a in (0.3, 0.7, 1.0, 1.8, 3.0, 6.0):
        total += height(3, 1, a=a).h + height(5, 3, a=a).h
    return total


def workload_profile():
    grid = default_grid(3, 1, 2.0, 8.0, 512)
    curve = sample_profile(3, 1, 2.0, grid)
    return float(curve.lam[-1])


def workload_mesh():
    a = waist_radius(3, 1, 2.0)
    mesh = build_fermi_mesh(3, 1, 2.0, (a + 1e-6, a + 5.0), 2.0, (192, 48))
    return strong_total_curvature(mesh, 4.0).value


WORKLOADS = [
    ("height evaluations (12 members)", workload_heights, 5),
    ("profile sampling (512 points)", workload_profile, 5),
    ("mesh + distances (192x48)", workload_mesh, 3),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=None,
                        help="override the per-workload repeat count")
    args = parser.parse_args()

    backends = sorted(_backend.available())
    if len(backends) < 2:
        print("compiled backend not built; timing the pure backend only")

    print(f"{'workload':36s} " + " ".join(f"{b:>12s}" for b in backends)
          + ("      speedup" if len(backends) > 1 else ""))
    for label, fn, repeat in WORKLOADS:
        repeat = args.repeat or repeat
        times = {}
        values = {}
        for name in backends:
            with _backend.use(name):
                times[name], values[name] = timed(fn, repeat)
        row = f"{label:36s} " + " ".join(
            f"{times[b] * 1e3:10.2f} ms" for b in backends
        )
        if len(backends) > 1:
            ratio = times["python"] / times["cython"]
            row += f"    {ratio:8.1f}x"
            rel = abs(values["python"] - values["cython"]) / max(
                abs(values["cython"]), 1e-300
            )
            assert rel < 1e-12, f"backend results disagree on {label}: {rel:.2e}"
        print(row)
    if len(backends) > 1:
        print("results agree between backends to 1e-12 relative")


if __name__ == "__main__":
    main()
