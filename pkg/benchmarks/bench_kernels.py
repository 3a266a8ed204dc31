"""Time the compiled search kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--json]
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from flattile import _pykernels
from flattile import kernels
from flattile.cmap import cube, tetrahedron


def workloads():
    tet, cb = tetrahedron(), cube()
    return [
        ("canonical_code tetrahedron", lambda k: k.canonical_code(tet.alpha, tet.sigma)),
        ("canonical_code cube", lambda k: k.canonical_code(cb.alpha, cb.sigma)),
        ("automorphism_count cube", lambda k: k.automorphism_count(cb.alpha, cb.sigma)),
        ("orderly_maps triangles, 18 darts", lambda k: k.orderly_maps(3, 18, None, 6)),
        ("orderly_maps squares, 20 darts", lambda k: k.orderly_maps(4, 20, None, 4)),
        ("naive_maps triangles, 6 faces", lambda k: k.naive_maps(3, 6)),
        ("naive_maps squares, 4 faces", lambda k: k.naive_maps(4, 4)),
        ("orderly_origamis, 6 squares", lambda k: k.orderly_origamis(6)),
    ]


def best_time(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)

    compiled = kernels.compiled_kernels
    if compiled is None:
        print("compiled extension not available; only timing the Python fallback", file=sys.stderr)
    rows = []
    for name, work in workloads():
        py_t = best_time(lambda: work(_pykernels), args.repeat)
        c_t = best_time(lambda: work(compiled), args.repeat) if compiled is not None else None
        rows.append({"workload": name, "python_s": py_t, "cython_s": c_t, "speedup": py_t / c_t if c_t else None})

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'workload':38s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for r in rows:
        c = f"{r['cython_s']:.4f}" if r["cython_s"] is not None else "n/a"
        s = f"{r['speedup']:.1f}x" if r["speedup"] else "n/a"
        print(f"{r['workload']:38s} {r['python_s']:11.4f} {c:>11s} {s:>8s}")
    speedups = [r["speedup"] for r in rows if r["speedup"]]
    if speedups:
        print(f"geometric mean speedup: {statistics.geometric_mean(speedups):.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
