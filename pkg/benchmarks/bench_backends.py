"""Time the numba and numpy simulation backends on identical workloads.

Usage::

    python benchmarks/bench_backends.py [--paths N] [--repeat R]

Both backends consume the same per-path random streams, so the printed
``max |diff|`` column should sit at rounding level.  The numba timing
excludes compilation (one warm-up call per workload).
"""

from __future__ import annotations

import argparse
import dataclasses
import time

import numpy as np

from hypk.geometry import PolarPoint, SpherePoint
from hypk.sim import SimConfig, first_exit_annulus, first_hit_sphere, first_hit_spherical_circle


def workloads(paths: int):
    base = SimConfig(step=1e-5, step_max=1e-2, num_paths=paths, seed=3)
    h3 = dataclasses.replace(base, dimension=3)
    return [
        ("first_hit_sphere H2", base, lambda c: first_hit_sphere(c, PolarPoint.h2(0.8, 0.0), 1.5).psi),
        ("first_hit_sphere H3", h3, lambda c: first_hit_sphere(c, PolarPoint(0.5, (0.0, 0.0)), 1.2).psi),
        ("first_exit_annulus H2", base,
         lambda c: np.array([first_exit_annulus(c, 1.0, 0.5, 2.0).estimate])),
        ("first_hit_spherical_circle", base,
         lambda c: first_hit_spherical_circle(c, SpherePoint(0.6), 1.2).dphi),
    ]


def timed(fn, cfg, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(cfg)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    print(f"{'workload':<28} {'numba s':>9} {'numpy s':>9} {'speedup':>8} {'max |diff|':>11}")
    for name, cfg, fn in workloads(args.paths):
        fast = dataclasses.replace(cfg, backend="numba")
        slow = dataclasses.replace(cfg, backend="numpy")
        fn(dataclasses.replace(fast, num_paths=8))  # compile
        t_fast, a = timed(fn, fast, args.repeat)
        t_slow, b = timed(fn, slow, max(1, args.repeat // 3))
        diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if len(a) else 0.0
        print(f"{name:<28} {t_fast:9.3f} {t_slow:9.3f} {t_slow / t_fast:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
