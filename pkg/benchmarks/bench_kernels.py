"""Time the compiled integration kernel against the pure-Python reference.

Both kernels are imported directly, so one process can exercise both
regardless of which one the package dispatched at import.  Before timing,
every case is run through both kernels and the outputs are required to be
bit-identical; a benchmark comparing two functions that disagree would be
meaningless.

Usage: python3 benchmarks/bench_kernels.py [--cases N] [--repeats N]
"""

from __future__ import annotations

import argparse
import time
from math import cos, pi, sin

import numpy as np

from pushtrack.physics import _fallback

try:
    from pushtrack.physics import _core
except ImportError:
    _core = None

Z_SUBSTEPS = 80          # one 0.16 s filter update at dt_sub = 0.002
HALF = (0.06, 0.045)
C2 = 0.04042165653122405 ** 2


def make_cases(n_cases: int, seed: int):
    """Random contact-rich pushes: slider near the origin, pusher driving
    inward from a ring, half the cases with a wall in the way."""
    rng = np.random.default_rng(seed)
    wall = np.array([[0.13, 0.0, 0.002, 0.08, 1.0, 0.0, 0.0]])
    no_wall = np.empty((0, 7))
    cases = []
    for i in range(n_cases):
        x, y = rng.uniform(-0.02, 0.02, 2)
        yaw = rng.uniform(-pi, pi)
        angle = rng.uniform(-pi, pi)
        px0, py0 = 0.11 * cos(angle), 0.11 * sin(angle)
        speed = rng.uniform(0.4, 0.8)
        vx, vy = -speed * cos(angle), -speed * sin(angle)
        segs = np.array([[px0, py0, vx, vy, 0.16, Z_SUBSTEPS]])
        mu = rng.uniform(0.05, 1.0)
        obstacles = wall if i % 2 == 0 else no_wall
        cases.append((x, y, yaw, segs, mu, obstacles))
    return cases


def run_all(kernel, cases):
    out = []
    for x, y, yaw, segs, mu, obstacles in cases:
        out.append(
            kernel.integrate_push(
                x, y, yaw, segs, mu, HALF[0], HALF[1], 0.01, C2, obstacles
            )
        )
    return out


def best_time(kernel, cases, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_all(kernel, cases)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cases = make_cases(args.cases, args.seed)

    if _core is None:
        print("compiled kernel not built; timing the pure kernel only")
        t = best_time(_fallback, cases, args.repeats)
        print(f"pure:     {t * 1e6 / args.cases:9.1f} us per 0.16 s rollout")
        return 0

    mismatches = sum(
        a != b for a, b in zip(run_all(_core, cases), run_all(_fallback, cases))
    )
    if mismatches:
        print(f"kernels disagree on {mismatches}/{args.cases} cases; not timing")
        return 1
    print(f"agreement: {args.cases}/{args.cases} cases bit-identical")

    t_core = best_time(_core, cases, args.repeats)
    t_pure = best_time(_fallback, cases, args.repeats)
    per = 1e6 / args.cases
    print(f"compiled: {t_core * per:9.1f} us per 0.16 s rollout")
    print(f"pure:     {t_pure * per:9.1f} us per 0.16 s rollout")
    print(f"speedup:  {t_pure / t_core:9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
