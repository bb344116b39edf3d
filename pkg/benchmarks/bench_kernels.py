"""Compare the compiled time-integration kernels against the numpy fallback.

Runs both backends on identical inputs, checks that the outputs agree to
roundoff, and prints wall-clock timings plus the speedup.

Usage: python benchmarks/bench_kernels.py [--grid N] [--steps K] [--repeats R]
"""

import argparse
import time

import numpy as np

from grassint.kernels import _fallback

try:
    from grassint.kernels import _core
except ImportError:
    _core = None


def time_call(fn, *args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_burgers(grid, steps, repeats):
    x = (np.arange(grid) + 0.5) / grid
    u0 = np.sin(2 * np.pi * x)
    nu = 0.01
    dx = 1.0 / grid
    dt = 0.2 * dx * dx / (2 * nu)
    stride = max(1, steps // 100)
    args = (u0, nu, dx, dt, steps, stride, 1e6)

    ref, t_py = time_call(_fallback.integrate_burgers, *args, repeats=repeats)
    print(f"burgers  python   grid={grid} steps={steps}: {t_py * 1e3:9.2f} ms")
    if _core is None:
        print("burgers  compiled backend not built; skipping")
        return
    out, t_c = time_call(_core.integrate_burgers, *args, repeats=repeats)
    gap = np.abs(out - ref).max()
    print(f"burgers  compiled grid={grid} steps={steps}: {t_c * 1e3:9.2f} ms "
          f"(speedup {t_py / t_c:5.1f}x, max |diff| = {gap:.2e})")
    assert gap <= 1e-12, "backends disagree"


def bench_rom(modes, steps, repeats):
    rng = np.random.default_rng(0)
    c = 0.01 * rng.standard_normal(modes)
    lin = -np.eye(modes) + 0.1 * rng.standard_normal((modes, modes))
    quad = 0.05 * rng.standard_normal((modes, modes, modes))
    a0 = rng.standard_normal(modes)
    stride = max(1, steps // 100)
    args = (c, lin, quad, a0, 1e-4, steps, stride, 1e9)

    ref, t_py = time_call(_fallback.integrate_rom, *args, repeats=repeats)
    print(f"rom      python   M={modes} steps={steps}:   {t_py * 1e3:9.2f} ms")
    if _core is None:
        print("rom      compiled backend not built; skipping")
        return
    out, t_c = time_call(_core.integrate_rom, *args, repeats=repeats)
    gap = np.abs(out - ref).max()
    print(f"rom      compiled M={modes} steps={steps}:   {t_c * 1e3:9.2f} ms "
          f"(speedup {t_py / t_c:5.1f}x, max |diff| = {gap:.2e})")
    assert gap <= 1e-12, "backends disagree"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=512)
    parser.add_argument("--steps", type=int, default=5000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"backends: python{' + compiled' if _core is not None else ' only'}")
    bench_burgers(args.grid, args.steps, args.repeats)
    bench_rom(10, args.steps, args.repeats)


if __name__ == "__main__":
    main()
