"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--sweep-trials 2000]

The sweep row times the whole property sweep with each backend forced
through ``MOMENTBOUNDS_PURE_PYTHON`` in a subprocess.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from momentbounds.kernels import available_backends


def cases():
    rng = np.random.default_rng(0)
    x8, w8 = rng.uniform(-0.99, 0.99, 8), rng.dirichlet(np.ones(8))
    x4k, w4k = rng.uniform(-0.99, 0.99, 4096), rng.dirichlet(np.ones(4096))
    centers = np.linspace(-0.999, 0.999, 101)
    xs = np.linspace(-0.9999, 0.9999, 100_001)
    return {
        "dot2 n=8": lambda k: k.dot2(w8, x8),
        "dot2 n=4096": lambda k: k.dot2(w4k, x4k),
        "power_moments n=8 N=50": lambda k: k.power_moments(x8, w8, 50),
        "minorant_min_gap 101x100001": lambda k: k.minorant_min_gap(centers, xs),
        "golden_max_F m=-0.98": lambda k: k.golden_max_F(-0.98, 0.01, -0.984, -0.976, 1e-10),
    }


SWEEP = (
    "import time; from momentbounds.verify import SweepConfig, property_sweep;"
    "t = time.perf_counter(); property_sweep(SweepConfig(seed=1, trials={n}));"
    "print(time.perf_counter() - t)"
)


def time_sweep(trials, pure):
    env = dict(os.environ)
    if pure:
        env["MOMENTBOUNDS_PURE_PYTHON"] = "1"
    else:
        env.pop("MOMENTBOUNDS_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", SWEEP.format(n=trials)],
                         capture_output=True, text=True, env=env, check=True)
    return float(out.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--sweep-trials", type=int, default=2000)
    args = parser.parse_args()

    backends = available_backends()
    names = sorted(backends)
    print(f"{'kernel':32s}" + "".join(f"{n:>14s}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for label, fn in cases().items():
        times = []
        for name in names:
            k = backends[name]
            number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(k), number=1), 1e-7)))
            number = min(number, 10_000)
            best = min(timeit.repeat(lambda: fn(k), number=number, repeat=args.repeat)) / number
            times.append(best)
        row = f"{label:32s}" + "".join(f"{t * 1e6:12.1f}us" for t in times)
        if len(times) > 1:
            row += f"   {times[names.index('python')] / times[names.index('cython')]:6.1f}x"
        print(row)

    if args.sweep_trials:
        pure = time_sweep(args.sweep_trials, pure=True)
        line = f"{f'property_sweep {args.sweep_trials} trials':32s}"
        if "cython" in backends:
            fast = time_sweep(args.sweep_trials, pure=False)
            line += f"{fast:13.2f}s{pure:13.2f}s   {pure / fast:6.1f}x"
        else:
            line += f"{pure:13.2f}s"
        print(line)


if __name__ == "__main__":
    main()
