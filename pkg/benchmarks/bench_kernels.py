#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot paths (Hamiltonian fill, 3x3 eigensolve, batched
transition sweep) plus one end-to-end angle fit per backend.

    python benchmarks/bench_kernels.py [--fields 20000]
"""

import argparse
import math
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

import numpy as np

from bvodmr import _kernels_py

try:
    from bvodmr import _kernels_cy
except ImportError:
    _kernels_cy = None

D, E, G = 3490.0, 50.0, 2.8


def field_arrays(n, seed=0):
    rng = np.random.default_rng(seed)
    b = rng.uniform(0.0, 300.0, n)
    th = rng.uniform(0.0, math.pi, n)
    ph = rng.uniform(0.0, 2.0 * math.pi, n)
    st = np.sin(th)
    return b * st * np.cos(ph), b * st * np.sin(ph), b * np.cos(th)


def best_of(repeats, fn):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(mod, n_fields):
    bx, by, bz = field_arrays(n_fields)
    h = mod.build_matrix(D, E, G, 40.0, 10.0, 120.0)

    fill = best_of(3, lambda: [
        mod.build_matrix(D, E, G, 40.0, 10.0, 120.0) for _ in range(1000)
    ]) / 1000
    eigh = best_of(3, lambda: [mod.eigh3(h) for _ in range(1000)]) / 1000
    sweep = best_of(3, lambda: mod.resonance_sweep(D, E, G, bx, by, bz)) / n_fields
    return fill, eigh, sweep


def bench_angle_fit(backend_mod):
    # one deterministic noisy fit, timed end to end through the fitter
    import bvodmr.kernels as kernels
    from bvodmr import ResonanceDataset, fit_angle, transition_sweep, SpinParams

    saved = (kernels.build_matrix, kernels.eigh3,
             kernels.resonance_pair, kernels.resonance_sweep)
    kernels.build_matrix = backend_mod.build_matrix
    kernels.eigh3 = backend_mod.eigh3
    kernels.resonance_pair = backend_mod.resonance_pair
    kernels.resonance_sweep = backend_mod.resonance_sweep
    try:
        b = np.linspace(50.0, 600.0, 24)
        f_minus, f_plus = transition_sweep(SpinParams(), b, 68.0)
        rows = np.column_stack([b, f_minus, f_plus])
        rng = np.random.default_rng(1)
        rows[:, 1:3] += rng.normal(0.0, 2.0, size=(b.size, 2))
        rows[:, 1:3] = np.sort(rows[:, 1:3], axis=1)
        data = ResonanceDataset(rows=rows)
        return best_of(3, lambda: fit_angle(data))
    finally:
        (kernels.build_matrix, kernels.eigh3,
         kernels.resonance_pair, kernels.resonance_sweep) = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fields", type=int, default=20000,
                    help="sweep size for the batched benchmark")
    args = ap.parse_args()

    backends = [("python", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))
    else:
        print("compiled extension not built; run "
              "'python setup.py build_ext --inplace' to compare\n")

    results = {}
    for name, mod in backends:
        fill, eigh, sweep = bench_backend(mod, args.fields)
        fit = bench_angle_fit(mod)
        results[name] = (fill, eigh, sweep, fit)

    header = f"{'kernel':<22}" + "".join(f"{name:>14}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    rows = ("hamiltonian fill", "eigh3", "sweep (per field)", "angle fit (24 rows)")
    for i, label in enumerate(rows):
        line = f"{label:<22}"
        for name, _ in backends:
            line += f"{results[name][i] * 1e6:>12.2f}us"
        if len(backends) == 2:
            line += f"{results['python'][i] / results['cython'][i]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
