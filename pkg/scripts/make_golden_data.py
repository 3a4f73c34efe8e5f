#!/usr/bin/env python3
"""Regenerate the bundled golden datasets under src/bvodmr/data/.

Deterministic: fixed models, grids and seeds.  Run from the repo root
after changing the synthesis code, then commit the refreshed files.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

import numpy as np

from bvodmr import (
    RabiModel,
    ResonanceDataset,  # noqa: F401  (import sanity: fits consume these files)
    SpinParams,
    add_noise,
    synth_rabi,
    transition_sweep,
)
from bvodmr.tables import write_table

OUT = ROOT / "src" / "bvodmr" / "data"

ANGLE_TRUTH_DEG = 68.0
ANGLE_B_GAUSS = np.array([40.0, 80.0, 120.0, 167.0])
ANGLE_NOISE_MHZ = 2.0
ANGLE_SEED = 68

RABI_TRUTH = RabiModel(a=1.0, t_a=42.76, f=20.0, phi=0.0, b=0.5, t_b=200.0, c=0.1)
RABI_TAU_NS = np.arange(0.0, 200.0 + 0.5, 1.0)
RABI_NOISE = 0.02
RABI_SEED = 4276


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    params = SpinParams()

    f_minus, f_plus = transition_sweep(params, ANGLE_B_GAUSS, ANGLE_TRUTH_DEG)
    clean = np.column_stack([ANGLE_B_GAUSS, f_minus, f_plus])
    write_table(
        OUT / "resonance_theta68_clean.csv",
        ("b_gauss", "f_minus_mhz", "f_plus_mhz"),
        clean,
    )

    rng = np.random.default_rng(ANGLE_SEED)
    noisy = clean.copy()
    noisy[:, 1:3] += rng.normal(0.0, ANGLE_NOISE_MHZ, size=(clean.shape[0], 2))
    noisy[:, 1:3] = np.sort(noisy[:, 1:3], axis=1)
    write_table(
        OUT / "resonance_theta68_noisy.csv",
        ("b_gauss", "f_minus_mhz", "f_plus_mhz"),
        noisy,
    )

    trace = synth_rabi(RABI_TRUTH, RABI_TAU_NS)
    write_table(OUT / "rabi_42p76ns_clean.csv", ("tau_ns", "signal"), trace)
    write_table(
        OUT / "rabi_42p76ns_noisy.csv",
        ("tau_ns", "signal"),
        add_noise(trace, RABI_NOISE, RABI_SEED),
    )

    for name in sorted(p.name for p in OUT.glob("*.csv")):
        print(f"wrote {OUT / name}")


if __name__ == "__main__":
    main()
