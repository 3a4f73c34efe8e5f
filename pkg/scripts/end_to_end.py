#!/usr/bin/env python3
"""End-to-end CLI pipeline: synthesize, sweep, fit, report.

Writes every artifact under --outdir.  With a fixed --seed the whole
tree is byte-for-byte reproducible, which the acceptance suite checks
by running this script twice and diffing.

Steps
-----
1. sweep-angle: transition table over theta at the demonstration field.
2. sweep-field at theta=68 deg, then fit-angle on that table.
3. simulate-rabi with noise, then fit-rabi on the noisy trace.
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from bvodmr.cli import main as cli_main  # noqa: E402

SWEEP_ANGLE_CFG = """\
units = si
b = 16.7
theta_start_deg = 0
theta_stop_deg = 90
theta_step_deg = 1
"""

SWEEP_FIELD_CFG = """\
theta_deg = 68
b_start = 40
b_stop = 400
b_step = 40
"""

SIMULATE_RABI_CFG = """\
tau_stop_ns = 200
tau_step_ns = 1
rabi_a = 1.0
rabi_t_a_ns = 42.76
rabi_f = 20
rabi_b = 0.5
rabi_t_b_ns = 200
rabi_c = 0.1
noise_sigma = 0.02
"""

FIT_ANGLE_CFG = """\
input = ../field_sweep.csv
"""

FIT_RABI_CFG = """\
input = ../rabi_trace.csv
"""


def run_step(mode: str, config: Path, out: Path, seed: int) -> None:
    argv = [mode, "--config", str(config), "--out", str(out), "--seed", str(seed)]
    status = cli_main(argv)
    if status != 0:
        raise SystemExit(f"step {mode} failed with exit status {status}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", required=True)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    out = Path(args.outdir)
    cfg_dir = out / "configs"
    cfg_dir.mkdir(parents=True, exist_ok=True)

    configs = {
        "sweep-angle": SWEEP_ANGLE_CFG,
        "sweep-field": SWEEP_FIELD_CFG,
        "simulate-rabi": SIMULATE_RABI_CFG,
        "fit-angle": FIT_ANGLE_CFG,
        "fit-rabi": FIT_RABI_CFG,
    }
    for mode, text in configs.items():
        (cfg_dir / f"{mode}.cfg").write_text(text, encoding="utf-8", newline="\n")

    for mode in ("sweep-angle", "sweep-field", "simulate-rabi",
                 "fit-angle", "fit-rabi"):
        run_step(mode, cfg_dir / f"{mode}.cfg", out, args.seed)
    print(f"pipeline complete; artifacts under {out}")


if __name__ == "__main__":
    main()
