"""Batch command-line front end.

One subcommand per run mode; every invocation reads a flat
``key = value`` config document, runs the forward model or a fit, and
writes plot-ready tables and/or a flat report into the output
directory.  Identical config + seed produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from .config import MODES, ConfigError, RunConfig, parse_config
from .fitting import (
    AngleFitOptions,
    FitReport,
    ResonanceDataset,
    UnidentifiableDatasetError,
    coherence_vs_angle,
    fit_angle,
    fit_rabi,
)
from .hamiltonian import (
    AmbiguousBrightStateError,
    transition_frequencies,
    transition_sweep,
)
from .kernels import backend_name
from .params import FieldVector
from .synth import RabiModel, SpectrumModel, add_noise, synth_rabi, synth_spectrum
from .tables import (
    TableError,
    load_resonance_table,
    load_trace_table,
    write_report,
    write_table,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_COMPUTE = 4
EXIT_IO = 5

_EXIT_DOC = """\
exit codes:
  0  success
  2  configuration or usage error (bad flags, malformed config document)
  3  malformed input table
  4  computation failed or fit did not converge (fit reports are still written)
  5  could not write output files
"""


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    return np.arange(start, stop + step / 2.0, step)


def _resolve(cfg: RunConfig, path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else cfg.base_dir / p


def _spin_entries(cfg: RunConfig) -> dict:
    return {
        "mode": cfg.mode,
        "seed": cfg.seed,
        "d_mhz": cfg.params.d_zfs,
        "e_strain_mhz": cfg.params.e_strain,
        "gamma_mhz_per_g": cfg.params.gamma_e,
    }


def _report_entries(cfg: RunConfig, report: FitReport, rms_key: str) -> dict:
    entries = _spin_entries(cfg)
    for name, value in report.estimate.items():
        entries[name] = value
    for name, value in report.covariance_diag.items():
        entries[f"{name}_sigma"] = math.sqrt(value)
    entries[rms_key] = report.residual_rms
    entries["iterations"] = report.iterations
    entries["converged"] = report.converged
    entries["message"] = report.message
    return entries


def _run_simulate_spectrum(cfg: RunConfig, out_dir: Path) -> int:
    v = cfg.values
    pair = transition_frequencies(
        cfg.params, FieldVector(v["b"], v["theta_deg"], v["phi_deg"])
    )
    model = SpectrumModel(
        resonances=pair,
        contrast_minus=v["contrast_minus"],
        contrast_plus=v["contrast_plus"],
        linewidth_minus=v["linewidth_minus"],
        linewidth_plus=v["linewidth_plus"],
        baseline=v["baseline"],
    )
    trace = synth_spectrum(model, _grid(v["freq_start"], v["freq_stop"], v["freq_step"]))
    if v["noise_sigma"] > 0.0:
        trace = add_noise(trace, v["noise_sigma"], cfg.seed)
    write_table(out_dir / "spectrum.csv", ("frequency_mhz", "pl_norm"), trace)
    return EXIT_OK


def _run_simulate_rabi(cfg: RunConfig, out_dir: Path) -> int:
    v = cfg.values
    model = RabiModel(
        a=v["rabi_a"], t_a=v["rabi_t_a_ns"], f=v["rabi_f"], phi=v["rabi_phi_rad"],
        b=v["rabi_b"], t_b=v["rabi_t_b_ns"], c=v["rabi_c"],
    )
    trace = synth_rabi(model, _grid(v["tau_start_ns"], v["tau_stop_ns"], v["tau_step_ns"]))
    if v["noise_sigma"] > 0.0:
        trace = add_noise(trace, v["noise_sigma"], cfg.seed)
    write_table(out_dir / "rabi_trace.csv", ("tau_ns", "signal"), trace)
    return EXIT_OK


def _run_sweep_field(cfg: RunConfig, out_dir: Path) -> int:
    v = cfg.values
    b = _grid(v["b_start"], v["b_stop"], v["b_step"])
    f_minus, f_plus = transition_sweep(cfg.params, b, v["theta_deg"], v["phi_deg"])
    write_table(
        out_dir / "field_sweep.csv",
        ("b_gauss", "f_minus_mhz", "f_plus_mhz", "splitting_mhz"),
        np.column_stack([b, f_minus, f_plus, f_plus - f_minus]),
    )
    return EXIT_OK


def _run_sweep_angle(cfg: RunConfig, out_dir: Path) -> int:
    v = cfg.values
    thetas = _grid(v["theta_start_deg"], v["theta_stop_deg"], v["theta_step_deg"])
    f_minus, f_plus = transition_sweep(cfg.params, v["b"], thetas, v["phi_deg"])
    write_table(
        out_dir / "angle_sweep.csv",
        ("theta_deg", "f_minus_mhz", "f_plus_mhz", "splitting_mhz"),
        np.column_stack([thetas, f_minus, f_plus, f_plus - f_minus]),
    )
    return EXIT_OK


def _run_fit_angle(cfg: RunConfig, out_dir: Path) -> int:
    v = cfg.values
    rows = load_resonance_table(_resolve(cfg, v["input"]))
    report = fit_angle(
        ResonanceDataset(rows=rows, params=cfg.params),
        AngleFitOptions(
            phi_deg=v["phi_deg"], free_d=v["free_d"], free_gamma=v["free_gamma"]
        ),
    )
    entries = _report_entries(cfg, report, "residual_rms_mhz")
    entries["input"] = v["input"]
    write_report(out_dir / "angle_fit_report.txt", entries)
    return EXIT_OK if report.converged else EXIT_COMPUTE


def _run_fit_rabi(cfg: RunConfig, out_dir: Path) -> int:
    v = cfg.values
    trace = load_trace_table(_resolve(cfg, v["input"]))
    report = fit_rabi(trace)
    entries = _report_entries(cfg, report, "residual_rms")
    entries["input"] = v["input"]
    write_report(out_dir / "rabi_fit_report.txt", entries)
    return EXIT_OK if report.converged else EXIT_COMPUTE


def _parse_manifest(spec: str) -> list[tuple[float, str]]:
    entries = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        theta_text, sep, path = item.partition(":")
        if not sep or not path.strip():
            raise ConfigError(
                f"inputs entry {item!r} must be '<theta_deg>:<path>'"
            )
        try:
            theta = float(theta_text)
        except ValueError:
            raise ConfigError(
                f"inputs entry {item!r} has a non-numeric angle"
            ) from None
        entries.append((theta, path.strip()))
    if not entries:
        raise ConfigError("inputs manifest is empty")
    return entries


def _run_fit_coherence_batch(cfg: RunConfig, out_dir: Path) -> int:
    manifest = _parse_manifest(cfg.values["inputs"])
    traces = [
        (theta, load_trace_table(_resolve(cfg, path))) for theta, path in manifest
    ]
    points = coherence_vs_angle(traces)
    rows = np.array(
        [
            [p.theta_deg, p.t_a_ns, p.t_a_sigma_ns, 1.0 if p.converged else 0.0]
            for p in points
        ]
    )
    write_table(
        out_dir / "coherence_vs_angle.csv",
        ("theta_deg", "t_a_ns", "t_a_sigma_ns", "converged"),
        rows,
    )
    return EXIT_OK if all(p.converged for p in points) else EXIT_COMPUTE


_RUNNERS = {
    "simulate-spectrum": _run_simulate_spectrum,
    "simulate-rabi": _run_simulate_rabi,
    "sweep-field": _run_sweep_field,
    "sweep-angle": _run_sweep_angle,
    "fit-angle": _run_fit_angle,
    "fit-rabi": _run_fit_rabi,
    "fit-coherence-batch": _run_fit_coherence_batch,
}


def run(config: RunConfig, out_dir: str | Path = ".") -> int:
    """Execute a validated run, writing artifacts into ``out_dir``.

    Returns an exit status; outputs are only written after the
    computation succeeded, so failed runs leave no partial files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[config.mode](config, out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvodmr",
        description=(
            "Forward-model ODMR transition frequencies of a spin-1 defect "
            "under a tilted magnetic field, and fit field angle or Rabi "
            "coherence time from measurement tables."
        ),
        epilog=_EXIT_DOC,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="mode", required=True, metavar="MODE")
    for mode in MODES:
        p = sub.add_parser(mode, help=f"run a {mode} job from a config document")
        p.add_argument("--config", required=True, help="path to the config document")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--units", choices=("si", "lab"), default=None,
                       help="unit system of config values (cross-checked "
                            "against a units key in the document)")
        p.add_argument("--verbose", action="store_true",
                       help="print the resolved run to stderr")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"bvodmr: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        cfg = parse_config(
            text,
            mode=args.mode,
            cli_units=args.units,
            base_dir=Path(args.config).parent,
        )
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
    except ConfigError as exc:
        print(f"bvodmr: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.verbose:
        print(
            f"bvodmr: mode={cfg.mode} seed={cfg.seed} units={cfg.units} "
            f"kernels={backend_name()} out={args.out}",
            file=sys.stderr,
        )
        print(f"bvodmr: params={cfg.params}", file=sys.stderr)

    try:
        return run(cfg, args.out)
    except ConfigError as exc:
        print(f"bvodmr: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TableError as exc:
        print(f"bvodmr: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (
        UnidentifiableDatasetError,
        AmbiguousBrightStateError,
        ValueError,
    ) as exc:
        print(f"bvodmr: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"bvodmr: output error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
