"""Bundled golden synthetic datasets.

Stand-ins for raw measurement tables: generated by the synthesis module
at fixed seeds (see scripts/make_golden_data.py) and shipped with the
package so the fit examples run anywhere.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

#: name -> short description of each bundled file
CATALOG = {
    "resonance_theta68_clean.csv":
        "exact transition pairs at theta=68 deg, B in {40, 80, 120, 167} G",
    "resonance_theta68_noisy.csv":
        "same rows with 2 MHz Gaussian frequency noise, seed 068",
    "rabi_42p76ns_clean.csv":
        "exact damped oscillation, T_a=42.76 ns, f=20 MHz, 0..200 ns",
    "rabi_42p76ns_noisy.csv":
        "same trace with 0.02 amplitude noise, seed 4276",
}


def path(name: str) -> Path:
    """Filesystem path of a bundled dataset."""
    if name not in CATALOG:
        raise KeyError(f"unknown dataset {name!r}; choose from {sorted(CATALOG)}")
    return Path(str(resources.files("bvodmr").joinpath("data", name)))
