"""Synthetic ODMR spectra and Rabi time traces.

Traces are ``(n, 2)`` float arrays of (x, y) rows: frequency in MHz vs
normalized PL for spectra, delay in ns vs signal for Rabi traces.  Used
to validate the fitters against known ground truth and to render
plot-ready tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import ResonancePair

# Synthesis-only defaults for the dip shape; never used as fit constraints.
DEFAULT_CONTRAST = 0.02
DEFAULT_LINEWIDTH_MHZ = 120.0


@dataclass(frozen=True)
class SpectrumModel:
    """Two-dip Lorentzian CW-ODMR spectrum model.

    ``contrast_*`` are fractional dip depths in (0, 1); ``linewidth_*``
    are FWHM in MHz; ``baseline`` is the off-resonance PL level.
    """

    resonances: ResonancePair
    contrast_minus: float = DEFAULT_CONTRAST
    contrast_plus: float = DEFAULT_CONTRAST
    linewidth_minus: float = DEFAULT_LINEWIDTH_MHZ
    linewidth_plus: float = DEFAULT_LINEWIDTH_MHZ
    baseline: float = 1.0

    def __post_init__(self):
        for name in ("contrast_minus", "contrast_plus"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {val}")
        for name in ("linewidth_minus", "linewidth_plus"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.baseline <= 0.0:
            raise ValueError(f"baseline must be positive, got {self.baseline}")


# cycles accumulated per ns at 1 MHz
CYCLES_PER_MHZ_NS = 1e-3


def rabi_waveform(tau, a, t_a, f, phi, b, t_b, c) -> np.ndarray:
    """a e^(-tau/t_a) cos(2 pi f tau + phi) + b e^(-tau/t_b) + c.

    tau in ns, f in MHz, phi in radians.  The single evaluation point
    for both synthesis and fitting.
    """
    tau = np.asarray(tau, dtype=np.float64)
    omega = 2.0 * np.pi * f * CYCLES_PER_MHZ_NS
    return (
        a * np.exp(-tau / t_a) * np.cos(omega * tau + phi)
        + b * np.exp(-tau / t_b)
        + c
    )


@dataclass(frozen=True)
class RabiModel:
    """Damped Rabi oscillation a e^(-tau/T_a) cos(2 pi f tau + phi)
    plus a secondary decay b e^(-tau/T_b) and offset c.

    Times in ns, ``f`` in MHz (a 10 MHz oscillation completes a quarter
    period at tau = 25 ns), ``phi`` in radians; ``t_a`` is the
    coherence time.
    """

    a: float
    t_a: float
    f: float
    phi: float = 0.0
    b: float = 0.0
    t_b: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if self.t_a <= 0.0 or self.t_b <= 0.0:
            raise ValueError("decay times t_a and t_b must be positive")
        if self.f < 0.0:
            raise ValueError(f"oscillation frequency must be >= 0, got {self.f}")

    def __call__(self, tau) -> np.ndarray:
        return rabi_waveform(
            tau, self.a, self.t_a, self.f, self.phi, self.b, self.t_b, self.c
        )


def _lorentzian_dip(f, center, contrast, width):
    quarter = width * width / 4.0
    return contrast * quarter / ((f - center) ** 2 + quarter)


def synth_spectrum(model: SpectrumModel, freq_grid) -> np.ndarray:
    """Evaluate the two-dip spectrum on a strictly increasing grid (MHz).

    PL(f) = baseline - sum_i contrast_i (w_i^2/4) / ((f - f_i)^2 + w_i^2/4),
    so each isolated dip bottoms out at baseline - contrast_i.
    Returns (n, 2) rows of (frequency, normalized PL).
    """
    f = np.asarray(freq_grid, dtype=np.float64)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("freq_grid must be a non-empty 1-d sequence")
    if f.size > 1 and np.any(np.diff(f) <= 0.0):
        raise ValueError("freq_grid must be strictly increasing")
    pl = model.baseline - (
        _lorentzian_dip(f, model.resonances.f_minus, model.contrast_minus,
                        model.linewidth_minus)
        + _lorentzian_dip(f, model.resonances.f_plus, model.contrast_plus,
                          model.linewidth_plus)
    )
    return np.column_stack([f, pl])


def synth_rabi(model: RabiModel, tau_grid) -> np.ndarray:
    """Evaluate the Rabi model on an increasing, non-negative grid (ns).

    Returns (n, 2) rows of (tau, signal).
    """
    tau = np.asarray(tau_grid, dtype=np.float64)
    if tau.ndim != 1 or tau.size == 0:
        raise ValueError("tau_grid must be a non-empty 1-d sequence")
    if np.any(tau < 0.0):
        raise ValueError("tau_grid must be non-negative")
    if tau.size > 1 and np.any(np.diff(tau) <= 0.0):
        raise ValueError("tau_grid must be increasing")
    return np.column_stack([tau, model(tau)])


def add_noise(trace: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    """Add i.i.d. Gaussian noise of std ``sigma`` to the y column.

    Pure function of (trace, sigma, seed): the same seed reproduces the
    same output bit for bit.  ``sigma = 0`` returns an unchanged copy.
    """
    if sigma < 0.0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    trace = np.asarray(trace, dtype=np.float64)
    if trace.ndim != 2 or trace.shape[1] != 2:
        raise ValueError(f"trace must have shape (n, 2), got {trace.shape}")
    out = trace.copy()
    if sigma > 0.0:
        rng = np.random.default_rng(seed)
        out[:, 1] += rng.normal(0.0, sigma, size=out.shape[0])
    return out
