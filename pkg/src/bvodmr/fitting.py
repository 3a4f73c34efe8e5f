"""Inverse problems: off-axis field angle from resonance data and
coherence time from Rabi traces.

Both fits are deterministic nonlinear least squares built on
:mod:`bvodmr.leastsq`: the angle fit runs a coarse grid scan over theta
followed by damped Gauss-Newton refinement; the Rabi fit initializes
all seven damped-oscillation parameters from the data (DFT peak,
envelope slope, first sample) before refining.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .leastsq import covariance_diagonal, least_squares
from .params import SpinParams
from .synth import rabi_waveform

THETA_DOMAIN = (0.0, 90.0)   # reflection symmetry makes wider domains redundant
RABI_T_BOUNDS_NS = (0.1, 1e6)

_RABI_KEYS = ("a", "t_a_ns", "f_mhz", "phi_rad", "b", "t_b_ns", "c")
# dominant DFT amplitude must clear the median noise floor by this factor
_OSC_MEDIAN_FACTOR = 6.0


class UnidentifiableDatasetError(ValueError):
    """The dataset carries no information on the requested parameter."""


@dataclass(frozen=True)
class ResonanceDataset:
    """Measured (|B|, f_minus, f_plus) rows plus the fixed spin constants.

    ``rows`` is (n, 3): field magnitude in Gauss, then the two
    transition frequencies in MHz.  Each row's pair is stored sorted
    ascending, which is also how it is matched to the model pair.
    """

    rows: np.ndarray
    params: SpinParams = dc_field(default_factory=SpinParams)

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != 3:
            raise ValueError(f"rows must have shape (n, 3), got {rows.shape}")
        if np.any(rows[:, 0] < 0.0):
            raise ValueError("field magnitudes must be non-negative")
        if np.any(rows[:, 1] > rows[:, 2]):
            bad = int(np.argmax(rows[:, 1] > rows[:, 2]))
            raise ValueError(f"f_minus exceeds f_plus in row {bad}")
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class FitReport:
    """Result of a least-squares fit.

    ``estimate`` and ``covariance_diag`` map parameter names (with unit
    suffixes) to values; ``residual_rms`` is in MHz for resonance fits
    and in signal units for Rabi fits.
    """

    estimate: dict[str, float]
    residual_rms: float
    iterations: int
    converged: bool
    covariance_diag: dict[str, float]
    message: str = ""


@dataclass(frozen=True)
class AngleFitOptions:
    """Knobs for :func:`fit_angle`.

    By default the spin constants stay fixed and only theta is fitted;
    ``free_d`` / ``free_gamma`` add them as nuisance parameters.
    """

    phi_deg: float = 0.0
    free_d: bool = False
    free_gamma: bool = False
    grid_step_deg: float = 0.5
    max_iter: int = 80


@dataclass(frozen=True)
class RabiFitOptions:
    """Knobs for :func:`fit_rabi`.

    ``fixed`` pins named parameters (keys from: a, t_a_ns, f_mhz,
    phi_rad, b, t_b_ns, c) to given values instead of fitting them.
    """

    max_iter: int = 200
    fixed: Mapping[str, float] | None = None


def _model_pairs(params: SpinParams, b, theta_deg, phi_deg, d=None, gamma=None):
    th = math.radians(theta_deg)
    ph = math.radians(phi_deg)
    b = np.asarray(b, dtype=np.float64)
    st = math.sin(th)
    f_minus, f_plus, _ = kernels.resonance_sweep(
        params.d_zfs if d is None else d,
        params.e_strain,
        params.gamma_e if gamma is None else gamma,
        b * (st * math.cos(ph)),
        b * (st * math.sin(ph)),
        b * math.cos(th),
    )
    return f_minus, f_plus


def angle_residuals(
    data: ResonanceDataset,
    theta_deg: float,
    phi_deg: float = 0.0,
    d_zfs: float | None = None,
    gamma_e: float | None = None,
) -> np.ndarray:
    """Model-minus-measured residual vector (2n, in MHz) at an angle.

    Measured pairs are compared to model pairs with both sorted
    ascending, so the objective is insensitive to dip labeling.
    """
    rows = data.rows
    meas = np.sort(rows[:, 1:3], axis=1)
    f_minus, f_plus = _model_pairs(
        data.params, rows[:, 0], theta_deg, phi_deg, d_zfs, gamma_e
    )
    return np.concatenate([f_minus - meas[:, 0], f_plus - meas[:, 1]])


def fit_angle(
    data: ResonanceDataset, options: AngleFitOptions = AngleFitOptions()
) -> FitReport:
    """Estimate the off-axis field angle from resonance-vs-field rows.

    Grid scan over theta in [0, 90] at ``grid_step_deg`` bounds the
    basin, then damped Gauss-Newton refines to well below 1e-4 degrees.
    Deterministic for identical inputs.

    Raises
    ------
    UnidentifiableDatasetError
        If every row has |B| = 0 (theta drops out of the model).
    ValueError
        For fewer than two rows.
    """
    rows = data.rows
    if rows.shape[0] < 2:
        raise ValueError(f"need at least 2 rows to fit the angle, got {rows.shape[0]}")
    if np.all(rows[:, 0] == 0.0):
        raise UnidentifiableDatasetError(
            "all rows have |B| = 0; the angle does not enter the model"
        )

    meas = np.sort(rows[:, 1:3], axis=1)
    b = rows[:, 0]

    # global stage: one batched sweep over the (theta, B) grid
    lo, hi = THETA_DOMAIN
    thetas = np.arange(lo, hi + options.grid_step_deg / 2, options.grid_step_deg)
    th_r = np.radians(thetas)[:, None]
    ph = math.radians(options.phi_deg)
    bx = (b[None, :] * np.sin(th_r) * math.cos(ph)).ravel()
    by = (b[None, :] * np.sin(th_r) * math.sin(ph)).ravel()
    bz = (b[None, :] * np.cos(th_r)).ravel()
    fm, fp, _ = kernels.resonance_sweep(
        data.params.d_zfs, data.params.e_strain, data.params.gamma_e, bx, by, bz
    )
    fm = fm.reshape(thetas.size, -1)
    fp = fp.reshape(thetas.size, -1)
    sse = np.sum((fm - meas[:, 0]) ** 2, axis=1) + np.sum(
        (fp - meas[:, 1]) ** 2, axis=1
    )
    theta0 = float(thetas[int(np.argmin(sse))])

    names = ["theta_deg"]
    x0 = [theta0]
    lower = [lo]
    upper = [hi]
    scale = [1.0]
    if options.free_d:
        names.append("d_mhz")
        x0.append(data.params.d_zfs)
        lower.append(1e-6)
        upper.append(np.inf)
        scale.append(max(data.params.d_zfs, 1.0))
    if options.free_gamma:
        names.append("gamma_mhz_per_g")
        x0.append(data.params.gamma_e)
        lower.append(1e-9)
        upper.append(np.inf)
        scale.append(max(data.params.gamma_e, 0.1))

    def residual(x):
        kw = dict(zip(names, x))
        return angle_residuals(
            data,
            kw["theta_deg"],
            options.phi_deg,
            kw.get("d_mhz"),
            kw.get("gamma_mhz_per_g"),
        )

    res = least_squares(
        residual,
        np.array(x0),
        bounds=(np.array(lower), np.array(upper)),
        x_scale=np.array(scale),
        max_iter=options.max_iter,
        xtol=1e-6,
    )
    cov = covariance_diagonal(res)
    return FitReport(
        estimate=dict(zip(names, (float(v) for v in res.x))),
        residual_rms=math.sqrt(res.cost / res.residual.size),
        iterations=res.iterations,
        converged=res.converged,
        covariance_diag=dict(zip(names, (float(v) for v in cov))),
        message=res.message,
    )


def _oscillation_start(trace: np.ndarray):
    """DFT-based detection; returns (f_mhz, amplitudes) or (None, _)."""
    tau = trace[:, 0]
    y = trace[:, 1]
    n = y.size
    dt = (tau[-1] - tau[0]) / (n - 1)
    amps = np.abs(np.fft.rfft(y - y.mean()))
    if amps.size < 2:
        return None, amps
    k = 1 + int(np.argmax(amps[1:]))
    floor = max(
        _OSC_MEDIAN_FACTOR * float(np.median(amps[1:])),
        1e-12 * n * max(1.0, abs(float(y.mean()))),
    )
    if amps[k] <= floor:
        return None, amps
    return 1e3 * k / (n * dt), amps  # bin frequency in MHz


def _envelope_time(tau, y, c0, f_mhz, dt):
    """Decay-time guess from the log slope of per-period |y - c0| maxima."""
    period_samples = max(1, int(round(1e3 / (f_mhz * dt))))
    u = np.abs(y - c0)
    t_pts, e_pts = [], []
    for start in range(0, y.size, period_samples):
        block = slice(start, min(start + period_samples, y.size))
        j = start + int(np.argmax(u[block]))
        if u[j] > 0.0:
            t_pts.append(tau[j])
            e_pts.append(u[j])
    if len(t_pts) < 2:
        return 0.25 * (tau[-1] - tau[0])
    coef = np.polyfit(np.asarray(t_pts), np.log(np.asarray(e_pts)), 1)
    slope = coef[0]
    if slope >= 0.0:
        return 10.0 * (tau[-1] - tau[0])
    return float(np.clip(-1.0 / slope, *RABI_T_BOUNDS_NS))


def fit_rabi(
    trace: np.ndarray, options: RabiFitOptions = RabiFitOptions()
) -> FitReport:
    """Fit the seven damped-oscillation parameters to a (tau, signal) trace.

    Requires at least 16 samples spanning an oscillation period.  A
    trace with no detectable oscillation (dominant DFT amplitude below
    the noise floor) returns ``converged=False`` with decay times NaN
    rather than raising.  Decay-time estimates pinned at their bounds
    are likewise reported as not converged.
    """
    trace = np.asarray(trace, dtype=np.float64)
    if trace.ndim != 2 or trace.shape[1] != 2:
        raise ValueError(f"trace must have shape (n, 2), got {trace.shape}")
    n = trace.shape[0]
    if n < 16:
        raise ValueError(f"need at least 16 samples, got {n}")
    tau = trace[:, 0]
    y = trace[:, 1]
    if np.any(np.diff(tau) <= 0.0):
        raise ValueError("tau column must be strictly increasing")

    c0 = float(y.mean())
    f0, _ = _oscillation_start(trace)
    if f0 is None:
        estimate = dict.fromkeys(_RABI_KEYS, 0.0)
        estimate.update(
            {"c": c0, "t_a_ns": float("nan"), "t_b_ns": float("nan")}
        )
        return FitReport(
            estimate=estimate,
            residual_rms=float(np.std(y - c0)),
            iterations=0,
            converged=False,
            covariance_diag={},
            message="no detectable oscillation in the trace",
        )

    dt = (tau[-1] - tau[0]) / (n - 1)
    a0 = float(y.max() - y.min()) / 2.0
    t0 = _envelope_time(tau, y, c0, f0, dt)
    cos_arg = min(1.0, max(-1.0, (float(y[0]) - c0) / a0))
    phi0 = math.acos(cos_arg)
    if y[min(1, n - 1)] > y[0]:
        phi0 = -phi0

    nyquist_mhz = 1e3 * 0.5 / dt
    init = {
        "a": a0,
        "t_a_ns": t0,
        "f_mhz": f0,
        "phi_rad": phi0,
        "b": 0.0,
        "t_b_ns": t0,
        "c": c0,
    }
    low = {
        "a": -np.inf,
        "t_a_ns": RABI_T_BOUNDS_NS[0],
        "f_mhz": 0.0,
        "phi_rad": -np.inf,
        "b": -np.inf,
        "t_b_ns": RABI_T_BOUNDS_NS[0],
        "c": -np.inf,
    }
    high = {
        "a": np.inf,
        "t_a_ns": RABI_T_BOUNDS_NS[1],
        "f_mhz": nyquist_mhz,
        "phi_rad": np.inf,
        "b": np.inf,
        "t_b_ns": RABI_T_BOUNDS_NS[1],
        "c": np.inf,
    }
    amp_scale = max(a0, 1e-6)
    t_scale = float(np.clip(t0, 1.0, 1e4))
    scales = {
        "a": amp_scale,
        "t_a_ns": t_scale,
        "f_mhz": max(f0, 1.0),
        "phi_rad": 1.0,
        "b": amp_scale,
        "t_b_ns": t_scale,
        "c": amp_scale,
    }

    fixed = dict(options.fixed or {})
    unknown = set(fixed) - set(_RABI_KEYS)
    if unknown:
        raise ValueError(f"unknown fixed parameter(s): {sorted(unknown)}")
    free = [k for k in _RABI_KEYS if k not in fixed]
    if not free:
        raise ValueError("cannot fix all seven parameters")

    def residual(x):
        p = dict(zip(free, x))
        p.update(fixed)
        return (
            rabi_waveform(
                tau, p["a"], p["t_a_ns"], p["f_mhz"], p["phi_rad"],
                p["b"], p["t_b_ns"], p["c"],
            )
            - y
        )

    res = least_squares(
        residual,
        np.array([init[k] for k in free]),
        bounds=(
            np.array([low[k] for k in free]),
            np.array([high[k] for k in free]),
        ),
        x_scale=np.array([scales[k] for k in free]),
        max_iter=options.max_iter,
    )

    estimate = dict(zip(free, (float(v) for v in res.x)))
    estimate.update(fixed)
    estimate = {k: estimate[k] for k in _RABI_KEYS}
    cov = dict(zip(free, (float(v) for v in covariance_diagonal(res))))

    converged = res.converged
    message = res.message
    for key in ("t_a_ns", "t_b_ns"):
        if key in free:
            val = estimate[key]
            if val <= RABI_T_BOUNDS_NS[0] * (1 + 1e-9) or val >= RABI_T_BOUNDS_NS[1] * (1 - 1e-9):
                converged = False
                message = f"decay time {key} pinned at its bound"
    return FitReport(
        estimate=estimate,
        residual_rms=math.sqrt(res.cost / res.residual.size),
        iterations=res.iterations,
        converged=converged,
        covariance_diag=cov,
        message=message,
    )


@dataclass(frozen=True)
class CoherencePoint:
    """One coherence-vs-angle row; NaN values mark a failed trace."""

    theta_deg: float
    t_a_ns: float
    t_a_sigma_ns: float
    converged: bool
    message: str = ""


def coherence_vs_angle(
    traces: Sequence[tuple[float, np.ndarray]],
    options: RabiFitOptions = RabiFitOptions(),
) -> list[CoherencePoint]:
    """Map :func:`fit_rabi` over (theta_deg, trace) pairs, in order.

    Per-trace failures (bad input, no oscillation, non-convergence) are
    recorded in that entry; the batch never aborts.
    """
    out: list[CoherencePoint] = []
    for theta_deg, trace in traces:
        try:
            report = fit_rabi(trace, options)
        except ValueError as exc:
            out.append(
                CoherencePoint(float(theta_deg), float("nan"), float("nan"),
                               False, str(exc))
            )
            continue
        sigma = math.sqrt(report.covariance_diag.get("t_a_ns", float("nan")))
        out.append(
            CoherencePoint(
                theta_deg=float(theta_deg),
                t_a_ns=report.estimate["t_a_ns"],
                t_a_sigma_ns=sigma,
                converged=report.converged,
                message=report.message,
            )
        )
    return out
