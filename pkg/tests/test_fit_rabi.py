"""Rabi-trace inversion and the coherence-vs-angle batch."""

import math

import numpy as np
import pytest

from bvodmr import (
    RabiFitOptions,
    RabiModel,
    add_noise,
    coherence_vs_angle,
    fit_rabi,
    synth_rabi,
)

TRUTH = RabiModel(a=1.0, t_a=42.76, f=20.0, phi=0.0, b=0.5, t_b=200.0, c=0.1)
TAU = np.arange(0.0, 200.0 + 0.5, 1.0)


def exp_offset_oracle(tau, y):
    """Profiled linear least squares for y = b e^(-tau/t_b) + c.

    For fixed t_b the model is linear in (b, c); golden-section search
    over t_b finds the profile optimum.  Independent of the LM path.
    """

    def profiled_cost(t_b):
        basis = np.column_stack([np.exp(-tau / t_b), np.ones_like(tau)])
        coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
        r = basis @ coef - y
        return float(r @ r), coef

    lo, hi = 1.0, 5e3
    inv_gold = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - inv_gold * (b - a)
    d = a + inv_gold * (b - a)
    while b - a > 1e-12:
        if profiled_cost(math.exp(c))[0] < profiled_cost(math.exp(d))[0]:
            b = d
        else:
            a = c
        c = b - inv_gold * (b - a)
        d = a + inv_gold * (b - a)
    t_b = math.exp((a + b) / 2.0)
    _, coef = profiled_cost(t_b)
    return coef[0], t_b, coef[1]


def test_noiseless_round_trip():
    report = fit_rabi(synth_rabi(TRUTH, TAU))
    assert report.converged
    est = report.estimate
    assert est["t_a_ns"] == pytest.approx(42.76, rel=5e-3)
    assert est["a"] == pytest.approx(1.0, rel=5e-3)
    assert est["f_mhz"] == pytest.approx(20.0, rel=5e-3)
    assert est["b"] == pytest.approx(0.5, rel=5e-3)
    assert est["t_b_ns"] == pytest.approx(200.0, rel=5e-3)
    assert est["c"] == pytest.approx(0.1, rel=5e-3)
    assert abs(est["phi_rad"]) < 1e-3
    assert report.residual_rms < 1e-9


def test_noisy_round_trip_seeded():
    trace = add_noise(synth_rabi(TRUTH, TAU), 0.02, seed=7)
    report = fit_rabi(trace)
    assert report.converged
    assert report.estimate["t_a_ns"] == pytest.approx(42.76, rel=0.10)


def test_constant_trace_flagged_not_raised():
    trace = np.column_stack([np.arange(40.0), np.full(40, 0.37)])
    report = fit_rabi(trace)
    assert not report.converged
    assert "no detectable oscillation" in report.message
    assert report.estimate["c"] == pytest.approx(0.37)
    assert math.isnan(report.estimate["t_a_ns"])


def test_too_short_trace_rejected():
    trace = synth_rabi(TRUTH, np.arange(0.0, 15.0))
    with pytest.raises(ValueError, match="16"):
        fit_rabi(trace)


def test_non_monotone_tau_rejected():
    trace = synth_rabi(TRUTH, TAU).copy()
    trace[5, 0] = trace[4, 0]
    with pytest.raises(ValueError, match="increasing"):
        fit_rabi(trace)


def test_amplitude_zero_reduces_to_exponential_fit():
    model = RabiModel(a=0.0, t_a=50.0, f=10.0, phi=0.0, b=0.4, t_b=120.0, c=0.25)
    tau = np.arange(0.0, 300.0, 2.0)
    trace = synth_rabi(model, tau)
    trace = add_noise(trace, 0.004, seed=21)

    report = fit_rabi(
        trace,
        RabiFitOptions(fixed={"a": 0.0, "f_mhz": 10.0, "phi_rad": 0.0}),
    )
    b_ref, t_b_ref, c_ref = exp_offset_oracle(trace[:, 0], trace[:, 1])
    assert report.estimate["b"] == pytest.approx(b_ref, rel=1e-6)
    assert report.estimate["t_b_ns"] == pytest.approx(t_b_ref, rel=1e-6)
    assert report.estimate["c"] == pytest.approx(c_ref, rel=1e-6)


def test_deterministic():
    trace = add_noise(synth_rabi(TRUTH, TAU), 0.02, seed=3)
    assert fit_rabi(trace) == fit_rabi(trace)


def test_residual_optimality():
    trace = add_noise(synth_rabi(TRUTH, TAU), 0.01, seed=13)
    report = fit_rabi(trace)
    assert report.converged

    def sse(est):
        model = RabiModel(
            a=est["a"], t_a=est["t_a_ns"], f=est["f_mhz"], phi=est["phi_rad"],
            b=est["b"], t_b=est["t_b_ns"], c=est["c"],
        )
        r = synth_rabi(model, trace[:, 0])[:, 1] - trace[:, 1]
        return float(r @ r)

    best = sse(report.estimate)
    for key in ("a", "t_a_ns", "f_mhz", "b", "t_b_ns", "c"):
        for bump in (1.01, 0.99):
            perturbed = dict(report.estimate)
            perturbed[key] *= bump
            assert sse(perturbed) > best, key


def test_unknown_fixed_key_rejected():
    trace = synth_rabi(TRUTH, TAU)
    with pytest.raises(ValueError, match="unknown fixed"):
        fit_rabi(trace, RabiFitOptions(fixed={"bogus": 1.0}))


class TestCoherenceBatch:
    def test_single_trace(self):
        points = coherence_vs_angle([(0.0, synth_rabi(TRUTH, TAU))])
        assert len(points) == 1
        assert points[0].theta_deg == 0.0
        assert points[0].converged
        assert points[0].t_a_ns == pytest.approx(42.76, rel=5e-3)
        assert points[0].t_a_sigma_ns >= 0.0

    def test_empty_input(self):
        assert coherence_vs_angle([]) == []

    def test_monotone_coherence_sequence(self):
        thetas = [0.0, 30.0, 60.0, 90.0]
        t_as = [42.76, 35.0, 24.0, 15.0]
        traces = []
        for theta, t_a in zip(thetas, t_as):
            model = RabiModel(a=1.0, t_a=t_a, f=20.0, b=0.3, t_b=150.0, c=0.1)
            traces.append((theta, synth_rabi(model, TAU)))
        points = coherence_vs_angle(traces)
        fitted = [p.t_a_ns for p in points]
        assert [p.theta_deg for p in points] == thetas
        assert all(p.converged for p in points)
        assert all(a > b for a, b in zip(fitted, fitted[1:]))

    def test_failures_recorded_per_entry(self):
        flat = np.column_stack([np.arange(40.0), np.ones(40)])
        short = synth_rabi(TRUTH, np.arange(0.0, 10.0))
        good = synth_rabi(TRUTH, TAU)
        points = coherence_vs_angle([(0.0, good), (30.0, flat), (60.0, short)])
        assert len(points) == 3
        assert points[0].converged
        assert not points[1].converged
        assert math.isnan(points[1].t_a_ns)
        assert not points[2].converged
        assert "16" in points[2].message
