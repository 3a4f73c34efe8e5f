"""Spectrum/Rabi synthesis and the seeded noise contract."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvodmr import (
    RabiModel,
    ResonancePair,
    SpectrumModel,
    add_noise,
    synth_rabi,
    synth_spectrum,
)

PAIR = ResonancePair(3440.0, 3540.0)


class TestSpectrum:
    def test_single_dip_depth(self):
        model = SpectrumModel(
            resonances=ResonancePair(3490.0, 3490.0),
            contrast_minus=0.025,
            contrast_plus=0.025,
            linewidth_minus=100.0,
            linewidth_plus=100.0,
        )
        trace = synth_spectrum(model, np.array([3490.0]))
        # two coincident dips of depth 0.025 each
        assert trace[0, 1] == pytest.approx(1.0 - 0.05)

    def test_flat_baseline_when_contrast_vanishes(self):
        model = SpectrumModel(PAIR, contrast_minus=1e-12, contrast_plus=1e-12,
                              baseline=0.8)
        trace = synth_spectrum(model, np.linspace(3000.0, 4000.0, 64))
        assert np.allclose(trace[:, 1], 0.8, atol=1e-10)

    @pytest.mark.parametrize(
        ("width", "step"),
        [
            # at the default 120 MHz width the two dips overlap and each
            # argmin is pulled 8.64 MHz toward the center (computed by a
            # 0.01 MHz argmin scan), within one 10 MHz scan step
            (120.0, 10.0),
            # narrow dips barely interact; pull is 0.05 MHz
            (30.0, 0.5),
        ],
    )
    def test_minima_near_resonances(self, width, step):
        grid = np.arange(3200.0, 3800.0 + step / 2, step)
        model = SpectrumModel(PAIR, linewidth_minus=width, linewidth_plus=width)
        trace = synth_spectrum(model, grid)
        pl = trace[:, 1]
        lower = grid < 3490.0
        f_lo = grid[lower][np.argmin(pl[lower])]
        f_hi = grid[~lower][np.argmin(pl[~lower])]
        assert abs(f_lo - PAIR.f_minus) <= step
        assert abs(f_hi - PAIR.f_plus) <= step

    def test_two_dips_superpose_linearly(self):
        grid = np.linspace(3300.0, 3700.0, 201)
        both = synth_spectrum(SpectrumModel(PAIR, 0.03, 0.05, 80.0, 140.0), grid)
        only_minus = synth_spectrum(
            SpectrumModel(ResonancePair(PAIR.f_minus, PAIR.f_minus + 1e9),
                          0.03, 1e-15, 80.0, 1.0), grid
        )
        only_plus = synth_spectrum(
            SpectrumModel(ResonancePair(PAIR.f_plus - 1e9, PAIR.f_plus),
                          1e-15, 0.05, 1.0, 140.0), grid
        )
        combined = only_minus[:, 1] + only_plus[:, 1] - 1.0
        assert np.max(np.abs(both[:, 1] - combined)) < 1e-10

    def test_rejects_bad_grid(self):
        model = SpectrumModel(PAIR)
        with pytest.raises(ValueError):
            synth_spectrum(model, np.array([]))
        with pytest.raises(ValueError):
            synth_spectrum(model, np.array([3.0, 2.0, 1.0]))

    def test_rejects_bad_model(self):
        with pytest.raises(ValueError):
            SpectrumModel(PAIR, contrast_minus=1.5)
        with pytest.raises(ValueError):
            SpectrumModel(PAIR, linewidth_plus=0.0)
        with pytest.raises(ValueError):
            SpectrumModel(PAIR, baseline=-1.0)


class TestRabi:
    def test_value_at_zero_delay(self):
        model = RabiModel(a=0.7, t_a=40.0, f=20.0, phi=0.0, b=0.2, t_b=100.0, c=0.05)
        trace = synth_rabi(model, np.array([0.0]))
        assert trace[0, 1] == pytest.approx(0.7 + 0.2 + 0.05)

    def test_quarter_period(self):
        model = RabiModel(a=1.0, t_a=1e9, f=10.0, phi=0.0)
        trace = synth_rabi(model, np.array([25.0]))
        assert abs(trace[0, 1]) < 1e-9

    def test_envelope_decays_at_coherence_time(self):
        model = RabiModel(a=1.0, t_a=42.76, f=20.0, phi=0.0, b=0.5, t_b=200.0, c=0.1)
        tau = np.arange(0.0, 200.0, 2.0)
        trace = synth_rabi(model, tau)
        background = 0.5 * np.exp(-tau / 200.0) + 0.1
        osc = np.abs(trace[:, 1] - background)
        # envelope points: per-period maxima of the residual oscillation
        period = int(round(50.0 / 2.0))
        t_env, e_env = [], []
        for start in range(0, tau.size, period):
            j = start + int(np.argmax(osc[start:start + period]))
            t_env.append(tau[j])
            e_env.append(osc[j])
        t_env, e_env = np.array(t_env), np.array(e_env)
        # log-linear interpolation of the 1/e crossing recovers t_a
        k = int(np.argmax(e_env < np.exp(-1.0)))
        assert k > 0
        t0, t1 = t_env[k - 1], t_env[k]
        l0, l1 = np.log(e_env[k - 1]), np.log(e_env[k])
        crossing = t0 + (-1.0 - l0) * (t1 - t0) / (l1 - l0)
        assert abs(crossing - 42.76) <= 2.0 + 1e-9

    def test_pure_decay_when_amplitude_zero(self):
        model = RabiModel(a=0.0, t_a=10.0, f=15.0, phi=0.4, b=0.3, t_b=77.0, c=0.2)
        tau = np.linspace(0.0, 150.0, 101)
        trace = synth_rabi(model, tau)
        assert np.allclose(trace[:, 1], 0.3 * np.exp(-tau / 77.0) + 0.2, atol=1e-14)

    def test_rejects_negative_tau(self):
        with pytest.raises(ValueError):
            synth_rabi(RabiModel(a=1.0, t_a=10.0, f=1.0), np.array([-1.0, 0.0]))

    def test_rejects_bad_model(self):
        with pytest.raises(ValueError):
            RabiModel(a=1.0, t_a=0.0, f=1.0)
        with pytest.raises(ValueError):
            RabiModel(a=1.0, t_a=1.0, f=-1.0)


class TestNoise:
    def test_sigma_zero_is_identity(self):
        trace = synth_rabi(RabiModel(a=1.0, t_a=50.0, f=10.0), np.arange(0.0, 50.0))
        out = add_noise(trace, 0.0, seed=3)
        assert np.array_equal(out, trace)
        assert out is not trace

    def test_seed_reproducibility(self):
        trace = synth_rabi(RabiModel(a=1.0, t_a=50.0, f=10.0), np.arange(0.0, 50.0))
        a = add_noise(trace, 0.05, seed=1234)
        b = add_noise(trace, 0.05, seed=1234)
        assert np.array_equal(a, b)
        c = add_noise(trace, 0.05, seed=1235)
        assert not np.array_equal(a, c)

    def test_sample_std_matches_sigma(self):
        x = np.arange(10000, dtype=float)
        trace = np.column_stack([x, np.zeros_like(x)])
        noisy = add_noise(trace, 0.01, seed=99)
        std = float(np.std(noisy[:, 1] - trace[:, 1]))
        assert abs(std - 0.01) < 0.01 * 0.05

    def test_x_column_untouched(self):
        trace = np.column_stack([np.arange(20.0), np.ones(20)])
        noisy = add_noise(trace, 1.0, seed=0)
        assert np.array_equal(noisy[:, 0], trace[:, 0])

    @given(st.integers(0, 2**32 - 1), st.floats(0.0, 0.5))
    def test_pure_function_of_inputs(self, seed, sigma):
        trace = np.column_stack([np.arange(8.0), np.linspace(-1, 1, 8)])
        assert np.array_equal(
            add_noise(trace, sigma, seed), add_noise(trace, sigma, seed)
        )

    def test_rejects_negative_sigma(self):
        with pytest.raises(ValueError):
            add_noise(np.zeros((3, 2)), -0.1, seed=0)
