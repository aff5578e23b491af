import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightspin.analysis import (anharmonicity_score, density_statistics, ellipticity_law,
                                extract_precession_frequency, flat_top_mask, scaling_exponent)
from lightspin.fields import LaserConfig
from lightspin.integrator import IntegratorSettings, propagate


@settings(max_examples=40, deadline=None)
# runs are sized to at least 1.2 precession periods
@given(st.floats(1.2, 20.0), st.floats(-math.pi, math.pi), st.floats(0.1, 0.5),
       st.floats(-0.05, 0.05))
def test_recovers_synthetic_cosine(cycles, phase, amp, offset):
    W = 2 * math.pi * 3.7e11
    T = cycles * 2 * math.pi / W
    t = np.linspace(0, T, 400)
    y = amp * np.cos(W * t + phase) + offset
    fit = extract_precession_frequency((t, y))
    assert fit.usable
    assert fit.omega_fit == pytest.approx(W, rel=1e-8)
    assert fit.residual_rms < 1e-6 * amp


def test_exact_frequency_and_phase():
    W = 5.48e14
    t = np.linspace(0, 3e-14, 2000)
    fit = extract_precession_frequency((t, 0.5 * np.cos(W * t)))
    assert fit.omega_fit == pytest.approx(W, rel=1e-10)
    assert fit.amplitude == pytest.approx(0.5, rel=1e-10)
    assert abs(fit.phase) < 1e-9 and abs(fit.offset) < 1e-10


def test_noisy_cosine():
    rng = np.random.default_rng(1)
    W = 1.0e3
    t = np.linspace(0, 0.02, 500)
    y = 0.5 * np.cos(W * t) + 1e-3 * rng.normal(size=t.size)
    fit = extract_precession_frequency((t, y))
    assert fit.omega_fit == pytest.approx(W, rel=1e-3)
    assert fit.residual_rms == pytest.approx(1e-3, rel=0.2)
    assert anharmonicity_score  # exported


def test_no_crossing_is_flagged():
    t = np.linspace(0, 1, 50)
    fit = extract_precession_frequency((t, 0.5 * np.cos(0.5 * t)))
    assert not fit.usable
    assert fit.omega_fit == pytest.approx(0.5, rel=1e-2)
    flat = extract_precession_frequency((t, np.full_like(t, 0.5)))
    assert not flat.usable and flat.omega_fit == 0.0


def test_needs_samples():
    with pytest.raises(ValueError):
        extract_precession_frequency((np.arange(3.0), np.zeros(3)))


def test_scaling_exponent():
    E = np.array([1.0, 1.3, 1.6, 2.0]) * 1e14
    fit = scaling_exponent(list(zip(E, 3e-42 * E**4)))
    assert fit.slope == pytest.approx(4.0, abs=1e-12)
    assert np.abs(fit.residuals).max() < 1e-12
    with pytest.raises(ValueError):
        scaling_exponent([(1.0, 1.0), (1.0, 2.0)])
    with pytest.raises(ValueError):
        scaling_exponent([(1.0, -1.0), (2.0, 2.0)])


def test_ellipticity_law():
    etas = [math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2]
    law = ellipticity_law([(e, 7.0 * math.sin(e)) for e in etas])
    assert law.max_deviation < 1e-15
    with pytest.raises(ValueError):
        ellipticity_law([(math.pi / 4, 1.0)])
    with pytest.raises(ValueError):
        ellipticity_law([(math.pi / 2, 1.0), (0.0, 0.0)])


def test_on_simulated_run():
    cfg = LaserConfig.from_cycles(0.159e-9, 2.057e14, math.pi / 2, 5.0, 120.0)
    series = propagate("pauli-rel", cfg, IntegratorSettings(sample_every=5))
    mask = flat_top_mask(series)
    assert mask.sum() == len(range(5, 116, 5))
    stats = density_statistics(series)
    assert stats.min <= stats.mean <= stats.max
    with pytest.raises(ValueError):
        density_statistics(propagate("dirac", LaserConfig.from_cycles(
            0.159e-9, 1e13, math.pi / 2, 1.0, 4.0), IntegratorSettings(steps_per_cycle=2048)))
