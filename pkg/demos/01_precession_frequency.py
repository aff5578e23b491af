"""
Spin precession of an electron at rest
======================================

A free electron starts at rest with spin up in a circularly polarized
standing x-ray wave (0.159 nm, 2.057e14 V/m per beam).  The light slowly
rotates the spin.  This script propagates the momentum-space Dirac
equation over about 1.2 precession periods, fits a cosine to <S_z>(t) and
compares the fitted frequency with the closed-form leading-order result.
Runtime is about 20 s.
"""

import math

import numpy as np

from lightspin import (IntegratorSettings, LaserConfig, ScaledUnits, extract_precession_frequency,
                       omega_dirac, propagate)

# Laser parameters; times are given in laser periods
cfg = LaserConfig.from_cycles(wavelength=0.159e-9, E_hat=2.057e14, eta=math.pi / 2,
                              delta_T_cycles=5, T_cycles=26000)
units = ScaledUnits.from_config(cfg)
print(f"kappa = hbar k/(m c) = {units.kappa:.6f},  xi = |q| E/(k^2 hbar c) = {units.xi:.4f}")

# Propagate; the default step count keeps the norm drift below 1e-8
series = propagate("dirac", cfg, IntegratorSettings(sample_every=10))
print(f"{series.times.size} samples, max norm drift {series.max_norm_drift:.1e}, "
      f"{series.metadata['wall_seconds']:.1f} s")

# Fit A cos(Omega t + phi) + C on the flat top of the envelope
fit = extract_precession_frequency(series)
Omega = omega_dirac(cfg)
print(f"fitted Omega = {fit.omega_fit:.4e} rad/s")
print(f"closed form  = {Omega:.4e} rad/s   (ratio {fit.omega_fit / Omega:.4f})")

# A coarse text view of the precession
for t, sz in zip(series.t_cycles[::260], series.s_z[::260]):
    bar = "#" * int(round(20 * (sz + 0.5)))
    print(f"{t:8.0f} cycles  s_z = {sz:+.3f}  {bar}")

# The remaining few percent is the next order in xi: the run sits at xi ~ 0.67
print(f"spin flipped by t = {series.t_cycles[np.argmin(series.s_z)]:.0f} cycles")
