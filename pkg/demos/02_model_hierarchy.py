"""
Dirac, relativistic Pauli and nonrelativistic Pauli
===================================================

The relativistic Pauli equation adds a single term to the Pauli equation:
a coupling of the electron spin to the photonic spin density.  This
script runs all three models at the same parameters and compares their
precession frequencies.  The relativistic Pauli model follows the Dirac
model closely, while the nonrelativistic model precesses roughly 1/xi^2
times faster through a different mechanism.
"""

import math

from lightspin import (IntegratorSettings, LaserConfig, ScaledUnits, extract_precession_frequency,
                       omega_dirac, omega_pauli, propagate)

cfg = LaserConfig.from_cycles(0.159e-9, 2.057e14, math.pi / 2, 5, 26000)
xi = ScaledUnits.from_config(cfg).xi

fits = {}
for model in ("dirac", "pauli-rel", "pauli-nonrel"):
    series = propagate(model, cfg, IntegratorSettings(sample_every=10))
    fits[model] = extract_precession_frequency(series).omega_fit
    print(f"{model:13s} Omega_fit = {fits[model]:.4e} rad/s  ({series.metadata['wall_seconds']:.1f} s)")

print(f"\nrel. Pauli / Dirac       = {fits['pauli-rel'] / fits['dirac']:.5f}")
print(f"nonrel. Pauli / Dirac    = {fits['pauli-nonrel'] / fits['dirac']:.3f}"
      f"   (1/xi^2 = {1 / xi**2:.3f})")
print(f"nonrel. Pauli / Omega_P  = {fits['pauli-nonrel'] / omega_pauli(cfg):.4f}"
      f"   (Omega_P is leading order; the xi^4 correction is about xi^2/2 = {xi**2 / 2:.3f})")
print(f"Dirac / Omega            = {fits['dirac'] / omega_dirac(cfg):.4f}")
