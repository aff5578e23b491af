"""
Scaling of the precession frequency with the field
==================================================

In the relativistic models the precession frequency grows as the fourth
power of the field amplitude; in the nonrelativistic Pauli model it
grows as the square.  Each run below is sized to 1.2 predicted
precession periods.  The relativistic Pauli model stands in for the
Dirac model to keep the runtime short; ``lightspin sweep --model dirac``
repeats the Dirac sweep.
"""

import math

from lightspin import (IntegratorSettings, LaserConfig, ScaledUnits, extract_precession_frequency,
                       omega_dirac, omega_pauli, propagate, scaling_exponent)

fields = [1.0e14, 1.3e14, 1.6e14, 2.0e14]
for model, closed in (("pauli-rel", omega_dirac), ("pauli-nonrel", omega_pauli)):
    points = []
    for E in fields:
        probe = LaserConfig(0.159e-9, E)
        cycles = math.ceil(1.2 * probe.omega / closed(probe)) + 10
        cfg = LaserConfig.from_cycles(0.159e-9, E, math.pi / 2, 5, cycles)
        series = propagate(model, cfg, IntegratorSettings(sample_every=max(1, cycles // 2000)))
        w = extract_precession_frequency(series).omega_fit
        points.append((E, w))
        print(f"{model:13s} E = {E:.2e} V/m  xi = {ScaledUnits.from_config(cfg).xi:.3f}  "
              f"Omega_fit = {w:.4e}  closed form = {closed(cfg):.4e}")
    print(f"{model:13s} log-log exponent = {scaling_exponent(points).slope:.3f}\n")
