"""
Perturbation theory for the spin flip
=====================================

Second order in the field gives a spin-independent phase.  Fourth order
gives the first spin-dependent term.  Its sigma_x part sets the
precession frequency Omega.  This script evaluates the full
fourth-order sum over momentum paths, energy signs and photon
orders, and compares it with the closed forms.
"""

from lightspin import LaserConfig, omega_dirac, omega_phase
from lightspin.perturbation import (fourth_order_terms, pauli_components, u2_dirac,
                                    u2_dirac_dyson, u2_dirac_simplified, u4_dirac_secular)

cfg = LaserConfig(0.159e-9, 2.057e14)

t = 1e-19
print("second-order propagator (secular part) at t = 1e-19 s:")
print(u2_dirac(t, cfg))
print("closed form:", u2_dirac_simplified(t, cfg)[0, 0])
print("path enumeration rate:", u2_dirac_dyson(cfg)[0, 0], "rad/s")

terms = fourth_order_terms(cfg)
print(f"\nfourth order: {len(terms)} terms, {sum(x.secular for x in terms)} secular, "
      f"{sum(x.degenerate for x in terms)} with a vanishing middle denominator")

parts = pauli_components(u4_dirac_secular(cfg))
print(f"sigma_x part / (Omega/2)  = {parts['x'].real / (0.5 * omega_dirac(cfg)):.10f}")
print(f"identity part / Omega_phi = {parts['1'].real / omega_phase(cfg):.5f}")
print("(the identity part is a spin-independent phase, one quarter of Omega_phi)")
