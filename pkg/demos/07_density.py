"""
Electron density at the field nodes
===================================

While the spin precesses, the electron wave packet is also redistributed
in space by the ponderomotive potential.  ``lambda * rho(lambda/4)`` is
the density at a node of the electric field, normalized so that a
uniform distribution gives 1.  Its time average exceeds 1 and grows with
the field.
"""

import math

from lightspin import IntegratorSettings, LaserConfig, density_statistics, propagate

for E in (1.0e14, 1.5e14, 2.057e14):
    cfg = LaserConfig.from_cycles(0.159e-9, E, math.pi / 2, 5, 26000)
    series = propagate("pauli-rel", cfg, IntegratorSettings(sample_every=10))
    st = density_statistics(series)
    period = f"{st.envelope_period / cfg.period:.0f} cycles" if st.envelope_period else "n/a"
    print(f"E = {E:.3e} V/m: mean {st.mean:.4f}, range [{st.min:.4f}, {st.max:.4f}], "
          f"dominant slow period {period}")
