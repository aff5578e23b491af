"""
Where perturbation theory applies
=================================

Two conditions bound the useful field strength.  The field must stay
below the harmonic limit xi < 1 (E_max).  It must also be strong enough
that a full spin flip fits into a budget of N laser cycles (E_min).
E_min falls as N^(-1/4) and E_max as lambda^(-2), so the window closes
above a critical wavelength.
"""

import numpy as np

from lightspin import perturbative_bounds
from lightspin.perturbation import closing_wavelength

for N in (1e3, 5e3, 1e5):
    print(f"N = {N:8.0f}: window closes at lambda = {closing_wavelength(N) * 1e9:.3f} nm")

print("\n lambda [nm]      E_min [V/m]      E_max [V/m]  nonempty (N = 5000)")
for lam in np.geomspace(0.02, 2.0, 9) * 1e-9:
    b = perturbative_bounds(lam, 5000)
    print(f"{lam * 1e9:11.4f}  {b.E_min:15.4e}  {b.E_max:15.4e}  {b.nonempty}")
