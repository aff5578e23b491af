"""Physical constants, frozen to CODATA 2018."""
from __future__ import annotations

import hashlib
import math
from dataclasses import astuple, dataclass, fields


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants used throughout the package.

    ``q_e`` is the magnitude of the elementary charge; the electron charge
    is ``-q_e``.
    """

    c: float
    hbar: float
    m_e: float
    q_e: float
    eps0: float
    alpha_el: float

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")
        derived = self.q_e**2 / (4 * math.pi * self.eps0 * self.hbar * self.c)
        if abs(derived / self.alpha_el - 1) > 1e-9:
            raise ValueError("alpha_el inconsistent with q_e, eps0, hbar, c")

    @property
    def q(self) -> float:
        """Electron charge (negative)."""
        return -self.q_e

    @property
    def alpha_derived(self) -> float:
        """Fine-structure constant recomputed from q_e, eps0, hbar and c."""
        return self.q_e**2 / (4 * math.pi * self.eps0 * self.hbar * self.c)

    @property
    def rest_energy(self) -> float:
        return self.m_e * self.c**2

    def fingerprint(self) -> str:
        text = ",".join(repr(v) for v in astuple(self))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


CODATA2018 = PhysicalConstants(
    c=299792458.0,
    hbar=1.054571817e-34,
    m_e=9.1093837015e-31,
    q_e=1.602176634e-19,
    eps0=8.8541878128e-12,
    alpha_el=7.2973525693e-3,
)
