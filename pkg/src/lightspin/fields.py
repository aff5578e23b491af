"""Laser configuration, unit scaling and the standing-wave fields.

Two elliptically polarized beams of equal wavelength and amplitude but
opposite helicity counterpropagate along x.  All functions here take SI
inputs and return SI values; ``ScaledUnits`` is the single place where
SI quantities are mapped onto the dimensionless pair (kappa, xi) used by
the dynamics modules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA2018 as C

__all__ = [
    "LaserConfig",
    "ScaledUnits",
    "window",
    "window_cycles",
    "standing_fields",
    "beam_fields",
    "beam_potentials",
    "combined_potential_A",
    "photonic_spin_density",
    "beam_spin_density",
    "intensity",
]


@dataclass(frozen=True)
class LaserConfig:
    """Full definition of one laser-electron experiment.

    Parameters
    ----------
    wavelength : float
        Laser wavelength lambda in m.
    E_hat : float
        Peak electric field of each beam in V/m.
    eta : float
        Ellipticity phase in (-pi, pi]; pi/2 is circular.
    delta_T : float
        Duration of each sin^2 ramp in s.
    T_total : float
        Total interaction time in s.
    """

    wavelength: float
    E_hat: float
    eta: float = math.pi / 2
    delta_T: float = 0.0
    T_total: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise ValueError("wavelength must be positive and finite")
        if not (math.isfinite(self.E_hat) and self.E_hat >= 0):
            raise ValueError("E_hat must be non-negative and finite")
        if not (-math.pi < self.eta <= math.pi):
            raise ValueError("eta must lie in (-pi, pi]")
        if not (self.delta_T >= 0 and math.isfinite(self.T_total)):
            raise ValueError("delta_T must be non-negative")
        # small slack so configs built from whole cycles are not rejected by rounding
        if 2 * self.delta_T > self.T_total * (1 + 1e-12):
            raise ValueError("T_total must be at least 2*delta_T")

    @classmethod
    def from_cycles(cls, wavelength, E_hat, eta=math.pi / 2, delta_T_cycles=0.0,
                    T_cycles=0.0) -> "LaserConfig":
        """Build a config with times given in laser periods."""
        period = wavelength / C.c
        return cls(wavelength, E_hat, eta, delta_T_cycles * period, T_cycles * period)

    @property
    def k(self) -> float:
        return 2 * math.pi / self.wavelength

    @property
    def omega(self) -> float:
        return self.k * C.c

    @property
    def period(self) -> float:
        return self.wavelength / C.c

    @property
    def delta_T_cycles(self) -> float:
        return self.delta_T / self.period

    @property
    def T_cycles(self) -> float:
        return self.T_total / self.period


@dataclass(frozen=True)
class ScaledUnits:
    """Dimensionless parameters of the dynamics.

    ``kappa = hbar k/(m c)`` is the photon momentum in Compton units and
    ``xi = |q| E_hat/(k^2 hbar c)`` the field strength parameter.  Time is
    measured in laser periods ``time_unit``; energies in ``m c^2``.
    """

    kappa: float
    xi: float
    time_unit: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.xi >= 0:
            raise ValueError("xi must be non-negative")

    @classmethod
    def from_config(cls, cfg: LaserConfig) -> "ScaledUnits":
        kappa = C.hbar * cfg.k / (C.m_e * C.c)
        xi = C.q_e * cfg.E_hat / (cfg.k**2 * C.hbar * C.c)
        return cls(kappa, xi, cfg.period)

    @classmethod
    def from_scaled(cls, kappa: float, xi: float) -> "ScaledUnits":
        wavelength = 2 * math.pi * C.hbar / (kappa * C.m_e * C.c)
        return cls(kappa, xi, wavelength / C.c)

    @property
    def wavelength(self) -> float:
        return 2 * math.pi * C.hbar / (self.kappa * C.m_e * C.c)

    @property
    def E_hat(self) -> float:
        k = 2 * math.pi / self.wavelength
        return self.xi * k**2 * C.hbar * C.c / C.q_e

    @property
    def energy_unit(self) -> float:
        return C.rest_energy

    @property
    def omega_scaled(self) -> float:
        """Laser photon energy hbar*omega in units of m c^2 (equals kappa)."""
        return self.kappa

    def to_seconds(self, cycles):
        return np.asarray(cycles) * self.time_unit

    def to_cycles(self, seconds):
        return np.asarray(seconds) / self.time_unit


def window_cycles(s, ramp: float, total: float):
    """Turn-on/turn-off envelope with time and durations in laser periods."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s >= 0) & (s <= total)
    if ramp <= 0:
        out[inside] = 1.0
        return out[()] if out.ndim == 0 else out
    up = inside & (s < ramp)
    down = inside & (s > total - ramp)
    flat = inside & ~up & ~down
    out[up] = np.sin(np.pi * s[up] / (2 * ramp)) ** 2
    out[down] = np.sin(np.pi * (total - s[down]) / (2 * ramp)) ** 2
    out[flat] = 1.0
    return out[()] if out.ndim == 0 else out


def window(t, cfg: LaserConfig):
    """Envelope w(t) in [0, 1]; zero outside [0, T].

    With ``delta_T = 0`` the field is simply on over the closed interval.
    """
    if cfg.delta_T <= 0:
        return window_cycles(np.asarray(t) / cfg.period, 0.0, cfg.T_cycles)
    return window_cycles(np.asarray(t) / cfg.period, cfg.delta_T_cycles, cfg.T_cycles)


def _phases(x, t, cfg):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return cfg.k * x, cfg.omega * t


def _vec(y, z):
    y, z = np.broadcast_arrays(y, z)
    return np.stack([np.zeros_like(y), y, z], axis=-1)


def standing_fields(x, t, cfg: LaserConfig):
    """Total E (V/m) and B (T) of the standing wave without envelope.

    Returns arrays of shape ``broadcast(x, t).shape + (3,)``.
    """
    kx, wt = _phases(x, t, cfg)
    E0 = cfg.E_hat
    E = 2 * E0 * np.cos(kx)[..., None] * _vec(np.cos(wt), np.cos(wt - cfg.eta))
    B = (2 * E0 / C.c) * np.sin(kx)[..., None] * _vec(-np.sin(wt - cfg.eta), np.sin(wt))
    return E, B


def beam_fields(x, t, cfg: LaserConfig):
    """Fields of the two beams, ``(E1, E2, B1, B2)``."""
    kx, wt = _phases(x, t, cfg)
    E0, eta = cfg.E_hat, cfg.eta
    out = []
    for sgn in (1.0, -1.0):
        ph = kx - sgn * wt
        out.append((E0 * _vec(np.cos(ph), np.cos(ph + sgn * eta)),
                    (E0 / C.c) * _vec(-sgn * np.cos(ph + sgn * eta), sgn * np.cos(ph))))
    (E1, B1), (E2, B2) = out
    return E1, E2, B1, B2


def beam_potentials(x, t, cfg: LaserConfig):
    """Coulomb-gauge magnetic and electric vector potentials of each beam.

    Returns
    -------
    A1, A2, C1, C2 : ndarray
        ``A`` in V s/m and ``C`` in V s/m; ``E = -dA/dt = -c curl C``,
        ``B = curl A = -(dC/dt)/c``.
    """
    kx, wt = _phases(x, t, cfg)
    a = -cfg.E_hat / cfg.omega
    eta = cfg.eta
    A, Cv = [], []
    for sgn in (1.0, -1.0):
        ph = kx - sgn * wt
        A.append(a * _vec(-sgn * np.sin(ph), -sgn * np.sin(ph + sgn * eta)))
        # y component taken without the beam sign so that B = -(dC/dt)/c holds for both beams
        Cv.append(a * _vec(np.sin(ph + sgn * eta), -np.sin(ph)))
    return A[0], A[1], Cv[0], Cv[1]


def combined_potential_A(x, t, cfg: LaserConfig):
    """Vector potential of the standing wave including the envelope."""
    kx, wt = _phases(x, t, cfg)
    amp = -2 * np.asarray(window(t, cfg)) * cfg.E_hat / cfg.omega
    return (amp * np.cos(kx))[..., None] * _vec(np.sin(wt), np.sin(wt - cfg.eta))


def photonic_spin_density(cfg: LaserConfig) -> np.ndarray:
    """Total photonic spin density of the standing wave in J s/m^3."""
    mag = C.eps0 * cfg.E_hat**2 * cfg.wavelength * math.sin(cfg.eta) / (math.pi * C.c)
    return np.array([mag, 0.0, 0.0])


def beam_spin_density(cfg: LaserConfig) -> np.ndarray:
    """Spin density carried by a single beam (half the total)."""
    return 0.5 * photonic_spin_density(cfg)


def intensity(cfg: LaserConfig) -> float:
    """Intensity of each beam, eps0 c E_hat^2, in W/m^2."""
    return C.eps0 * C.c * cfg.E_hat**2
