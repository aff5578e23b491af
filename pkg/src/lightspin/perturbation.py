"""Closed-form precession frequencies and time-dependent perturbation theory.

The Dirac propagator element ``U_{0,0}^{++}`` is expanded in the
interaction.  Each field factor is split into ``exp(+i w t)`` and
``exp(-i w t)`` parts; an ordered product of such factors contributes a
term growing linearly in time only when the photon indices sum to zero.
Those secular coefficients are summed numerically over every momentum
path and energy sign.  All oracles here assume a sudden switch-on
(no ramps).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import CODATA2018 as C
from .dirac import SIGMA, MomentumLattice, SpinorTable, build_spinor_table
from .fields import LaserConfig, ScaledUnits, intensity, photonic_spin_density

__all__ = [
    "FOURTH_ORDER_PATHS",
    "RESONANCE_TOL",
    "ResonanceError",
    "Harmonicity",
    "FieldBounds",
    "FourthOrderTerm",
    "PerturbativeSummary",
    "omega_dirac",
    "omega_dirac_spin_density_form",
    "omega_phase",
    "omega_pauli",
    "harmonicity_ratio",
    "perturbative_bounds",
    "closing_wavelength",
    "spin_flip_probability",
    "spin_flip_probability_short",
    "u2_dirac",
    "u2_dirac_coefficient",
    "u2_dirac_simplified",
    "u2_dirac_dyson",
    "fourth_order_terms",
    "u4_dirac_secular",
    "u4_dirac_quadratic",
    "u2_pauli",
    "u2_pauli_limit",
    "pauli_components",
    "perturbative_summary",
]

# momentum paths (n1, n2, n3) of the fourth-order term 0 -> n1 -> n2 -> n3 -> 0
FOURTH_ORDER_PATHS = ((1, 2, 1), (1, 0, 1), (1, 0, -1), (-1, -2, -1), (-1, 0, -1), (-1, 0, 1))
# smallest allowed energy denominator, in units of m c^2
RESONANCE_TOL = 1e-6


class ResonanceError(ValueError):
    """An energy denominator (multiphoton resonance) is too close to zero."""


class Harmonicity(NamedTuple):
    """``xi = |q|E/(k^2 hbar c)`` and ``|q|E/(2 k m c^2)``; both below 1 for perturbation theory."""

    xi: float
    secondary: float

    @property
    def perturbative(self) -> bool:
        return self.xi < 1 and self.secondary < 1


class FieldBounds(NamedTuple):
    E_min: float
    E_max: float

    @property
    def nonempty(self) -> bool:
        return self.E_min < self.E_max


def omega_dirac(cfg: LaserConfig) -> float:
    """Spin precession frequency ``q^4 E^4 lambda^5/((2 pi)^5 hbar^2 m^2 c^5)`` (rad/s).

    Leading order in k for circular polarization.
    """
    return (C.q_e * cfg.E_hat) ** 4 * cfg.wavelength**5 / (
        (2 * math.pi) ** 5 * C.hbar**2 * C.m_e**2 * C.c**5)


def omega_dirac_spin_density_form(cfg: LaserConfig) -> float:
    """Precession frequency from the photonic spin density and intensity (rad/s).

    ``rho_sigma I lambda^4 alpha^2/(2 pi^2 m^2 c^3)``.  Equals ``omega_dirac``
    at ``eta = pi/2`` and carries the ``sin(eta)`` of the spin density
    otherwise.  The fine-structure constant is taken consistent with the
    other constants so that both forms agree to roundoff.
    """
    rho = photonic_spin_density(cfg)[0]
    return rho * intensity(cfg) * cfg.wavelength**4 * C.alpha_derived**2 / (
        2 * math.pi**2 * C.m_e**2 * C.c**3)


def omega_phase(cfg: LaserConfig) -> float:
    """Phase frequency ``q^4 E^4 lambda^6/((2 pi)^6 hbar^3 m c^4)`` (rad/s)."""
    return (C.q_e * cfg.E_hat) ** 4 * cfg.wavelength**6 / (
        (2 * math.pi) ** 6 * C.hbar**3 * C.m_e * C.c**4)


def omega_pauli(cfg: LaserConfig) -> float:
    """Nonrelativistic Pauli precession frequency ``q^2 E^2 lambda/(2 pi m^2 c^3)`` (rad/s)."""
    return (C.q_e * cfg.E_hat) ** 2 * cfg.wavelength / (2 * math.pi * C.m_e**2 * C.c**3)


def harmonicity_ratio(cfg: LaserConfig) -> Harmonicity:
    """Field-strength ratios that must stay below one for perturbation theory."""
    xi = C.q_e * cfg.E_hat / (cfg.k**2 * C.hbar * C.c)
    secondary = C.q_e * cfg.E_hat / (2 * cfg.k * C.m_e * C.c**2)
    return Harmonicity(xi, secondary)


def perturbative_bounds(wavelength: float, n_cycles: float) -> FieldBounds:
    """Field window in which a spin flip fits in ``n_cycles`` periods perturbatively.

    ``E_max`` keeps ``xi < 1``; ``E_min`` makes the precession period no
    longer than ``n_cycles`` laser periods.
    """
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    if not n_cycles >= 1:
        raise ValueError("cycle budget must be at least 1")
    c, hbar, m, q = C.c, C.hbar, C.m_e, C.q_e
    E_max = (2 * math.pi) ** 2 * c * hbar / (q * wavelength**2)
    E_min = ((2 * math.pi) ** 6 * c**6 * hbar**2 * m**2
             / (2 * n_cycles * q**4 * wavelength**6)) ** 0.25
    return FieldBounds(E_min, E_max)


def closing_wavelength(n_cycles: float) -> float:
    """Wavelength above which the perturbative field window is empty."""
    c, hbar, m, q = C.c, C.hbar, C.m_e, C.q_e
    a = (2 * math.pi) ** 2 * c * hbar / q
    b = ((2 * math.pi) ** 6 * c**6 * hbar**2 * m**2 / (2 * n_cycles * q**4)) ** 0.25
    return (a / b) ** 2


def spin_flip_probability(t, Omega):
    """Long-time spin-flip probability ``sin^2(Omega t/2)``."""
    return np.sin(0.5 * np.asarray(Omega) * np.asarray(t)) ** 2


def spin_flip_probability_short(t, Omega):
    """Short-time limit ``Omega^2 t^2/4`` of the spin-flip probability."""
    return 0.25 * (np.asarray(Omega) * np.asarray(t)) ** 2


# --- Dyson enumeration -------------------------------------------------------

def _table_for(cfg: LaserConfig, table: SpinorTable | None) -> SpinorTable:
    if table is None:
        return build_spinor_table(MomentumLattice(cfg.k, 4))
    if table.lattice.n_max < 2:
        raise ValueError("spinor table must cover |n| <= 2")
    return table


class _Dyson:
    """Field factors and energies in units of hbar*omega."""

    def __init__(self, cfg: LaserConfig, table: SpinorTable):
        self.units = ScaledUnits.from_config(cfg)
        self.table = table
        self.eta = cfg.eta
        self.energy = table.energy_scaled / self.units.kappa
        self.E0 = self.energy[table.lattice.index(0)]
        # |q|E/(2 k hbar omega); the sign of q drops out at even order
        self.half_g = 0.5 * self.units.xi

    def blocks(self, a: int, b: int):
        lat = self.table.lattice
        if b == a + 1:
            i = lat.index(a)
            return self.table.ay_up[i], self.table.az_up[i]
        if a == b + 1:
            i = lat.index(b)
            return self.table.ay_down[i], self.table.az_down[i]
        raise ValueError("only neighbouring modes couple")

    def factor(self, a: int, b: int, za: int, zb: int, photon: int) -> np.ndarray:
        """2x2 spin block of the ``exp(i*photon*w t)`` part of ``V_{a,b}``, over ``q E/(2k)``.

        ``sin(wt) Vy + sin(wt - eta) Vz`` gives ``-i(Vy + e^{-i eta} Vz)`` for
        ``photon = +1`` and ``+i(Vy + e^{i eta} Vz)`` for ``photon = -1``; at
        ``eta = pi/2`` these are ``-i Vy - Vz`` and ``i Vy - Vz``.
        """
        Y, Z = self.blocks(a, b)
        i = 0 if za > 0 else 2
        j = 0 if zb > 0 else 2
        Ys, Zs = Y[i:i + 2, j:j + 2], Z[i:i + 2, j:j + 2]
        return -photon * 1j * (Ys + np.exp(-1j * photon * self.eta) * Zs)

    def delta(self, n: int, zeta: int, photons) -> float:
        return self.E0 - zeta * self.energy[self.table.lattice.index(n)] - sum(photons)

    def guard(self, d: float):
        if abs(d) * self.units.kappa < RESONANCE_TOL:
            raise ResonanceError(f"energy denominator {d * self.units.kappa:.3e} m c^2 "
                                 "is within the resonance guard")


@dataclass(frozen=True)
class FourthOrderTerm:
    """One (path, energy signs, photon indices) term of the fourth-order propagator.

    ``coefficient`` and ``quadratic`` are the 2x2 spin matrices multiplying
    ``exp(-i E0 t/hbar) t`` (rad/s) and ``exp(-i E0 t/hbar) t^2`` (rad^2/s^2);
    both vanish for non-secular terms.
    """

    n: tuple
    zeta: tuple
    photons: tuple
    secular: bool
    degenerate: bool
    coefficient: np.ndarray
    quadratic: np.ndarray


def fourth_order_terms(cfg: LaserConfig, table: SpinorTable | None = None) -> list:
    """Enumerate all 6 x 8 x 16 fourth-order terms.

    Terms whose photon indices sum to zero grow in time.  If the middle
    intermediate state is the initial one (``n2 = 0``, positive energy,
    ``eta1 + eta2 = 0``) its denominator vanishes identically; that double
    pole yields a ``t^2`` part and a modified linear coefficient instead of
    the three-denominator product.

    Raises
    ------
    ResonanceError
        If any other denominator is within ``RESONANCE_TOL`` of zero.
    """
    dy = _Dyson(cfg, _table_for(cfg, table))
    omega = cfg.omega
    pref = dy.half_g**4
    zero = np.zeros((2, 2), dtype=complex)
    terms = []
    for path in FOURTH_ORDER_PATHS:
        n1, n2, n3 = path
        for zetas in itertools.product((1, -1), repeat=3):
            z1, z2, z3 = zetas
            for photons in itertools.product((1, -1), repeat=4):
                e1, e2, e3, e4 = photons
                secular = sum(photons) == 0
                if not secular:
                    terms.append(FourthOrderTerm(path, zetas, photons, False, False, zero, zero))
                    continue
                prod = (dy.factor(0, n3, 1, z3, e4) @ dy.factor(n3, n2, z3, z2, e3)
                        @ dy.factor(n2, n1, z2, z1, e2) @ dy.factor(n1, 0, z1, 1, e1))
                d1 = dy.delta(n1, z1, (e1,))
                d3 = dy.delta(n3, z3, (e1, e2, e3))
                degenerate = n2 == 0 and z2 == 1 and e1 + e2 == 0
                dy.guard(d1)
                dy.guard(d3)
                if degenerate:
                    f0 = (1j / d1) * (1j / d3)
                    lin = f0 * (-1j) * (1 / d1 + 1 / d3)
                    quad = 0.5 * f0
                else:
                    d2 = dy.delta(n2, z2, (e1, e2))
                    dy.guard(d2)
                    lin = (1j / d1) * (1j / d2) * (1j / d3)
                    quad = 0.0
                terms.append(FourthOrderTerm(
                    path, zetas, photons, True, degenerate,
                    pref * lin * omega * prod, pref * quad * omega**2 * prod))
    return terms


def u4_dirac_secular(cfg: LaserConfig, table: SpinorTable | None = None,
                     include_degenerate: bool = True) -> np.ndarray:
    """Matrix ``M`` (rad/s) with ``U4 ~ i M exp(-i E0 t/hbar) t``."""
    terms = fourth_order_terms(cfg, table)
    total = sum(t.coefficient for t in terms if t.secular and (include_degenerate or not t.degenerate))
    return total / 1j


def u4_dirac_quadratic(cfg: LaserConfig, table: SpinorTable | None = None) -> np.ndarray:
    """Coefficient of ``exp(-i E0 t/hbar) t^2`` in ``U4`` (rad^2/s^2)."""
    return sum(t.quadratic for t in fourth_order_terms(cfg, table))


def u2_dirac_dyson(cfg: LaserConfig, table: SpinorTable | None = None) -> np.ndarray:
    """Secular second-order coefficient (rad/s) by direct enumeration of paths."""
    dy = _Dyson(cfg, _table_for(cfg, table))
    total = np.zeros((2, 2), dtype=complex)
    for n1 in (1, -1):
        for z1 in (1, -1):
            for e1 in (1, -1):
                d1 = dy.delta(n1, z1, (e1,))
                dy.guard(d1)
                prod = dy.factor(0, n1, 1, z1, -e1) @ dy.factor(n1, 0, z1, 1, e1)
                total += -(1j / d1) * prod
    return dy.half_g**2 * cfg.omega * total


def u2_dirac_coefficient(cfg: LaserConfig, table: SpinorTable | None = None) -> np.ndarray:
    """Second-order secular coefficient (rad/s) from the r/t eight-fraction sum.

    The fractions are the circular-polarization result expressed through the
    spinor coefficients.  The overall prefactor is ``-i q^2 E^2/(2 k^2 hbar)``;
    this sign is the one that agrees with the path enumeration and with the
    free-electron ponderomotive phase.
    """
    table = _table_for(cfg, table)
    lat = table.lattice
    E = table.energy
    E0 = E[lat.index(0)]
    hw = C.hbar * cfg.omega
    I2, sx = np.eye(2), SIGMA["x"]
    s = np.zeros((2, 2), dtype=complex)
    for n in (1, -1):
        t, r = table.pair_coefficients(0, n)
        t2, r2 = table.pair_coefficients(n, 0)
        En = E[lat.index(n)]
        for den in (-En + E0 - hw, -En + E0 + hw, En + E0 - hw, En + E0 + hw):
            if abs(den) < RESONANCE_TOL * C.rest_energy:
                raise ResonanceError("second-order denominator within the resonance guard")
        s += r * r2 * (-I2 + sx) / (-En + E0 - hw)
        s += r * r2 * (-I2 - sx) / (-En + E0 + hw)
        s += t * t2 * (I2 - sx) / (En + E0 - hw)
        s += t * t2 * (I2 + sx) / (En + E0 + hw)
    return -1j * (C.q * cfg.E_hat / cfg.k) ** 2 / (2 * C.hbar) * s


def u2_dirac_simplified(t, cfg: LaserConfig) -> np.ndarray:
    """Closed form ``-i q^2 E^2/(k^2 m c^2 hbar) exp(-i E0 t/hbar) t * 1``.

    The rate is the ponderomotive energy of the standing wave over hbar.
    """
    rate = (C.q * cfg.E_hat / cfg.k) ** 2 / (C.rest_energy * C.hbar)
    return -1j * rate * np.exp(-1j * C.rest_energy * t / C.hbar) * t * np.eye(2)


def u2_dirac(t, cfg: LaserConfig, table: SpinorTable | None = None) -> np.ndarray:
    """Secular part of the second-order propagator ``U_{2;0,0}^{++}(t)``.

    Diagonal: second order produces no spin flip.
    """
    if abs(cfg.eta - math.pi / 2) > 1e-12:
        raise ValueError("the second-order fraction form assumes eta = pi/2")
    M = u2_dirac_coefficient(cfg, table)
    M = np.diag(np.diag(M))
    return M * np.exp(-1j * C.rest_energy * t / C.hbar) * t


def u2_pauli(t, cfg: LaserConfig) -> np.ndarray:
    """Second-order nonrelativistic Pauli propagator from the magnetic coupling.

    ``i (q^2 E^2 hbar/(2 m^2 c^2)) (K - hbar w sigma_x)/(K^2 - (hbar w)^2) t``
    with ``K = k^2 hbar^2/(2m)``.  The constant ponderomotive phase is
    gauged away.  The identity part is a positive energy shift, so it
    enters with ``-i`` for ``K < hbar w``.
    """
    K = (cfg.k * C.hbar) ** 2 / (2 * C.m_e)
    hw = C.hbar * cfg.omega
    den = K**2 - hw**2
    if abs(den) < (RESONANCE_TOL * C.rest_energy) ** 2:
        raise ResonanceError("Pauli second-order denominator within the resonance guard")
    amp = (C.q * cfg.E_hat) ** 2 * C.hbar / (2 * C.m_e**2 * C.c**2)
    return 1j * amp * (K * np.eye(2) - hw * SIGMA["x"]) / den * t


def u2_pauli_limit(t, cfg: LaserConfig) -> np.ndarray:
    """Small-k limit ``i (-Omega_P hbar k/(4 m c) + (Omega_P/2) sigma_x) t``."""
    Wp = omega_pauli(cfg)
    return 1j * (-Wp * C.hbar * cfg.k / (4 * C.m_e * C.c) * np.eye(2) + 0.5 * Wp * SIGMA["x"]) * t


def pauli_components(M: np.ndarray) -> dict:
    """Decompose a 2x2 matrix into identity and Pauli-matrix coefficients."""
    basis = {"1": np.eye(2), "x": SIGMA["x"], "y": SIGMA["y"], "z": SIGMA["z"]}
    return {k: complex(np.trace(b.conj().T @ M) / 2) for k, b in basis.items()}


@dataclass(frozen=True)
class PerturbativeSummary:
    """Closed-form frequencies (rad/s), harmonicity and field bounds (V/m)."""

    Omega: float
    Omega_phi: float
    Omega_P: float
    xi: float
    secondary: float
    E_min: float
    E_max: float
    n_cycles: float

    @property
    def nonempty(self) -> bool:
        return self.E_min < self.E_max

    @property
    def perturbative(self) -> bool:
        return self.xi < 1 and self.secondary < 1


def perturbative_summary(cfg: LaserConfig, n_cycles: float | None = None) -> PerturbativeSummary:
    """Evaluate all closed forms for ``cfg``; ``n_cycles`` defaults to the run length."""
    if n_cycles is None:
        n_cycles = max(cfg.T_cycles, 1.0)
    h = harmonicity_ratio(cfg)
    b = perturbative_bounds(cfg.wavelength, n_cycles)
    return PerturbativeSummary(omega_dirac(cfg), omega_phase(cfg), omega_pauli(cfg), h.xi,
                               h.secondary, b.E_min, b.E_max, float(n_cycles))
