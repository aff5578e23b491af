"""Momentum-space Pauli equations in the standing wave.

Amplitudes ``c_n^s`` are stored with shape ``(2*n_max + 1, 2)`` where the
second axis is ``(up, down)``.  The relativistic variant carries the
light-spin-density coupling proportional to ``sin(eta) sigma_x``; the
nonrelativistic variant drops it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA2018 as C
from .dirac import SIGMA, MomentumLattice, _amps
from .fields import LaserConfig, window

__all__ = [
    "PauliModeState",
    "pauli_initial_state",
    "pauli_terms",
    "pauli_rel_rhs",
    "pauli_nonrel_rhs",
    "pauli_spin_z",
    "position_density",
    "density_quarter",
]


@dataclass
class PauliModeState:
    """Amplitudes ``c_n^s`` (shape ``(2*n_max+1, 2)``) at time ``t`` in s."""

    amplitudes: np.ndarray
    t: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def pauli_initial_state(lattice: MomentumLattice) -> PauliModeState:
    c = np.zeros((lattice.size, 2), dtype=complex)
    c[lattice.index(0), 0] = 1.0
    return PauliModeState(c, 0.0)


def _shift(c: np.ndarray, m: int) -> np.ndarray:
    """``out[n] = c[n - m]`` with zeros beyond the lattice edge."""
    out = np.zeros_like(c)
    if m > 0:
        out[m:] = c[:-m]
    elif m < 0:
        out[:m] = c[-m:]
    else:
        out[:] = c
    return out


def pauli_terms(state, t: float, cfg: LaserConfig) -> dict:
    """Each Hamiltonian term applied to the state, in J.

    Returns a dict with keys ``kinetic``, ``ponderomotive``, ``magnetic``
    and ``spin_density``; ``i hbar dc/dt`` is their sum.
    """
    c = _amps(state)
    n_max = (c.shape[0] - 1) // 2
    n = np.arange(-n_max, n_max + 1)
    k, E0, eta = cfg.k, cfg.E_hat, cfg.eta
    w = float(window(t, cfg))
    wt = cfg.omega * t
    m, q, hbar = C.m_e, C.q, C.hbar

    kinetic = (n**2 * k**2 * hbar**2 / (2 * m))[:, None] * c
    ladder2 = _shift(c, 2) + 2 * c + _shift(c, -2)
    pond = (q**2 * E0**2 * w**2 / (2 * k**2 * m * C.c**2)) * (
        1 - math.cos(eta) * math.cos(2 * wt - eta))
    spin_op = -SIGMA["y"] * math.sin(wt - eta) + SIGMA["z"] * math.sin(wt)
    mag = 1j * hbar * q * E0 * w / (2 * m * C.c)
    ladder1 = _shift(c, 1) - _shift(c, -1)
    sd = hbar * q**2 * E0**2 * w**2 * math.sin(eta) / (4 * k * m**2 * C.c**3)
    return {
        "kinetic": kinetic,
        "ponderomotive": pond * ladder2,
        "magnetic": mag * ladder1 @ spin_op.T,
        "spin_density": sd * ladder2 @ SIGMA["x"].T,
    }


def pauli_rel_rhs(state, t: float, cfg: LaserConfig) -> np.ndarray:
    """``dc/dt`` (1/s) of the relativistic Pauli equation with the spin-density term."""
    terms = pauli_terms(state, t, cfg)
    return -1j * sum(terms.values()) / C.hbar


def pauli_nonrel_rhs(state, t: float, cfg: LaserConfig) -> np.ndarray:
    """``dc/dt`` (1/s) of the nonrelativistic Pauli equation."""
    terms = pauli_terms(state, t, cfg)
    del terms["spin_density"]
    return -1j * sum(terms.values()) / C.hbar


def pauli_spin_z(state) -> float:
    """Spin expectation ``<S_z>`` in units of hbar."""
    c = _amps(state)
    return 0.5 * float(np.sum(np.abs(c[:, 0]) ** 2 - np.abs(c[:, 1]) ** 2))


def position_density(state, x, lattice: MomentumLattice) -> np.ndarray:
    """Electron density ``|psi_up(x)|^2 + |psi_down(x)|^2`` in 1/m.

    Parameters
    ----------
    state : PauliModeState or ndarray
        Amplitudes on ``lattice``.
    x : float or ndarray
        Positions in m.
    """
    c = _amps(state)
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * np.multiply.outer(x, lattice.n * lattice.k))
    psi = math.sqrt(lattice.k / (2 * math.pi)) * (phase @ c)
    return np.sum(np.abs(psi) ** 2, axis=-1)


def density_quarter(amplitudes: np.ndarray) -> np.ndarray:
    """``lambda * rho(lambda/4)`` for amplitudes of shape ``(..., N, 2)``."""
    c = np.asarray(amplitudes)
    n_max = (c.shape[-2] - 1) // 2
    phase = 1j ** (np.arange(-n_max, n_max + 1) % 4)
    psi = np.einsum("n,...ns->...s", phase, c)
    return np.sum(np.abs(psi) ** 2, axis=-1)
