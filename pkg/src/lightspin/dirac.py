"""Momentum-space Dirac equation for an electron in the standing wave.

The wave function is expanded in plane waves ``exp(i n k x)`` times the
free bispinors ``u_n^gamma``.  Amplitudes are stored as complex arrays of
shape ``(2*n_max + 1, 4)``; the second axis runs over
``gamma = (+up, +down, -up, -down)`` where the sign is that of the energy.
Matrices are in the standard Dirac representation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import CODATA2018 as C
from .fields import LaserConfig, window

__all__ = [
    "GAMMA_LABELS",
    "SIGMA",
    "ALPHA_Y",
    "ALPHA_Z",
    "BETA",
    "MomentumLattice",
    "DiracModeLabel",
    "SpinorTable",
    "DiracModeState",
    "mode_energy",
    "build_spinor_table",
    "interaction_element",
    "coupling_block",
    "dirac_rhs",
    "dirac_spin_z",
    "dirac_initial_state",
]

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_Z2 = np.zeros((2, 2), dtype=complex)
ALPHA_Y = np.block([[_Z2, SIGMA["y"]], [SIGMA["y"], _Z2]])
ALPHA_Z = np.block([[_Z2, SIGMA["z"]], [SIGMA["z"], _Z2]])
BETA = np.diag([1.0, 1.0, -1.0, -1.0])

# energy sign and spin of each gamma slot
GAMMA_LABELS = ((+1, "up"), (+1, "down"), (-1, "up"), (-1, "down"))
_SPIN_SIGN = np.array([1.0, -1.0, 1.0, -1.0])


@dataclass(frozen=True)
class MomentumLattice:
    """Symmetric set of momentum modes ``n = -n_max..n_max`` (momentum n*hbar*k)."""

    k: float
    n_max: int

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("k must be positive")
        if int(self.n_max) != self.n_max or self.n_max < 4:
            raise ValueError("n_max must be an integer >= 4")

    @classmethod
    def from_config(cls, cfg: LaserConfig, n_max: int) -> "MomentumLattice":
        return cls(cfg.k, n_max)

    @property
    def size(self) -> int:
        return 2 * self.n_max + 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def index(self, n: int) -> int:
        if abs(n) > self.n_max:
            raise IndexError(f"mode {n} outside lattice |n| <= {self.n_max}")
        return int(n) + self.n_max


@dataclass(frozen=True)
class DiracModeLabel:
    """One basis state: momentum index, energy sign and spin."""

    n: int
    zeta: int
    spin: str

    def __post_init__(self):
        if (self.zeta, self.spin) not in GAMMA_LABELS:
            raise ValueError(f"invalid (zeta, spin) = {(self.zeta, self.spin)}")

    @property
    def gamma(self) -> int:
        return GAMMA_LABELS.index((self.zeta, self.spin))


def _gamma_index(g) -> int:
    if isinstance(g, (int, np.integer)):
        if not 0 <= g < 4:
            raise IndexError("gamma index must be in 0..3")
        return int(g)
    if isinstance(g, DiracModeLabel):
        return g.gamma
    return GAMMA_LABELS.index(tuple(g))


def mode_energy(n, lattice: MomentumLattice):
    """Free energy sqrt((m c^2)^2 + (n c k hbar)^2) in J."""
    n = np.asarray(n)
    if np.any(np.abs(n) > lattice.n_max):
        raise IndexError("mode index outside lattice")
    p = n * C.c * lattice.k * C.hbar
    return np.hypot(C.rest_energy, p)


@dataclass(frozen=True)
class SpinorTable:
    """Bispinors, energies and neighbour coupling blocks on a lattice.

    Attributes
    ----------
    energy : ndarray
        ``E_n`` in J for each lattice mode.
    d_plus, d_minus : ndarray
        Spinor coefficients; ``d_minus`` carries the sign of n.
    spinors : ndarray
        Shape ``(N, 4, 4)``; ``spinors[i][:, gamma]`` is ``u_n^gamma``.
    t, r : ndarray
        Coefficients for adjacent pairs ``(n, n+1)``.
    ay_up, az_up : ndarray
        ``u_n^dagger alpha_{y,z} u_{n+1}``, shape ``(N-1, 4, 4)``.
    ay_down, az_down : ndarray
        ``u_{n+1}^dagger alpha_{y,z} u_n``.
    """

    lattice: MomentumLattice
    energy: np.ndarray
    d_plus: np.ndarray
    d_minus: np.ndarray
    spinors: np.ndarray
    t: np.ndarray
    r: np.ndarray
    ay_up: np.ndarray = field(repr=False)
    az_up: np.ndarray = field(repr=False)
    ay_down: np.ndarray = field(repr=False)
    az_down: np.ndarray = field(repr=False)

    @property
    def energy_scaled(self) -> np.ndarray:
        """Energies in units of m c^2."""
        return self.energy / C.rest_energy

    def spinor(self, n: int, gamma) -> np.ndarray:
        return self.spinors[self.lattice.index(n)][:, _gamma_index(gamma)]

    def pair_coefficients(self, n: int, n2: int):
        """Return ``(t_{n,n2}, r_{n,n2})`` for any two lattice modes."""
        i, j = self.lattice.index(n), self.lattice.index(n2)
        dp, dm = self.d_plus, self.d_minus
        return dp[i] * dp[j] + dm[i] * dm[j], dm[i] * dp[j] - dp[i] * dm[j]


def _spinor_matrix(dp: float, dm: float) -> np.ndarray:
    I2, sx = np.eye(2), SIGMA["x"].real
    u = np.empty((4, 4))
    u[:2, :2] = dp * I2
    u[2:, :2] = dm * sx
    u[:2, 2:] = -dm * sx
    u[2:, 2:] = dp * I2
    return u.astype(complex)


def contraction_blocks(Vy: np.ndarray, Vz: np.ndarray, sign: int) -> np.ndarray:
    """``sign*i*Vy - Vz`` for a 4x4 block pair, as used in the exponential form."""
    return sign * 1j * Vy - Vz


def _check_contraction(table: SpinorTable, tol: float = 1e-12) -> None:
    sy, sz = SIGMA["y"], SIGMA["z"]
    for i in range(table.lattice.size - 1):
        for Vy, Vz, t, r in ((table.ay_up[i], table.az_up[i], table.t[i], table.r[i]),
                             (table.ay_down[i], table.az_down[i], table.t[i], -table.r[i])):
            for sgn in (1, -1):
                lhs = contraction_blocks(Vy, Vz, sgn)
                rhs = np.block([[r * (-sgn * sz + 1j * sy), t * (sgn * 1j * sy - sz)],
                                [t * (sgn * 1j * sy - sz), r * (sgn * sz - 1j * sy)]])
                if np.abs(lhs - rhs).max() > tol:
                    raise RuntimeError("spinor contraction identity violated")


def build_spinor_table(lattice: MomentumLattice, check: bool = True) -> SpinorTable:
    """Assemble bispinors and coupling blocks for every lattice mode.

    With ``check`` the orthonormality of the bispinors and the contraction
    identity for the circular case are verified to 1e-12.
    """
    n = lattice.n
    energy = mode_energy(n, lattice)
    ratio = C.rest_energy / energy
    d_plus = np.sqrt((1 + ratio) / 2)
    d_minus = np.sign(n) * np.sqrt((1 - ratio) / 2)
    spinors = np.array([_spinor_matrix(a, b) for a, b in zip(d_plus, d_minus)])
    t = d_plus[:-1] * d_plus[1:] + d_minus[:-1] * d_minus[1:]
    r = d_minus[:-1] * d_plus[1:] - d_plus[:-1] * d_minus[1:]
    U0, U1 = spinors[:-1], spinors[1:]
    H = np.conj(np.swapaxes(U0, 1, 2))
    H1 = np.conj(np.swapaxes(U1, 1, 2))
    table = SpinorTable(
        lattice=lattice, energy=energy, d_plus=d_plus, d_minus=d_minus, spinors=spinors,
        t=t, r=r,
        ay_up=H @ ALPHA_Y @ U1, az_up=H @ ALPHA_Z @ U1,
        ay_down=H1 @ ALPHA_Y @ U0, az_down=H1 @ ALPHA_Z @ U0,
    )
    if check:
        gram = H1[0] @ U1[0]
        errs = [np.abs(np.conj(u.T) @ u - np.eye(4)).max() for u in spinors]
        if max(errs) > 1e-12 or np.abs(gram - np.eye(4)).max() > 1e-12:
            raise RuntimeError("bispinors are not orthonormal")
        _check_contraction(table)
    return table


def interaction_element(n: int, n2: int, gamma, gamma2, t: float, cfg: LaserConfig,
                        table: SpinorTable) -> complex:
    """Matrix element ``V_{n,n2}^{gamma,gamma2}(t)`` in J.

    Evaluated directly from the bispinors; nonzero only for ``|n - n2| = 1``.
    """
    if abs(n - n2) != 1:
        return 0j
    u = table.spinor(n, gamma)
    u2 = table.spinor(n2, gamma2)
    wt = cfg.omega * t
    amp = float(window(t, cfg)) * C.q * cfg.E_hat / cfg.k
    return amp * (np.vdot(u, ALPHA_Y @ u2) * math.sin(wt)
                  + np.vdot(u, ALPHA_Z @ u2) * math.sin(wt - cfg.eta))


def coupling_block(n: int, n2: int, t: float, cfg: LaserConfig, table: SpinorTable) -> np.ndarray:
    """4x4 block ``V_{n,n2}`` over gamma labels, in J."""
    return np.array([[interaction_element(n, n2, g, g2, t, cfg, table) for g2 in range(4)]
                     for g in range(4)])


@dataclass
class DiracModeState:
    """Amplitudes ``c_n^gamma`` (shape ``(2*n_max+1, 4)``) at time ``t`` in s."""

    amplitudes: np.ndarray
    t: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def _amps(state) -> np.ndarray:
    return np.asarray(getattr(state, "amplitudes", state))


def dirac_initial_state(lattice: MomentumLattice) -> DiracModeState:
    """Electron at rest with spin up and positive energy."""
    c = np.zeros((lattice.size, 4), dtype=complex)
    c[lattice.index(0), 0] = 1.0
    return DiracModeState(c, 0.0)


def dirac_rhs(state, t: float, cfg: LaserConfig, table: SpinorTable) -> np.ndarray:
    """Time derivative ``dc/dt`` (1/s) of the momentum-space Dirac equation.

    ``i hbar dc_n/dt = E_n beta c_n + V_{n,n-1} c_{n-1} + V_{n,n+1} c_{n+1}``;
    edge modes couple only inward.
    """
    c = _amps(state)
    wt = cfg.omega * t
    amp = float(window(t, cfg)) * C.q * cfg.E_hat / cfg.k
    up = amp * (table.ay_up * math.sin(wt) + table.az_up * math.sin(wt - cfg.eta))
    down = amp * (table.ay_down * math.sin(wt) + table.az_down * math.sin(wt - cfg.eta))
    h = (table.energy[:, None] * np.diag(BETA)[None, :]) * c
    h[:-1] += np.einsum("nij,nj->ni", up, c[1:])
    h[1:] += np.einsum("nij,nj->ni", down, c[:-1])
    return -1j * h / C.hbar


def dirac_spin_z(state) -> float:
    """Spin expectation ``<S_z>`` in units of hbar."""
    c = _amps(state)
    return 0.5 * float(np.sum(_SPIN_SIGN * np.abs(c) ** 2))
