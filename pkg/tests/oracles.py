"""Independent reference calculations used by the tests.

Nothing here imports the solver internals: bispinors and Hamiltonians are
rebuilt from their defining formulas so that agreement is a real check.
"""
from __future__ import annotations

import math

import numpy as np

HBAR = 1.054571817e-34
C_LIGHT = 299792458.0
M_E = 9.1093837015e-31
Q_E = 1.602176634e-19

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def scaled(wavelength, E_hat):
    """(kappa, xi) from SI wavelength and field."""
    k = 2 * math.pi / wavelength
    return HBAR * k / (M_E * C_LIGHT), Q_E * E_hat / (k**2 * HBAR * C_LIGHT)


def _bispinors(n, kappa):
    E = math.sqrt(1 + (n * kappa) ** 2)
    dp = math.sqrt((1 + 1 / E) / 2)
    dm = math.copysign(1.0, n) * math.sqrt((1 - 1 / E) / 2) if n else 0.0
    up = [np.concatenate([dp * e, dm * SX @ e]) for e in np.eye(2)]
    dn = [np.concatenate([-dm * SX @ e, dp * e]) for e in np.eye(2)]
    return E, np.array(up + dn).T  # columns +up, +down, -up, -down


def _sambe(H0, comps, mmax):
    """Quasi-energies of ``H0 + sum_k comps[k] e^{i k w t}`` in units of hbar*omega."""
    D = H0.shape[0]
    ms = np.arange(-mmax, mmax + 1)
    M = len(ms)
    HF = np.zeros((D * M, D * M), dtype=complex)
    for a, m in enumerate(ms):
        HF[a * D:(a + 1) * D, a * D:(a + 1) * D] = H0 + m * np.eye(D)
        for kk, Hk in comps.items():
            b = a - kk
            if 0 <= b < M:
                HF[a * D:(a + 1) * D, b * D:(b + 1) * D] += Hk
    return np.linalg.eigh(HF), ms, D


def _pick_pair(w, v, i_up, i_dn):
    weight = np.abs(v[i_up]) ** 2 + np.abs(v[i_dn]) ** 2
    j = np.argsort(weight)[-2:]
    return np.sort(w[j])


def dirac_quasienergies(kappa, xi, eta=math.pi / 2, nmax=6, mmax=8):
    """Floquet quasi-energies of the two rest states (units of hbar*omega, E0 removed)."""
    ns = np.arange(-nmax, nmax + 1)
    N = len(ns)
    D = 4 * N
    Z2 = np.zeros((2, 2))
    ay = np.block([[Z2, SY], [SY, Z2]])
    az = np.block([[Z2, SZ], [SZ, Z2]])
    U, H0 = [], np.zeros((D, D), dtype=complex)
    for i, n in enumerate(ns):
        E, u = _bispinors(int(n), kappa)
        U.append(u)
        H0[4 * i:4 * i + 4, 4 * i:4 * i + 4] = np.diag([E, E, -E, -E]) / kappa
    Y = np.zeros((D, D), dtype=complex)
    Zm = np.zeros((D, D), dtype=complex)
    for i in range(N - 1):
        for a, b in ((i, i + 1), (i + 1, i)):
            Y[4 * a:4 * a + 4, 4 * b:4 * b + 4] = U[a].conj().T @ ay @ U[b]
            Zm[4 * a:4 * a + 4, 4 * b:4 * b + 4] = U[a].conj().T @ az @ U[b]
    g = -xi  # qE/k in units of hbar*omega
    # sin(wt) = (e^{iwt} - e^{-iwt})/2i ; sin(wt - eta) likewise with e^{-+i eta}
    comps = {1: g * (Y + np.exp(-1j * eta) * Zm) / (2j),
             -1: -g * (Y + np.exp(1j * eta) * Zm) / (2j)}
    (w, v), ms, _ = _sambe(H0, comps, mmax)
    base = (len(ms) // 2) * D + 4 * nmax
    return _pick_pair(w, v, base, base + 1) - 1 / kappa


def pauli_quasienergies(kappa, xi, eta=math.pi / 2, rel=True, nmax=6, mmax=8):
    """Floquet quasi-energies of the two rest states of the Pauli equation (hbar*omega)."""
    ns = np.arange(-nmax, nmax + 1)
    N = len(ns)
    D = 2 * N
    I2 = np.eye(2)
    L2 = np.zeros((N, N))
    L1 = np.zeros((N, N))
    for i in range(N):
        L2[i, i] = 2
        if i >= 2:
            L2[i, i - 2] = 1
        if i + 2 < N:
            L2[i, i + 2] = 1
        if i >= 1:
            L1[i, i - 1] = 1
        if i + 1 < N:
            L1[i, i + 1] = -1
    pond = 0.5 * (xi * kappa) ** 2
    mag = -0.5 * xi * kappa**2
    spd = 0.25 * xi**2 * kappa**3 * math.sin(eta) if rel else 0.0
    H0 = np.kron(np.diag(0.5 * (ns * kappa) ** 2), I2) + pond * np.kron(L2, I2) \
        + spd * np.kron(L2, SX)
    comps = {
        2: -0.5 * pond * math.cos(eta) * np.exp(-1j * eta) * np.kron(L2, I2),
        -2: -0.5 * pond * math.cos(eta) * np.exp(1j * eta) * np.kron(L2, I2),
        1: 0.5 * mag * np.kron(L1, -SY * np.exp(-1j * eta) + SZ),
        -1: 0.5 * mag * np.kron(L1, SY * np.exp(1j * eta) - SZ),
    }
    H0 = H0 / kappa
    comps = {k: v / kappa for k, v in comps.items()}
    (w, v), ms, _ = _sambe(H0, comps, mmax)
    base = (len(ms) // 2) * D + 2 * nmax
    return _pick_pair(w, v, base, base + 1)


def pauli_u2_dyson(wavelength, E_hat, eta=math.pi / 2):
    """Second-order secular coefficient of the Pauli magnetic coupling (rad/s)."""
    k = 2 * math.pi / wavelength
    omega = k * C_LIGHT
    mag = HBAR * (-Q_E) * E_hat / (2 * M_E * C_LIGHT)  # J
    # Q(t) = i mag (-sy sin(wt - eta) + sz sin wt) = sum_e Q_e e^{i e w t}
    Q = {1: 0.5 * mag * (-SY * np.exp(-1j * eta) + SZ),
         -1: 0.5 * mag * (SY * np.exp(1j * eta) - SZ)}
    total = np.zeros((2, 2), dtype=complex)
    for n1 in (1, -1):
        # H_{n,n-1} = +Q and H_{n,n+1} = -Q
        E1 = (n1 * k * HBAR) ** 2 / (2 * M_E)
        for e1 in (1, -1):
            e2 = -e1
            d1 = (0 - E1) / HBAR - e1 * omega
            a_out = Q[e1] if n1 == 1 else -Q[e1]
            a_back = -Q[e2] if n1 == 1 else Q[e2]
            total += -(a_back @ a_out) / HBAR**2 * (1j / d1)
    return total
