"""Compiled RK4 kernels in scaled units.

Amplitude arrays have shape ``(N, S, K)``: ``N`` lattice modes, ``S``
spin/bispinor slots (4 for Dirac, 2 for Pauli) and ``K`` independent
columns, so a whole propagator can be stepped at once.  Time ``s`` is in
laser periods and the equation is ``i dc/ds = (2 pi/kappa) H c`` with
``H`` in units of ``m c^2``.

``params`` layout: ``[g, eta, ramp, total, pref, pond, spd, mag]`` where
``g = qE/(k m c^2)`` (Dirac), ``pond``, ``spd``, ``mag`` are the Pauli
ponderomotive, spin-density and magnetic coefficients and
``pref = 2 pi/kappa``.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

DIRAC = 0
PAULI = 1

TWO_PI = 2.0 * math.pi


@njit(cache=True)
def window(s, ramp, total):
    if s < 0.0 or s > total:
        return 0.0
    if ramp <= 0.0:
        return 1.0
    if s < ramp:
        return math.sin(math.pi * s / (2.0 * ramp)) ** 2
    if s > total - ramp:
        return math.sin(math.pi * (total - s) / (2.0 * ramp)) ** 2
    return 1.0


@njit(cache=True)
def _couple_dirac(tmp, out, s, ay_up, az_up, ay_dn, az_dn, params, blk_up, blk_dn):
    N, S, K = tmp.shape
    w = window(s, params[2], params[3])
    a = params[0] * w * math.sin(TWO_PI * s)
    b = params[0] * w * math.sin(TWO_PI * s - params[1])
    for i in range(N - 1):
        for p in range(S):
            for r in range(S):
                blk_up[i, p, r] = a * ay_up[i, p, r] + b * az_up[i, p, r]
                blk_dn[i, p, r] = a * ay_dn[i, p, r] + b * az_dn[i, p, r]
    out[:] = 0.0
    for n in range(N):
        for p in range(S):
            for r in range(S):
                if n + 1 < N:
                    cu = blk_up[n, p, r]
                    if cu != 0.0:
                        for col in range(K):
                            out[n, p, col] += cu * tmp[n + 1, r, col]
                if n > 0:
                    cd = blk_dn[n - 1, p, r]
                    if cd != 0.0:
                        for col in range(K):
                            out[n, p, col] += cd * tmp[n - 1, r, col]


@njit(cache=True)
def _couple_pauli(tmp, out, s, params, blk_up, blk_dn):
    # blk_up[0] holds the n +- 2 operator, blk_dn[0] the n +- 1 operator
    N, S, K = tmp.shape
    eta = params[1]
    w = window(s, params[2], params[3])
    pond = params[5] * w * w * (1.0 - math.cos(eta) * math.cos(2.0 * TWO_PI * s - eta))
    spd = params[6] * w * w * math.sin(eta)
    mag = 1j * params[7] * w
    sy_c = -math.sin(TWO_PI * s - eta)
    sz_c = math.sin(TWO_PI * s)
    # P = pond*I + spd*sigma_x ; Q = mag*(sy_c*sigma_y + sz_c*sigma_z)
    P = blk_up[0]
    Q = blk_dn[0]
    P[0, 0] = pond
    P[1, 1] = pond
    P[0, 1] = spd
    P[1, 0] = spd
    Q[0, 0] = mag * sz_c
    Q[1, 1] = -mag * sz_c
    Q[0, 1] = mag * sy_c * (-1j)
    Q[1, 0] = mag * sy_c * 1j
    out[:] = 0.0
    for n in range(N):
        for p in range(S):
            for r in range(S):
                cp = P[p, r]
                cq = Q[p, r]
                for col in range(K):
                    l2 = 2.0 * tmp[n, r, col]
                    if n >= 2:
                        l2 += tmp[n - 2, r, col]
                    if n + 2 < N:
                        l2 += tmp[n + 2, r, col]
                    l1 = 0.0j
                    if n >= 1:
                        l1 += tmp[n - 1, r, col]
                    if n + 1 < N:
                        l1 -= tmp[n + 1, r, col]
                    out[n, p, col] += cp * l2 + cq * l1


@njit(cache=True)
def deriv(y, s, s_ref, interaction, model, E, ay_up, az_up, ay_dn, az_dn, params,
          out, tmp, blk_up, blk_dn):
    """Write ``dy/ds`` into ``out``.

    In the interaction picture ``y`` holds ``b = exp(i pref E (s - s_ref)) c``.
    """
    N, S, K = y.shape
    pref = params[4]
    if interaction:
        dt = s - s_ref
        for n in range(N):
            for p in range(S):
                ph = complex(math.cos(pref * E[n, p] * dt), -math.sin(pref * E[n, p] * dt))
                for col in range(K):
                    tmp[n, p, col] = y[n, p, col] * ph
    else:
        tmp[:] = y
    if model == DIRAC:
        _couple_dirac(tmp, out, s, ay_up, az_up, ay_dn, az_dn, params, blk_up, blk_dn)
    else:
        _couple_pauli(tmp, out, s, params, blk_up, blk_dn)
    if interaction:
        dt = s - s_ref
        for n in range(N):
            for p in range(S):
                ph = complex(math.cos(pref * E[n, p] * dt), math.sin(pref * E[n, p] * dt))
                f = -1j * pref * ph
                for col in range(K):
                    out[n, p, col] *= f
    else:
        for n in range(N):
            for p in range(S):
                for col in range(K):
                    out[n, p, col] = -1j * pref * (out[n, p, col] + E[n, p] * tmp[n, p, col])


@njit(cache=True)
def rk4(y, s0, h, nsteps, s_ref, interaction, model, E, ay_up, az_up, ay_dn, az_dn,
        params):
    """Advance ``y`` in place by ``nsteps`` classical RK4 steps of size ``h``."""
    N, S, K = y.shape
    k1 = np.empty_like(y)
    k2 = np.empty_like(y)
    k3 = np.empty_like(y)
    k4 = np.empty_like(y)
    yt = np.empty_like(y)
    tmp = np.empty_like(y)
    nb = max(N - 1, 1)
    blk_up = np.zeros((nb, S, S), dtype=np.complex128)
    blk_dn = np.zeros((nb, S, S), dtype=np.complex128)
    yf = y.reshape(-1)
    ytf = yt.reshape(-1)
    k1f = k1.reshape(-1)
    k2f = k2.reshape(-1)
    k3f = k3.reshape(-1)
    k4f = k4.reshape(-1)
    M = yf.size
    hh = 0.5 * h
    h6 = h / 6.0
    for step in range(nsteps):
        s = s0 + step * h
        deriv(y, s, s_ref, interaction, model, E, ay_up, az_up, ay_dn, az_dn, params,
              k1, tmp, blk_up, blk_dn)
        for i in range(M):
            ytf[i] = yf[i] + hh * k1f[i]
        deriv(yt, s + hh, s_ref, interaction, model, E, ay_up, az_up, ay_dn, az_dn, params,
              k2, tmp, blk_up, blk_dn)
        for i in range(M):
            ytf[i] = yf[i] + hh * k2f[i]
        deriv(yt, s + hh, s_ref, interaction, model, E, ay_up, az_up, ay_dn, az_dn, params,
              k3, tmp, blk_up, blk_dn)
        for i in range(M):
            ytf[i] = yf[i] + h * k3f[i]
        deriv(yt, s + h, s_ref, interaction, model, E, ay_up, az_up, ay_dn, az_dn, params,
              k4, tmp, blk_up, blk_dn)
        for i in range(M):
            yf[i] += h6 * (k1f[i] + 2.0 * k2f[i] + 2.0 * k3f[i] + k4f[i])
    return y
