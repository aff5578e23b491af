"""Frequency extraction and waveform diagnostics for simulated spin dynamics."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

__all__ = [
    "FrequencyFit",
    "ScalingFit",
    "EllipticityLaw",
    "DensityStats",
    "flat_top_mask",
    "extract_precession_frequency",
    "scaling_exponent",
    "ellipticity_law",
    "density_statistics",
    "anharmonicity_score",
]


@dataclass(frozen=True)
class FrequencyFit:
    """Result of fitting ``A cos(Omega t + phi) + offset`` to ``s_z(t)``.

    ``amplitude``, ``offset`` and ``residual_rms`` are in units of hbar;
    ``omega_fit`` is in rad/s.  ``usable`` is false when the window holds
    no zero crossing, in which case ``omega_fit`` is only a curvature
    estimate (0 if even that fails).
    """

    omega_fit: float
    amplitude: float
    phase: float
    offset: float
    residual_rms: float
    method: str
    usable: bool


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    residuals: np.ndarray


@dataclass(frozen=True)
class EllipticityLaw:
    eta: np.ndarray
    ratio: np.ndarray
    deviation: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.deviation)))


@dataclass(frozen=True)
class DensityStats:
    mean: float
    min: float
    max: float
    envelope_period: float | None


def flat_top_mask(series) -> np.ndarray:
    """Samples inside ``[delta_T, T - delta_T]``."""
    cfg = series.config
    t = series.times
    eps = 1e-9 * cfg.period
    return (t >= cfg.delta_T - eps) & (t <= cfg.T_total - cfg.delta_T + eps)


def _zero_crossings(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    s = np.signbit(y)
    idx = np.nonzero(s[1:] != s[:-1])[0]
    y0, y1 = y[idx], y[idx + 1]
    return t[idx] - y0 * (t[idx + 1] - t[idx]) / (y1 - y0)


def _cosine(t, A, W, phi, C):
    return A * np.cos(W * t + phi) + C


def _fit_arrays(t: np.ndarray, y: np.ndarray) -> FrequencyFit:
    if t.size < 5:
        raise ValueError("need at least 5 samples to fit a frequency")
    scale = t[-1] if t[-1] > 0 else 1.0
    tau = t / scale
    zc = _zero_crossings(tau, y)
    if zc.size == 0:
        # partial period: A cos(W tau) ~ A (1 - W^2 tau^2/2) about tau = 0
        coef = np.polyfit(tau**2, y, 1)
        W = math.sqrt(-2 * coef[0] / coef[1]) if coef[0] < 0 < coef[1] else 0.0
        resid = y - np.polyval(coef, tau**2)
        return FrequencyFit(float(W / scale), float(coef[1]), 0.0, 0.0,
                            float(np.sqrt(np.mean(resid**2))), "curvature", False)
    if zc.size >= 2:
        W0 = math.pi * (zc.size - 1) / (zc[-1] - zc[0])
    else:
        W0 = (math.pi / 2) / zc[0]
    # the crossing estimate can be off by a phase; refine it by a scan in which
    # amplitude, phase and offset enter linearly
    best = None
    for W in W0 * np.geomspace(0.25, 4.0, 401):
        basis = np.column_stack([np.cos(W * tau), np.sin(W * tau), np.ones_like(tau)])
        coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
        cost = float(np.sum((basis @ coef - y) ** 2))
        if best is None or cost < best[0]:
            best = (cost, W, coef)
    _, W0, (a, b, C0) = best
    A0 = math.hypot(a, b)
    phi0 = math.atan2(-b, a)
    with warnings.catch_warnings():
        # exact data leaves the covariance undefined, which is harmless here
        warnings.simplefilter("ignore", OptimizeWarning)
        p, _ = curve_fit(_cosine, tau, y, p0=[A0, W0, phi0, C0], xtol=1e-15, ftol=1e-15,
                         gtol=1e-15, maxfev=20000)
    A, W, phi, C = p
    if W < 0:
        W, phi = -W, -phi
    if A < 0:
        A, phi = -A, phi + math.pi
    phi = (phi + math.pi) % (2 * math.pi) - math.pi
    resid = y - _cosine(tau, A, W, phi, C)
    return FrequencyFit(float(W / scale), float(A), float(phi), float(C),
                        float(np.sqrt(np.mean(resid**2))), "zero-crossing+lsq", True)


def extract_precession_frequency(series, exclude_ramps: bool = True) -> FrequencyFit:
    """Fit the precession frequency of ``series.s_z``.

    Parameters
    ----------
    series : TimeSeries or tuple
        A ``TimeSeries`` or a ``(times, s_z)`` pair of arrays.
    exclude_ramps : bool
        Restrict the fit to the flat-top part of the envelope.

    Notes
    -----
    The seed frequency comes from the zero crossings: the mean spacing of
    consecutive crossings, or the first crossing taken as a quarter period.
    A scan over 0.25 to 4 times that seed, solving for amplitude, phase and
    offset linearly at each frequency, picks the start point.  The fit is
    then refined by nonlinear least squares in time normalized
    to the window end, which keeps the problem well conditioned.
    """
    if isinstance(series, tuple):
        t, y = (np.asarray(a, dtype=float) for a in series)
    else:
        t, y = series.times, series.s_z
        if exclude_ramps:
            m = flat_top_mask(series)
            t, y = t[m], y[m]
    return _fit_arrays(t, y)


def anharmonicity_score(series, exclude_ramps: bool = True) -> float:
    """RMS residual of the cosine fit normalized by hbar/2."""
    return extract_precession_frequency(series, exclude_ramps).residual_rms / 0.5


def scaling_exponent(points) -> ScalingFit:
    """Slope of ``log(omega)`` against ``log(E_hat)`` by least squares.

    Parameters
    ----------
    points : sequence of (E_hat, omega)
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be (E_hat, omega) pairs")
    if np.any(arr <= 0):
        raise ValueError("field strengths and frequencies must be positive")
    if np.unique(arr[:, 0]).size < 2:
        raise ValueError("need at least two distinct field strengths")
    x, y = np.log(arr[:, 0]), np.log(arr[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    return ScalingFit(float(slope), float(intercept), y - (slope * x + intercept))


def ellipticity_law(points) -> EllipticityLaw:
    """Compare ``omega(eta)/omega(pi/2)`` with ``sin(eta)``.

    ``deviation`` is relative to ``sin(eta)``.
    """
    arr = np.asarray(points, dtype=float)
    ref = np.isclose(arr[:, 0], math.pi / 2, rtol=0, atol=1e-9)
    if not ref.any():
        raise ValueError("an eta = pi/2 reference point is required")
    w_ref = arr[ref, 1][0]
    eta = arr[:, 0]
    if np.any(eta <= 0) or np.any(eta > math.pi / 2 + 1e-9):
        raise ValueError("eta values must lie in (0, pi/2]")
    ratio = arr[:, 1] / w_ref
    return EllipticityLaw(eta, ratio, (ratio - np.sin(eta)) / np.sin(eta))


def density_statistics(series) -> DensityStats:
    """Mean, extrema and dominant slow period of ``lambda*rho(lambda/4)`` on the flat top."""
    if series.density is None:
        raise ValueError("series has no density channel")
    m = flat_top_mask(series)
    t, d = series.times[m], series.density[m]
    if d.size == 0:
        raise ValueError("flat-top window holds no samples")
    period = None
    if d.size >= 8 and np.ptp(d) > 0:
        spec = np.abs(np.fft.rfft(d - d.mean()))
        freqs = np.fft.rfftfreq(d.size, t[1] - t[0])
        k = int(np.argmax(spec[1:]) + 1)
        period = float(1 / freqs[k])
    return DensityStats(float(d.mean()), float(d.min()), float(d.max()), period)
