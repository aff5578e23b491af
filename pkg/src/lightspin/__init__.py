"""Electron spin dynamics in standing elliptically polarized light waves.

Momentum-space Dirac and Pauli solvers, a perturbation-theory oracle for
the spin precession frequency, and tools to extract and compare
frequencies from simulated runs.
"""
__version__ = "0.1.0"

from .analysis import (anharmonicity_score, density_statistics, ellipticity_law,
                       extract_precession_frequency, scaling_exponent)
from .constants import CODATA2018, PhysicalConstants
from .fields import LaserConfig, ScaledUnits
from .integrator import IntegratorSettings, TimeSeries, propagate
from .perturbation import (harmonicity_ratio, omega_dirac, omega_pauli, omega_phase,
                           perturbative_bounds, u4_dirac_secular)

__all__ = [
    "CODATA2018",
    "PhysicalConstants",
    "LaserConfig",
    "ScaledUnits",
    "IntegratorSettings",
    "TimeSeries",
    "propagate",
    "omega_dirac",
    "omega_phase",
    "omega_pauli",
    "harmonicity_ratio",
    "perturbative_bounds",
    "u4_dirac_secular",
    "extract_precession_frequency",
    "scaling_exponent",
    "ellipticity_law",
    "density_statistics",
    "anharmonicity_score",
]
