import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lightspin.constants import CODATA2018 as C
from lightspin.fields import LaserConfig, ScaledUnits
from lightspin.perturbation import (FOURTH_ORDER_PATHS, ResonanceError, closing_wavelength,
                                    fourth_order_terms, harmonicity_ratio, omega_dirac,
                                    omega_dirac_spin_density_form, omega_pauli, omega_phase,
                                    pauli_components, perturbative_bounds, perturbative_summary,
                                    spin_flip_probability, spin_flip_probability_short,
                                    u2_dirac, u2_dirac_coefficient, u2_dirac_dyson,
                                    u2_dirac_simplified, u2_pauli, u2_pauli_limit,
                                    u4_dirac_quadratic, u4_dirac_secular)

LAM, E0 = 0.159e-9, 2.057e14
CFG = LaserConfig(LAM, E0)


def test_closed_forms_in_scaled_units():
    u = ScaledUnits.from_config(CFG)
    w = CFG.omega
    assert omega_dirac(CFG) / w == pytest.approx(u.xi**4 * u.kappa**2, rel=1e-12)
    assert omega_pauli(CFG) / w == pytest.approx(u.xi**2 * u.kappa**2, rel=1e-12)
    assert omega_phase(CFG) / w == pytest.approx(u.xi**4 * u.kappa, rel=1e-12)
    assert omega_dirac(CFG) == pytest.approx(5.5e14, rel=1e-2)
    assert omega_pauli(CFG) == pytest.approx(1.23e15, rel=5e-3)


@pytest.mark.parametrize("eta", [math.pi / 2, math.pi / 3, 0.2])
def test_spin_density_form(eta):
    cfg = LaserConfig(LAM, E0, eta)
    assert omega_dirac_spin_density_form(cfg) == pytest.approx(
        math.sin(eta) * omega_dirac(CFG), rel=1e-14)


def test_table_i_and_term_count():
    assert set(FOURTH_ORDER_PATHS) == {(1, 2, 1), (1, 0, 1), (1, 0, -1), (-1, -2, -1), (-1, 0, -1), (-1, 0, 1)}
    terms = fourth_order_terms(CFG)
    assert len(terms) == 6 * 8 * 16
    assert sum(t.secular for t in terms) == 6 * 8 * 6
    assert all(t.n[1] == 0 and t.zeta[1] == 1 for t in terms if t.degenerate)


def test_u4_sigma_x_part_is_half_omega():
    pc = pauli_components(u4_dirac_secular(CFG))
    assert pc["x"].real == pytest.approx(0.5 * omega_dirac(CFG), rel=1e-6)
    assert abs(pc["y"]) + abs(pc["z"]) < 1e-10 * omega_dirac(CFG)
    # i(M - M^dagger)/2 carries only identity and sigma_x
    M = u4_dirac_secular(CFG)
    herm = pauli_components(0.5j * (M - M.conj().T))
    assert abs(herm["y"]) + abs(herm["z"]) < 1e-10 * abs(M).max()


def test_u4_quadratic_is_square_of_second_order():
    B = u2_dirac_dyson(CFG)
    Q = u4_dirac_quadratic(CFG)
    np.testing.assert_allclose(Q, 0.5 * B @ B, rtol=0, atol=1e-12 * abs(Q).max())


XS = np.array([0.03, 0.05, 0.07])


def _sambe_series(kappa):
    # even power series in xi for the mean and the splitting of the quasi-energy pair
    q = np.array([oracles.dirac_quasienergies(kappa, x, nmax=5, mmax=7) for x in XS])
    mean = np.linalg.solve(np.vstack([XS**2, XS**4, XS**6]).T, q.mean(axis=1))
    split = np.linalg.solve(np.vstack([XS**4, XS**6, XS**8]).T, q[:, 1] - q[:, 0])
    return mean[0], mean[1], split[0]


def test_fourth_order_against_floquet_oracle():
    u = ScaledUnits.from_config(CFG)
    a, b, s4 = _sambe_series(u.kappa)
    unit = LaserConfig.from_cycles(LAM, E0 / u.xi)  # xi = 1, so coefficients read directly
    pc = pauli_components(u4_dirac_secular(unit))
    w = unit.omega
    # quasi-energy splitting equals Omega, twice the sigma_x part of the generator
    assert s4 * w == pytest.approx(2 * pc["x"].real, rel=2e-3)
    # the fourth-order mean shift is minus the identity part, which is Omega_phi/4
    assert b * w == pytest.approx(-pc["1"].real, rel=2e-3)
    assert pc["1"].real / omega_phase(unit) == pytest.approx(0.25, rel=1e-2)
    # second order: ponderomotive shift xi^2 kappa hbar omega
    assert a == pytest.approx(u.kappa, rel=1e-6)
    assert -u2_dirac_dyson(unit)[0, 0].imag == pytest.approx(a * w, rel=1e-6)


def test_u2_dirac_forms_agree():
    D = u2_dirac_dyson(CFG)
    F = u2_dirac_coefficient(CFG)
    np.testing.assert_allclose(F, D, atol=1e-13 * abs(D).max())
    assert abs(F[0, 1]) < 1e-13 * abs(F[0, 0])
    t = 3.3e-17
    S = u2_dirac_simplified(t, CFG)
    U = u2_dirac(t, CFG)
    assert U[0, 1] == 0 and U[1, 0] == 0
    np.testing.assert_allclose(U, S, rtol=1e-10)
    u = ScaledUnits.from_config(CFG)
    assert -D[0, 0].imag / CFG.omega == pytest.approx(u.xi**2 * u.kappa, rel=1e-4)
    with pytest.raises(ValueError):
        u2_dirac(t, LaserConfig(LAM, E0, 0.3))


def test_u2_pauli_against_dyson_oracle():
    M = oracles.pauli_u2_dyson(LAM, E0)
    np.testing.assert_allclose(u2_pauli(1.0, CFG), M, rtol=1e-12)
    pc = pauli_components(u2_pauli(1.0, CFG))
    assert pc["x"].imag == pytest.approx(0.5 * omega_pauli(CFG), rel=1e-4)
    np.testing.assert_allclose(u2_pauli_limit(1.0, CFG), u2_pauli(1.0, CFG), rtol=1e-4)


def test_pauli_resonance_guard():
    # k^2 hbar^2/(2m) = hbar omega at kappa = 2
    lam = 2 * math.pi * C.hbar / (2 * C.m_e * C.c)
    with pytest.raises(ResonanceError):
        u2_pauli(1.0, LaserConfig(lam, 1e12))


def test_harmonicity_threshold():
    assert harmonicity_ratio(LaserConfig(LAM, 3.09e14)).xi == pytest.approx(1.0, abs=0.01)
    h = harmonicity_ratio(CFG)
    assert h.perturbative and h.secondary < h.xi


def test_bounds():
    b = perturbative_bounds(LAM, 5000)
    assert b.E_max == pytest.approx((2 * math.pi) ** 2 * C.c * C.hbar / (C.q_e * LAM**2), rel=1e-14)
    assert b.E_max == pytest.approx(3.08e14, rel=2e-3)
    assert b.nonempty
    # at E_min the precession period fills the budget: Omega * N * T = 2 pi... per definition
    cfg = LaserConfig(LAM, b.E_min)
    assert 2 * omega_dirac(cfg) * 5000 * cfg.period == pytest.approx(2 * math.pi, rel=1e-12)
    lc = closing_wavelength(5000)
    bc = perturbative_bounds(lc, 5000)
    assert bc.E_min == pytest.approx(bc.E_max, rel=1e-12)
    with pytest.raises(ValueError):
        perturbative_bounds(LAM, 0.5)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.0, 1e8), st.floats(1.5, 1e3))
def test_E_min_scales_as_quarter_power(N, factor):
    a = perturbative_bounds(LAM, N).E_min
    b = perturbative_bounds(LAM, N * factor).E_min
    assert b / a == pytest.approx(factor**-0.25, rel=1e-13)


def test_spin_flip_probability():
    W = omega_dirac(CFG)
    t = np.array([1e-22, 1e-20])
    np.testing.assert_allclose(spin_flip_probability(t, W), spin_flip_probability_short(t, W),
                               rtol=1e-8)
    assert spin_flip_probability(math.pi / W, W) == pytest.approx(1.0)


def test_summary():
    s = perturbative_summary(LaserConfig.from_cycles(LAM, E0, T_cycles=5000))
    assert s.n_cycles == pytest.approx(5000)
    assert s.Omega == pytest.approx(omega_dirac(CFG))
    assert s.nonempty and s.perturbative
