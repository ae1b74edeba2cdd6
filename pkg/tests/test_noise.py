import cmath
import math

import numpy as np
import pytest
from conftest import GAMMA, LENGTH, munu
from hypothesis import given
from hypothesis import strategies as st

from psafiber.fwm import FiberParams, MuNu, PumpConfigB, coeffs_A, coeffs_B, quad_transfer
from psafiber.noise import (
    VACUUM_VARIANCE,
    GaussianState,
    SnrReport,
    build_s_tot,
    duan_lhs,
    homodyne_stats_A,
    homodyne_transform,
    joint_mode_nf_B,
    noise_figure_A,
    output_covariance,
    pm_change,
    quadrature_variance_A,
    signal_only_nf_B,
    symplectic_eigenvalues,
    symplectic_form,
    two_mode_squeezed_covariance,
    vacuum_idler_nf_B,
)
from psafiber.optimum import optimal_idler_B, optimal_signal_phase_A
from psafiber.oracle import extract_mu_nu
from psafiber.sampling import sample_link


def _big_gain(mu2):
    return MuNu.from_polar(math.sqrt(mu2 - 1), 0.3, -0.8)


def test_vacuum_variance_preserved():
    c = MuNu(1, 0)
    for phi in np.linspace(0, math.pi, 7):
        assert homodyne_stats_A(c, 0.5 + 0.2j, phi)[1] == pytest.approx(VACUUM_VARIANCE)


def test_optimal_detection_stats(two_pump):
    c = coeffs_A(*two_pump)
    opt = optimal_signal_phase_A(c)
    theta = (c.theta_mu + c.theta_nu) / 2
    amp = 0.8
    mean, var = homodyne_stats_A(c, cmath.rect(amp, opt.theta_s0), theta)
    s = c.abs_mu + c.abs_nu
    assert var == pytest.approx(s**2 / 4, rel=1e-12)
    assert abs(mean) == pytest.approx(amp * s, rel=1e-12)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_homodyne_matches_sampling(seed):
    rng = np.random.default_rng(100 + seed)
    c = MuNu.from_polar(rng.uniform(0, 3), *rng.uniform(-math.pi, math.pi, 2))
    alpha = complex(*rng.normal(size=2))
    phi = rng.uniform(0, math.pi)
    mean, var = homodyne_stats_A(c, alpha, phi)
    st_ = sample_link(c, "A", phi, alpha, n=1_000_000, seed=seed)
    assert st_.variance_within(var)
    assert st_.mean_within(mean)


def test_noise_figure_is_one_at_optimum(two_pump):
    c = coeffs_A(*two_pump)
    opt = optimal_signal_phase_A(c)
    rep = noise_figure_A(c, opt.theta_s0, (c.theta_mu + c.theta_nu) / 2)
    assert rep.noise_figure == pytest.approx(1.0, abs=1e-10)
    assert rep.snr_in / rep.snr_out == pytest.approx(rep.noise_figure)


def test_noise_figure_independent_of_amplitude(two_pump):
    c = coeffs_A(*two_pump)
    a = noise_figure_A(c, 0.3, 1.1, amplitude=0.1).noise_figure
    b = noise_figure_A(c, 0.3, 1.1, amplitude=7.0).noise_figure
    assert a == pytest.approx(b, rel=1e-13)
    with pytest.raises(ValueError):
        noise_figure_A(c, 0.3, 1.1, amplitude=0.0)


@given(st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi), st.floats(-1.5, 1.5))
def test_noise_figure_without_squeezing(tm, ts, offset):
    c = MuNu(cmath.exp(1j * tm), 0)
    phi = tm + ts + offset
    assert noise_figure_A(c, ts, phi).noise_figure == pytest.approx(1 / math.cos(offset) ** 2, rel=1e-10)


def test_best_detection_phase(two_pump):
    c = coeffs_A(*two_pump)
    ts = optimal_signal_phase_A(c).theta_s0
    theta = (c.theta_mu + c.theta_nu) / 2
    phis = np.linspace(theta - math.pi / 2, theta + math.pi / 2, 2001)
    nf = noise_figure_A(c, ts, phis).noise_figure
    assert phis[np.argmin(nf)] == pytest.approx(theta, abs=math.pi / 2000)
    assert nf.min() == pytest.approx(noise_figure_A(c, ts, theta).noise_figure, abs=1e-10)


def test_noise_figure_never_below_one(two_pump):
    c = coeffs_A(*two_pump)
    ts = np.linspace(0, math.pi, 200, endpoint=False)
    phis = np.linspace(0, math.pi, 200, endpoint=False)
    nf = noise_figure_A(c, ts[:, None], phis[None, :]).noise_figure
    assert nf.min() >= 1 - 1e-12


@given(munu(max_nu=10.0), st.floats(-math.pi, math.pi))
def test_unit_noise_figure_for_every_input_phase(c, ts):
    # detecting along M^-T x_in makes the output quadrature a rescaled copy of the input one
    m = quad_transfer(c).m
    u = np.linalg.solve(m.T, [math.cos(ts), math.sin(ts)])
    phi = math.atan2(u[1], u[0])
    assert noise_figure_A(c, ts, phi).noise_figure == pytest.approx(1.0, abs=1e-9)


@given(munu(max_nu=30.0), st.floats(0.1, 3.0), st.floats(-math.pi, math.pi))
def test_joint_mode_is_noiseless(c, amp, ts):
    rep = joint_mode_nf_B(c, cmath.rect(amp, ts))
    assert rep.noise_figure == pytest.approx(1.0, abs=1e-10)
    assert rep.snr_in == pytest.approx(8 * amp**2, rel=1e-12)


def test_joint_mode_at_zero_length():
    c = coeffs_B(FiberParams(GAMMA, 0.0, 0.0), PumpConfigB(0.2))
    assert joint_mode_nf_B(c, 0.5).noise_figure == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        joint_mode_nf_B(c, 0)


def test_joint_mode_output_variance(single_pump):
    c = coeffs_B(*single_pump)
    a_s0 = 0.4 * cmath.exp(1j * math.pi / 5)
    a_i0 = optimal_idler_B(c, a_s0).idler_amplitude
    t = homodyne_transform(c.theta_mu + cmath.phase(a_s0), c.theta_mu + cmath.phase(a_i0))
    var = (t @ output_covariance(c) @ t.T)[0, 0]
    assert var == pytest.approx((c.abs_mu + c.abs_nu) ** 2 / 4, rel=1e-12)


def test_signal_only_examples(single_pump):
    c0 = MuNu(1, 0)
    a_i = optimal_idler_B(c0, 1.0).idler_amplitude
    assert signal_only_nf_B(c0, 1.0, a_i, 0.0).noise_figure == pytest.approx(2.0)

    c = coeffs_B(*single_pump)
    a_s = 0.4 * cmath.exp(1j * math.pi / 5)
    a_i = optimal_idler_B(c, a_s).idler_amplitude
    phi = c.theta_mu + cmath.phase(a_s)
    joint = signal_only_nf_B(c, a_s, a_i, phi).noise_figure
    expected = 2 * (c.abs_mu**2 + c.abs_nu**2) / (c.abs_mu + c.abs_nu) ** 2
    assert joint == pytest.approx(expected, rel=1e-12)
    # counting the signal alone halves the figure at equal powers
    signal = signal_only_nf_B(c, a_s, a_i, phi, input_snr="signal").noise_figure
    assert signal == pytest.approx(joint / 2, rel=1e-12)
    with pytest.raises(ValueError):
        signal_only_nf_B(c, a_s, a_i, phi, input_snr="both")


@pytest.mark.parametrize("mu2", [100.0, 1e3, 1e5])
def test_large_gain_limits(mu2):
    c = _big_gain(mu2)
    a_i = optimal_idler_B(c, 1.0).idler_amplitude
    nf_s = signal_only_nf_B(c, 1.0, a_i, c.theta_mu).noise_figure
    assert nf_s == pytest.approx(1.0, abs=1e-2)
    assert signal_only_nf_B(c, 1.0, a_i, c.theta_mu, input_snr="signal").noise_figure == pytest.approx(0.5, abs=1e-2)
    assert vacuum_idler_nf_B(c, 1.0).noise_figure == pytest.approx(2.0, abs=1e-2)


def test_vacuum_idler_examples():
    assert vacuum_idler_nf_B(MuNu(1, 0), 0.3).noise_figure == pytest.approx(1.0)
    assert vacuum_idler_nf_B(_big_gain(100.0), 0.3).noise_figure == pytest.approx(1.99, abs=1e-12)
    with pytest.raises(ValueError):
        vacuum_idler_nf_B(MuNu(1, 0), 0)


def test_snr_report_db():
    assert SnrReport(4.0, 2.0, 2.0).noise_figure_db == pytest.approx(3.0103, abs=1e-4)


def test_s_tot_identity():
    assert np.array_equal(build_s_tot(MuNu(1, 0)).m, np.eye(4))


@given(munu())
def test_s_tot_symplectic(c):
    s = build_s_tot(c).m
    j = symplectic_form(2)
    assert np.max(np.abs(s @ j @ s.T - j)) <= 1e-10 * (1 + c.abs_mu**2)


@given(munu())
def test_s_tot_blocks_in_pm_basis(c):
    t = pm_change()
    s = t @ build_s_tot(c).m @ t.T
    idx_p, idx_m = [0, 2], [1, 3]
    tol = 1e-10 * (1 + c.abs_mu)
    assert np.max(np.abs(s[np.ix_(idx_p, idx_p)] - quad_transfer(c, "plus").m)) <= tol
    assert np.max(np.abs(s[np.ix_(idx_m, idx_m)] - quad_transfer(c, "minus").m)) <= tol
    assert np.max(np.abs(s[np.ix_(idx_p, idx_m)])) <= tol
    assert np.max(np.abs(s[np.ix_(idx_m, idx_p)])) <= tol


def test_output_covariance_identity():
    assert np.allclose(output_covariance(MuNu(1, 0)), np.eye(4) / 4)
    with pytest.raises(ValueError):
        output_covariance(MuNu(1, 0), basis="other")


@given(munu(max_nu=20.0))
def test_output_covariance_structure(c):
    cov = output_covariance(c)
    tol = 1e-10 * (1 + c.abs_mu**2)
    assert np.allclose(np.diag(cov), (c.abs_mu**2 + c.abs_nu**2) / 4, atol=tol)
    prod = c.mu * c.nu
    assert cov[0, 1] == pytest.approx(2 * prod.real / 4, abs=tol)
    assert cov[0, 3] == pytest.approx(2 * prod.imag / 4, abs=tol)
    assert cov[2, 3] == pytest.approx(-2 * prod.real / 4, abs=tol)
    assert cov[1, 2] == pytest.approx(2 * prod.imag / 4, abs=tol)
    assert abs(cov[0, 2]) <= tol and abs(cov[1, 3]) <= tol
    assert symplectic_eigenvalues(cov) == pytest.approx([0.25, 0.25], abs=1e-10 * (1 + c.abs_mu**2))
    rotated = output_covariance(c, "rotated_pm")
    assert np.max(np.abs(rotated - two_mode_squeezed_covariance(c))) <= tol


@given(munu(max_nu=10.0), st.floats(0, math.pi))
def test_isotropy_and_extremal_rotated_variances(c, phi):
    cov = output_covariance(c)
    u = np.array([math.cos(phi), 0, math.sin(phi), 0])
    var_s = u @ cov @ u
    assert var_s == pytest.approx((c.abs_mu**2 + c.abs_nu**2) / 4, rel=1e-10)
    rotated = output_covariance(c, "rotated_pm")
    # x''_- and y''_+ carry the smallest variance of any quadrature
    lo = (c.abs_mu - c.abs_nu) ** 2 / 4
    hi = (c.abs_mu + c.abs_nu) ** 2 / 4
    for block in ([0, 2], [1, 3]):
        sub = rotated[np.ix_(block, block)]
        v = np.array([math.cos(phi), math.sin(phi)])
        assert lo * (1 - 1e-9) <= v @ sub @ v <= hi * (1 + 1e-9)


def test_gaussian_state_validation():
    state = GaussianState.coherent(0.3 + 0.1j, -0.2j)
    assert state.mean.tolist() == [0.3, 0.0, 0.1, -0.2]
    squeezed = state.transformed(build_s_tot(MuNu.from_polar(1.2, 0.3, 0.4)))
    assert symplectic_eigenvalues(squeezed.cov) == pytest.approx([0.25, 0.25])
    with pytest.raises(ValueError):
        GaussianState(np.zeros(2), np.diag([0.1, 0.1]))
    with pytest.raises(ValueError):
        GaussianState(np.zeros(2), np.array([[0.3, 0.1], [0.0, 0.3]]))
    with pytest.raises(ValueError):
        GaussianState(np.zeros(3), np.eye(3))


def test_duan_examples(single_pump):
    assert duan_lhs(MuNu(1, 0)) == 0.5
    fiber, pump = single_pump
    c = coeffs_B(fiber, pump)
    assert duan_lhs(c) == pytest.approx(0.119239, abs=1e-6)
    oracle = extract_mu_nu(fiber, pump)
    assert duan_lhs(oracle) == pytest.approx(duan_lhs(c), abs=1e-8)
    rotated = output_covariance(c, "rotated_pm")
    assert rotated[1, 1] + rotated[2, 2] == pytest.approx(duan_lhs(c), rel=1e-10)


def test_duan_decreases_with_pump_power():
    fiber = FiberParams(GAMMA, 4.53e-11, LENGTH)
    values = [duan_lhs(coeffs_B(fiber, PumpConfigB(p))) for p in np.linspace(0.005, 0.5, 100)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[0] < 0.5


@given(munu())
def test_duan_partner_product(c):
    assert (c.abs_mu - c.abs_nu) ** 2 * (c.abs_mu + c.abs_nu) ** 2 == pytest.approx(1.0, abs=1e-10 * (1 + c.abs_mu**2))
    assert duan_lhs(c) <= 0.5 + 1e-15


def test_quadrature_variance_broadcasts(two_pump):
    c = coeffs_A(*two_pump)
    phis = np.linspace(0, math.pi, 5)
    assert quadrature_variance_A(c, phis).shape == (5,)
