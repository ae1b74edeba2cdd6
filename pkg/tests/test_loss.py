import cmath
import math

import numpy as np
import pytest
from conftest import munu, phases
from hypothesis import given
from hypothesis import strategies as st

from psafiber.fwm import MuNu, coeffs_A, coeffs_B, gain_extrema
from psafiber.loss import (
    LinkInputs,
    LinkLayout,
    LossChannel,
    layout_ratio,
    lossless_nf_optimum,
    lossy_homodyne_stats,
    nf_grid,
    nf_optimum,
    nf_with_loss,
    penalty_factor,
)
from psafiber.noise import homodyne_stats_A, noise_figure_A, signal_only_nf_B
from psafiber.sampling import sample_link

LAYOUTS = [LinkLayout(o, c) for c in ("A", "B") for o in ("AL", "LA")]
taus = st.floats(0.05, 1.0)


def _written_variance(c: MuNu, layout: LinkLayout, tau: float, phi: float) -> float:
    am, an = c.abs_mu, c.abs_nu
    cosine = math.cos(c.theta_mu + c.theta_nu - 2 * phi)
    t2 = tau * tau
    if layout.config == "A" and layout.order == "AL":
        return (t2 * (2 * am * an * cosine + am**2 + an**2 - 1) + 1) / 4
    if layout.config == "A":
        return am * an * cosine / 2 + an**2 / 2 + 0.25
    if layout.order == "AL":
        return t2 * an**2 / 2 + 0.25
    return (am**2 + an**2) / 4


def test_loss_channel_validation():
    assert LossChannel(0.6).rho == pytest.approx(0.8)
    assert LossChannel(1.0).rho == 0.0
    assert LossChannel(0.5, 0.7).tau_i == 0.7
    assert LossChannel(0.5).tau_i == 0.5
    for bad in (0.0, -0.1, 1.01, math.nan):
        with pytest.raises(ValueError):
            LossChannel(bad)
    with pytest.raises(ValueError):
        LossChannel(0.5, 0.0)


def test_layout_validation():
    with pytest.raises(ValueError):
        LinkLayout("XL", "A")
    with pytest.raises(ValueError):
        LinkLayout("AL", "C")


@given(munu(), phases, phases, taus, st.sampled_from(LAYOUTS))
def test_variances_match_written_forms(c, phi, t_s, tau, layout):
    _, var = lossy_homodyne_stats(c, layout, LossChannel(tau), LinkInputs(cmath.rect(1, t_s), 0.3j), phi)
    expected = _written_variance(c, layout, tau, phi)
    assert float(var) == pytest.approx(expected, rel=1e-10, abs=1e-12)


@given(munu(), phases, phases, phases)
def test_unit_transmission_is_lossless(c, phi, t_s, t_i):
    signal, idler = cmath.rect(0.7, t_s), cmath.rect(0.4, t_i)
    for layout in LAYOUTS:
        lossy = nf_with_loss(c, layout, LossChannel(1.0), LinkInputs(signal, idler), phi)
        mean, var = lossy_homodyne_stats(c, layout, LossChannel(1.0), LinkInputs(signal, idler), phi)
        if layout.config == "A":
            ref = noise_figure_A(c, np.angle(signal), phi, abs(signal))
            ref_mean, ref_var = homodyne_stats_A(c, signal, phi)
            assert var == ref_var
            assert mean == pytest.approx(ref_mean, rel=1e-14, abs=1e-14)
        else:
            ref = signal_only_nf_B(c, signal, idler, phi)
        assert lossy.noise_figure == ref.noise_figure


def test_pure_beamsplitter_keeps_vacuum_variance():
    c = MuNu(1, 0)
    for phi in np.linspace(0, math.pi, 7):
        for tau in (0.1, 0.5, 0.9):
            _, var = lossy_homodyne_stats(c, LinkLayout("AL", "A"), LossChannel(tau), LinkInputs(0.5), phi)
            assert var == pytest.approx(0.25, abs=1e-15)


@given(munu(max_nu=20), phases, taus)
def test_variance_floor_after_amplifier(c, phi, tau):
    _, var = lossy_homodyne_stats(c, LinkLayout("AL", "A"), LossChannel(tau), LinkInputs(1.0), phi)
    floor = (1 - tau**2) / 4 + tau**2 * (c.abs_mu - c.abs_nu) ** 2 / 4
    assert var >= floor - 1e-12 * (1 + c.abs_mu**2)


@given(munu(max_nu=20), phases, phases, taus, st.sampled_from(LAYOUTS))
def test_penalty_factor(c, phi, t_s, tau, layout):
    loss = LossChannel(tau)
    signal, idler = cmath.rect(1.0, t_s), cmath.rect(1.0, -t_s)
    lossless = nf_with_loss(c, layout, LossChannel(1.0), LinkInputs(signal, idler), phi).noise_figure
    lossy = nf_with_loss(c, layout, loss, LinkInputs(signal, idler), phi).noise_figure
    if not (math.isfinite(lossless) and lossless < 1e8):
        return
    assert lossy == pytest.approx(lossless * penalty_factor(c, layout, loss, phi), rel=1e-8)


def test_penalty_needs_phi_for_a_al():
    with pytest.raises(ValueError):
        penalty_factor(MuNu(1, 0), LinkLayout("AL", "A"), LossChannel(0.5))


def test_optimum_formulas_config_a(two_pump):
    c = coeffs_A(*two_pump)
    g = gain_extrema(c)[0]
    loss = LossChannel(math.sqrt(0.5))
    assert nf_optimum(c, LinkLayout("AL", "A"), loss) == pytest.approx(1 - 1 / g + 1 / (g * 0.5), rel=1e-12)
    assert nf_optimum(c, LinkLayout("LA", "A"), loss) == pytest.approx(2.0, rel=1e-12)


def test_optimum_at_optimal_coordinates_config_a(two_pump):
    c = coeffs_A(*two_pump)
    loss = LossChannel(0.8)
    t_s = (c.theta_nu - c.theta_mu) / 2
    phi = (c.theta_mu + c.theta_nu) / 2
    for layout in (LinkLayout("AL", "A"), LinkLayout("LA", "A")):
        got = nf_with_loss(c, layout, loss, LinkInputs(cmath.rect(1, t_s)), phi).noise_figure
        assert got == pytest.approx(nf_optimum(c, layout, loss), rel=1e-12)


def test_optimum_config_b_carries_lossless_factor(single_pump):
    c = coeffs_B(*single_pump)
    loss = LossChannel(0.7)
    g0 = c.abs_mu**2 + c.abs_nu**2
    for snr in ("joint", "signal"):
        base = lossless_nf_optimum(c, "B", snr)
        al = nf_optimum(c, LinkLayout("AL", "B"), loss, snr)
        la = nf_optimum(c, LinkLayout("LA", "B"), loss, snr)
        assert al / base == pytest.approx(1 - 1 / g0 + 1 / (g0 * 0.49), rel=1e-12)
        assert la / base == pytest.approx(1 / 0.49, rel=1e-12)
    assert lossless_nf_optimum(c, "B", "joint") == pytest.approx(2 * lossless_nf_optimum(c, "B", "signal"))


def test_optimum_is_one_without_loss():
    c = MuNu.from_polar(3.0, 0.2, 1.1)
    for layout in (LinkLayout("AL", "A"), LinkLayout("LA", "A")):
        assert nf_optimum(c, layout, LossChannel(1.0)) == pytest.approx(1.0, abs=1e-15)


def test_infinite_gain_makes_output_loss_free():
    c = MuNu.from_polar(1e6, 0.0, 0.0)
    assert nf_optimum(c, LinkLayout("AL", "A"), LossChannel(0.3)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("layout", LAYOUTS, ids=lambda l: f"{l.config}-{l.order}")
def test_grid_minimum_matches_optimum(two_pump, single_pump, layout):
    c = coeffs_A(*two_pump) if layout.config == "A" else coeffs_B(*single_pump)
    loss = LossChannel(math.sqrt(0.5))
    _, _, nf = nf_grid(c, layout, loss, 240, 240)
    best = nf_optimum(c, layout, loss)
    assert np.nanmin(nf) >= best * (1 - 1e-12)
    assert np.nanmin(nf) == pytest.approx(best, rel=5e-3)


def test_al_optimum_monotone():
    taus_ = np.linspace(0.1, 1.0, 40)
    gains = np.linspace(0.5, 30, 40)
    table = np.array(
        [[nf_optimum(MuNu.from_polar(n, 0, 0), LinkLayout("AL", "A"), LossChannel(t)) for t in taus_] for n in gains]
    )
    assert np.all(np.diff(table, axis=1) < 0)
    assert np.all(np.diff(table[:, :-1], axis=0) < 0)
    assert np.all(table[:, -1] == pytest.approx(1.0, abs=1e-15))


def test_la_optimum_gain_independent():
    values = {nf_optimum(MuNu.from_polar(n, 0.3, 0.1), LinkLayout("LA", "A"), LossChannel(0.6)) for n in (0, 1, 10)}
    assert len(values) == 1


def test_layout_ratio_values(two_pump):
    c = coeffs_A(*two_pump)
    loss = LossChannel(math.sqrt(0.5))
    g = gain_extrema(c)[0]
    assert layout_ratio(c, loss) == pytest.approx((g * 0.5 - 0.5 + 1) / g, rel=1e-12)
    assert layout_ratio(c, loss) == pytest.approx(0.5376, abs=1e-3)
    ratio = nf_optimum(c, LinkLayout("AL", "A"), loss) / nf_optimum(c, LinkLayout("LA", "A"), loss)
    assert layout_ratio(c, loss) == pytest.approx(ratio, rel=1e-12)
    assert layout_ratio(MuNu(1, 0), loss, "A") == 1.0


def test_layout_ratio_below_one_on_sweep():
    for n in np.linspace(0.01, 10, 60):
        c = MuNu.from_polar(n, 0, 0)
        if (c.abs_mu + c.abs_nu) ** 2 > 100:
            continue
        for t2 in np.linspace(0.05, 1, 60, endpoint=False)[1:]:
            assert layout_ratio(c, LossChannel(math.sqrt(t2)), "A") < 1


def test_configurations_share_loss_formulas():
    c = MuNu.from_polar(2.0, 0.4, -0.3)
    loss = LossChannel(0.6)
    g_a = (c.abs_mu + c.abs_nu) ** 2
    g_b = c.abs_mu**2 + c.abs_nu**2
    factor = lambda g: 1 - 1 / g + 1 / (g * 0.36)  # noqa: E731
    assert nf_optimum(c, LinkLayout("AL", "A"), loss) == pytest.approx(factor(g_a))
    assert nf_optimum(c, LinkLayout("AL", "B"), loss) / lossless_nf_optimum(c, "B") == pytest.approx(factor(g_b))


MC_CASES = [
    ("A", "AL", 0.9 + 0.2j, 0j),
    ("A", "LA", -0.3 + 0.5j, 0j),
    ("B", "AL", 0.4 + 0.1j, 0.2 - 0.3j),
    ("B", "LA", 0.1j, 0.6),
]


@pytest.mark.parametrize("config,order,a_s,a_i", MC_CASES)
def test_lossy_moments_match_sampling(two_pump, single_pump, config, order, a_s, a_i):
    c = coeffs_A(*two_pump) if config == "A" else coeffs_B(*single_pump)
    tau, phi = 0.75, 0.7
    mean, var = lossy_homodyne_stats(c, LinkLayout(order, config), LossChannel(tau), LinkInputs(a_s, a_i), phi)
    stats = sample_link(c, config, phi, a_s, a_i, order, tau, n=1_000_000, seed=11)
    assert stats.variance_within(float(var))
    assert stats.mean_within(float(mean))


def test_nf_rejects_zero_signal():
    with pytest.raises(ValueError):
        nf_with_loss(MuNu(1, 0), LinkLayout("AL", "A"), LossChannel(0.5), LinkInputs(0j), 0.0)
