"""Lumped loss before or after the amplifier.

Loss is a beamsplitter of amplitude transmissivity ``tau`` that mixes in a
vacuum mode.  Layout ``AL`` is amplifier-then-loss, ``LA`` loss-then-amplifier.
For configuration B only the output signal is detected, so its noise
figures inherit the input-SNR convention of
:func:`psafiber.noise.signal_only_nf_B`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fwm import MuNu
from .noise import (
    VACUUM_VARIANCE,
    SnrReport,
    _projection_A,
    _report,
    input_snr_B,
    quadrature_variance_A,
    signal_mean_B,
)

ORDERS = ("AL", "LA")
CONFIGS = ("A", "B")


@dataclass(frozen=True)
class LossChannel:
    tau: float
    tau_idler: float | None = None

    def __post_init__(self):
        for name, t in (("tau", self.tau), ("tau_idler", self.tau_idler)):
            if t is not None and not (0 < t <= 1):
                raise ValueError(f"{name} must lie in (0, 1], got {t!r}")

    @property
    def rho(self) -> float:
        return math.sqrt(1.0 - self.tau**2)

    @property
    def tau_i(self) -> float:
        return self.tau if self.tau_idler is None else self.tau_idler


@dataclass(frozen=True)
class LinkLayout:
    order: str
    config: str

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}, got {self.order!r}")
        if self.config not in CONFIGS:
            raise ValueError(f"config must be one of {CONFIGS}, got {self.config!r}")


@dataclass(frozen=True)
class LinkInputs:
    """Coherent amplitudes entering the link; the idler is ignored for config A."""

    signal: complex
    idler: complex = 0j


def _lam(coeffs: MuNu, phi):
    return 4 * quadrature_variance_A(coeffs, phi)


def lossy_homodyne_stats(
    coeffs: MuNu, layout: LinkLayout, loss: LossChannel, inputs: LinkInputs, phi
):
    """Mean and variance of the detected output quadrature ``x_phi``.

    Variances (``G0 = |mu|^2 + |nu|^2``):

    * A/AL: ``[tau^2 (lambda_phi - 1) + 1] / 4``
    * A/LA: ``lambda_phi / 4``, the lossless value, since loss before the
      amplifier only swaps vacuum for vacuum
    * B/AL: ``[tau_s^2 (G0 - 1) + 1] / 4 = tau_s^2 |nu|^2 / 2 + 1/4``
    * B/LA: ``G0 / 4``
    """
    phi = np.asarray(phi)
    t2 = loss.tau**2
    if layout.config == "A":
        a_s, t_s = abs(inputs.signal), np.angle(inputs.signal)
        proj = _projection_A(coeffs, t_s, phi)
        mean = loss.tau * (a_s * proj)
        lam = _lam(coeffs, phi)
        var = (t2 * lam + (1 - t2)) / 4 if layout.order == "AL" else lam / 4
        return mean, var

    g0 = coeffs.abs_mu**2 + coeffs.abs_nu**2
    if layout.order == "AL":
        mean = loss.tau * signal_mean_B(coeffs, inputs.signal, inputs.idler, phi)
        var = (t2 * g0 + (1 - t2)) / 4
    else:
        mean = signal_mean_B(coeffs, loss.tau * inputs.signal, loss.tau_i * inputs.idler, phi)
        var = g0 / 4
    return mean, var * np.ones_like(mean)


def nf_with_loss(
    coeffs: MuNu,
    layout: LinkLayout,
    loss: LossChannel,
    inputs: LinkInputs,
    phi,
    input_snr: str = "joint",
) -> SnrReport:
    """Noise figure of the whole link from the detected mean and variance.

    The input SNR follows the lossless functions: ``4 |a_s|^2`` for A and
    the ``input_snr`` convention of :func:`signal_only_nf_B` for B.
    """
    if abs(inputs.signal) == 0:
        raise ValueError("signal amplitude must be non-zero")
    if layout.config == "A":
        snr_in = abs(inputs.signal) ** 2 / VACUUM_VARIANCE
    else:
        snr_in = input_snr_B(inputs.signal, inputs.idler, input_snr)
    mean, var = lossy_homodyne_stats(coeffs, layout, loss, inputs, phi)
    return _report(snr_in, mean**2 / var)


def penalty_factor(coeffs: MuNu, layout: LinkLayout, loss: LossChannel, phi=None):
    """Ratio of lossy to lossless noise figure for equal signal/idler transmission.

    AL: ``(G tau^2 - tau^2 + 1) / (G tau^2)`` with ``G = lambda_phi`` (A) or
    ``|mu|^2 + |nu|^2`` (B).  LA: ``1 / tau^2``.  ``phi`` is needed for A/AL only.
    """
    t2 = loss.tau**2
    if layout.order == "LA":
        return 1.0 / t2
    if layout.config == "A":
        if phi is None:
            raise ValueError("phi is required for the A/AL penalty")
        g = _lam(coeffs, phi)
    else:
        g = coeffs.abs_mu**2 + coeffs.abs_nu**2
    return (g * t2 - t2 + 1) / (g * t2)


def link_gain(coeffs: MuNu, config: str) -> float:
    """Gain entering the loss formulas: ``(|mu|+|nu|)^2`` for A, ``|mu|^2+|nu|^2`` for B."""
    if config == "A":
        return (coeffs.abs_mu + coeffs.abs_nu) ** 2
    if config == "B":
        return coeffs.abs_mu**2 + coeffs.abs_nu**2
    raise ValueError(f"config must be 'A' or 'B', got {config!r}")


def lossless_nf_optimum(coeffs: MuNu, config: str, input_snr: str = "joint") -> float:
    """Lowest lossless NF of the detection scheme used by the link."""
    if config == "A":
        return 1.0
    g0 = coeffs.abs_mu**2 + coeffs.abs_nu**2
    smax = (coeffs.abs_mu + coeffs.abs_nu) ** 2
    if input_snr == "joint":
        return 2 * g0 / smax
    if input_snr == "signal":
        return g0 / smax
    raise ValueError(f"input_snr must be 'joint' or 'signal', got {input_snr!r}")


def nf_optimum(
    coeffs: MuNu, layout: LinkLayout, loss: LossChannel, input_snr: str = "joint"
) -> float:
    """Minimum of :func:`nf_with_loss` over input and detection phases.

    Config A: ``1 - 1/G + 1/(G tau^2)`` (AL, ``G = G_max``) and ``1/tau^2`` (LA).
    Config B carries the same factors with ``G = G0`` multiplied by the
    lowest lossless signal-only NF, since signal-only detection is not
    noiseless even without loss.
    """
    g = link_gain(coeffs, layout.config)
    t2 = loss.tau**2
    factor = 1 - 1 / g + 1 / (g * t2) if layout.order == "AL" else 1 / t2
    return lossless_nf_optimum(coeffs, layout.config, input_snr) * factor


def layout_ratio(coeffs: MuNu, loss: LossChannel, config: str | None = None) -> float:
    """``NF_opt(AL) / NF_opt(LA) = (G tau^2 - tau^2 + 1) / G``; below 1 when G > 1."""
    config = config or coeffs.config
    g = link_gain(coeffs, config)
    t2 = loss.tau**2
    return (g * t2 - t2 + 1) / g


def nf_grid(
    coeffs: MuNu,
    layout: LinkLayout,
    loss: LossChannel,
    n_input: int = 200,
    n_phi: int = 200,
    input_snr: str = "joint",
):
    """Noise figure on a regular grid of input phase and detection phase.

    Config A scans the signal phase; config B keeps the signal phase at 0
    and scans the idler phase, with equal signal and idler amplitudes.
    Both phases span ``[0, pi)`` for A (the NF has period pi in each) and
    the idler phase spans ``[0, 2 pi)`` for B.  Returns
    ``(input_angles, phis, nf)`` with ``nf[i, j]`` at ``(input_angles[i], phis[j])``.
    """
    span = math.pi if layout.config == "A" else 2 * math.pi
    inp = np.arange(n_input) * (span / n_input)
    phis = np.arange(n_phi) * (math.pi / n_phi)
    nf = np.empty((n_input, n_phi))
    for k, angle in enumerate(inp):
        unit = complex(math.cos(angle), math.sin(angle))
        inputs = LinkInputs(unit) if layout.config == "A" else LinkInputs(1.0, unit)
        nf[k] = nf_with_loss(coeffs, layout, loss, inputs, phis, input_snr).noise_figure
    return inp, phis, nf
