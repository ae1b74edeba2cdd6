"""Gaussian quantum layer: homodyne statistics, noise figures, covariances.

Quadratures follow ``x_phi = (a e^{-i phi} + a^dag e^{i phi}) / 2`` so the
vacuum variance is 1/4.  Two-mode vectors are ordered ``(x_s, x_i, y_s, y_i)``.
Scalar formulas accept numpy arrays for the phase arguments and broadcast.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .fwm import MuNu, QuadTransfer
from .optimum import optimal_idler_B

VACUUM_VARIANCE = 0.25


def symplectic_form(n_modes: int) -> np.ndarray:
    """``J = [[0, I], [-I, 0]]`` for the ``(x_1..x_n, y_1..y_n)`` ordering."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Williamson spectrum, computed as ``|eig(J cov)|`` (each value once)."""
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(symplectic_form(n) @ cov))
    return np.sort(ev)[::2]


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (mean.size, mean.size) or mean.size % 2:
            raise ValueError("mean must have even length and cov must match it")
        if np.max(np.abs(cov - cov.T)) > 1e-12:
            raise ValueError("covariance matrix is not symmetric")
        if np.min(symplectic_eigenvalues(cov)) < VACUUM_VARIANCE - 1e-10:
            raise ValueError("covariance violates the uncertainty principle")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def coherent(cls, *alphas: complex) -> GaussianState:
        alphas = np.asarray(alphas, dtype=complex)
        mean = np.concatenate([alphas.real, alphas.imag])
        return cls(mean, VACUUM_VARIANCE * np.eye(2 * len(alphas)))

    def transformed(self, s: np.ndarray | QuadTransfer) -> GaussianState:
        s = np.asarray(getattr(s, "m", s))
        return GaussianState(s @ self.mean, s @ self.cov @ s.T)


@dataclass(frozen=True)
class SnrReport:
    snr_in: float
    snr_out: float
    noise_figure: float

    @property
    def noise_figure_db(self):
        return 10 * np.log10(self.noise_figure)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _report(snr_in, snr_out):
    with np.errstate(divide="ignore", invalid="ignore"):
        nf = np.divide(snr_in, snr_out)
    return SnrReport(_scalar(snr_in), _scalar(snr_out), _scalar(nf))


def quadrature_variance_A(coeffs: MuNu, phi):
    """Output variance along ``phi`` for a coherent input (configuration A)."""
    am, an = coeffs.abs_mu, coeffs.abs_nu
    lam = 2 * am * an * np.cos(coeffs.theta_mu + coeffs.theta_nu - 2 * np.asarray(phi)) + am**2 + an**2
    return lam / 4


def _projection_A(coeffs: MuNu, theta_s0, phi):
    return coeffs.abs_mu * np.cos(coeffs.theta_mu + theta_s0 - phi) + coeffs.abs_nu * np.cos(
        coeffs.theta_nu - theta_s0 - phi
    )


def homodyne_stats_A(coeffs: MuNu, alpha_s0: complex, phi):
    """Mean and variance of the output quadrature ``x_phi`` (configuration A)."""
    amp, theta_s0 = abs(alpha_s0), cmath.phase(alpha_s0)
    mean = amp * _projection_A(coeffs, theta_s0, np.asarray(phi))
    return mean, quadrature_variance_A(coeffs, phi)


def noise_figure_A(coeffs: MuNu, theta_s0, phi, amplitude: float = 1.0) -> SnrReport:
    """Homodyne noise figure of the degenerate amplifier.

    The input SNR is taken along the signal's own phase, ``4 |alpha|^2``.
    The ratio is independent of ``amplitude``.
    """
    if amplitude <= 0:
        raise ValueError("signal amplitude must be positive")
    snr_in = amplitude**2 / VACUUM_VARIANCE
    mean = amplitude * _projection_A(coeffs, np.asarray(theta_s0), np.asarray(phi))
    return _report(snr_in, mean**2 / quadrature_variance_A(coeffs, phi))


def build_s_tot(coeffs: MuNu) -> QuadTransfer:
    """Two-mode symplectic map acting on ``(x_s, x_i, y_s, y_i)``."""
    mr, mi = coeffs.mu.real, coeffs.mu.imag
    nr, ni = coeffs.nu.real, coeffs.nu.imag
    s = [
        [mr, nr, -mi, ni],
        [nr, mr, ni, -mi],
        [mi, ni, mr, -nr],
        [ni, mi, -nr, mr],
    ]
    return QuadTransfer(s, "signal_idler")


def pm_change() -> np.ndarray:
    """``(x_s, x_i, y_s, y_i) -> (x_+, x_-, y_+, y_-)`` with ``x_pm = (x_s +- x_i)/sqrt(2)``."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    zero = np.zeros((2, 2))
    return np.block([[h, zero], [zero, h]])


def rotated_pm_change(coeffs: MuNu) -> np.ndarray:
    """Change of basis to the ``+``/``-`` modes rotated back by ``theta``.

    Output ordering is ``(x''_+, x''_-, y''_+, y''_-)``.
    """
    theta = (coeffs.theta_mu + coeffs.theta_nu) / 2
    c, s = math.cos(theta), math.sin(theta)
    eye = np.eye(2)
    rot = np.block([[c * eye, s * eye], [-s * eye, c * eye]])
    return rot @ pm_change()


def output_covariance(coeffs: MuNu, basis: str = "signal_idler") -> np.ndarray:
    """Output covariance for coherent (or vacuum) inputs on signal and idler."""
    s = build_s_tot(coeffs).m
    cov = VACUUM_VARIANCE * s @ s.T
    if basis == "signal_idler":
        return cov
    if basis == "rotated_pm":
        t = rotated_pm_change(coeffs)
        return t @ cov @ t.T
    raise ValueError(f"unknown basis {basis!r}")


def two_mode_squeezed_covariance(coeffs: MuNu) -> np.ndarray:
    """Diagonal covariance of the rotated ``+``/``-`` modes."""
    big = (coeffs.abs_mu + coeffs.abs_nu) ** 2
    small = (coeffs.abs_mu - coeffs.abs_nu) ** 2
    return VACUUM_VARIANCE * np.diag([big, small, small, big])


def duan_lhs(coeffs: MuNu) -> float:
    """``Var(x''_-) + Var(y''_+) = (|mu| - |nu|)^2 / 2``; below 1/2 means inseparable."""
    return (coeffs.abs_mu - coeffs.abs_nu) ** 2 / 2


def homodyne_transform(theta_s: float, theta_i: float) -> np.ndarray:
    """Rotate each mode to its detection phase, then form sum and difference modes.

    Ordering out: ``(x, x_diff, y, y_diff)``.
    """
    cs, ss = math.cos(theta_s), math.sin(theta_s)
    ci, si = math.cos(theta_i), math.sin(theta_i)
    rot = np.array(
        [
            [cs, 0, ss, 0],
            [0, ci, 0, si],
            [-ss, 0, cs, 0],
            [0, -si, 0, ci],
        ]
    )
    return pm_change() @ rot


def joint_mode_nf_B(coeffs: MuNu, alpha_s0: complex) -> SnrReport:
    """Noise figure of the joint signal+idler homodyne mode at the optimal idler.

    The idler is set to ``conj(alpha_s0) exp(-i (theta_mu - theta_nu))``;
    each mode is detected along its output mean-field phase and the two
    quadratures are summed with weight ``1/sqrt(2)``.
    """
    alpha_s0 = complex(alpha_s0)
    if alpha_s0 == 0:
        raise ValueError("signal amplitude must be non-zero")
    alpha_i0 = optimal_idler_B(coeffs, alpha_s0).idler_amplitude
    snr_in = (abs(alpha_s0) + abs(alpha_i0)) ** 2 / 2 / VACUUM_VARIANCE

    out_s = coeffs.mu * alpha_s0 + coeffs.nu * alpha_i0.conjugate()
    out_i = coeffs.nu * alpha_s0.conjugate() + coeffs.mu * alpha_i0
    theta_s = coeffs.theta_mu + cmath.phase(alpha_s0)
    theta_i = coeffs.theta_mu + cmath.phase(alpha_i0)
    t = homodyne_transform(theta_s, theta_i)
    mean_vec = t @ np.array([out_s.real, out_i.real, out_s.imag, out_i.imag])
    var = (t @ output_covariance(coeffs) @ t.T)[0, 0]
    return _report(snr_in, mean_vec[0] ** 2 / var)


def signal_mean_B(coeffs: MuNu, alpha_s0: complex, alpha_i0: complex, phi):
    """Mean of the output signal quadrature ``x_phi``."""
    t_s, t_i = cmath.phase(alpha_s0), cmath.phase(alpha_i0)
    phi = np.asarray(phi)
    return coeffs.abs_mu * abs(alpha_s0) * np.cos(coeffs.theta_mu + t_s - phi) + coeffs.abs_nu * abs(
        alpha_i0
    ) * np.cos(coeffs.theta_nu - t_i - phi)


def input_snr_B(alpha_s0: complex, alpha_i0: complex, input_snr: str = "joint") -> float:
    a_s, a_i = abs(alpha_s0), abs(alpha_i0)
    if input_snr == "joint":
        return (a_s + a_i) ** 2 / 2 / VACUUM_VARIANCE
    if input_snr == "signal":
        return a_s**2 / VACUUM_VARIANCE
    raise ValueError(f"input_snr must be 'joint' or 'signal', got {input_snr!r}")


def signal_only_nf_B(
    coeffs: MuNu, alpha_s0: complex, alpha_i0: complex, phi, input_snr: str = "joint"
) -> SnrReport:
    """Noise figure when only the output signal is detected (configuration B).

    ``input_snr="joint"`` counts the information carried by both input
    modes, ``2 (|a_s| + |a_i|)^2`` (``8 P_s`` at equal powers);
    ``"signal"`` counts the signal alone, ``4 |a_s|^2``, and gives the
    sub-unity values reported with that convention.
    """
    snr_in = input_snr_B(alpha_s0, alpha_i0, input_snr)
    mean = signal_mean_B(coeffs, alpha_s0, alpha_i0, phi)
    var = (coeffs.abs_mu**2 + coeffs.abs_nu**2) / 4
    return _report(snr_in, mean**2 / var)


def vacuum_idler_nf_B(coeffs: MuNu, alpha_s0: complex) -> SnrReport:
    """Phase-insensitive use: empty idler, detection along ``theta_mu + theta_s0``."""
    a = abs(alpha_s0)
    if a == 0:
        raise ValueError("signal amplitude must be non-zero")
    snr_in = a**2 / VACUUM_VARIANCE
    var = (coeffs.abs_mu**2 + coeffs.abs_nu**2) / 4
    return _report(snr_in, (coeffs.abs_mu * a) ** 2 / var)
