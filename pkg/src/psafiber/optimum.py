"""Input conditions for maximal noiseless gain."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .fwm import MuNu


@dataclass(frozen=True)
class OptimalInput:
    theta_s0: float
    predicted_gain: float
    idler_amplitude: complex | None = None


def optimal_signal_phase_A(coeffs: MuNu) -> OptimalInput:
    """Signal phase ``(theta_nu - theta_mu)/2`` that aligns the input with the amplified axis.

    This is the input-rotation angle ``phi`` of the Bloch-Messiah factors, so
    the first rotation brings the field onto X and the whole mean field is
    amplified by ``|mu| + |nu|``.  The phase is defined modulo pi.
    """
    theta = (coeffs.theta_nu - coeffs.theta_mu) / 2
    return OptimalInput(theta, (coeffs.abs_mu + coeffs.abs_nu) ** 2)


def optimal_idler_B(coeffs: MuNu, a_s0: complex) -> OptimalInput:
    """Idler ``A_i0 = conj(A_s0) exp(-i (theta_mu - theta_nu))`` for a given signal.

    With this idler both outputs are ``exp(i theta_mu) (|mu| + |nu|)`` times
    their inputs.
    """
    a_s0 = complex(a_s0)
    a_i0 = a_s0.conjugate() * cmath.exp(-1j * (coeffs.theta_mu - coeffs.theta_nu))
    return OptimalInput(cmath.phase(a_s0), (coeffs.abs_mu + coeffs.abs_nu) ** 2, a_i0)


def pia_stats(coeffs: MuNu) -> tuple[float, str]:
    """Gain with a vacuum (empty) idler: phase-insensitive ``|mu|^2``."""
    return coeffs.abs_mu**2, "phase-insensitive: vacuum idler, gain |mu|^2 for every signal phase"
