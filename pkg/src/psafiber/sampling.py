"""Monte-Carlo check of Gaussian moments by sampling the Wigner function.

Each mode is carried as a complex array of samples ``a = x + i y`` whose
vacuum fluctuations have variance 1/4 per quadrature.  Linear maps
(amplifier, beamsplitter) act sample by sample, so the statistics of the
transformed samples do not depend on any covariance formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fwm import MuNu

_VACUUM_STD = 0.5


@dataclass(frozen=True)
class SampleStats:
    mean: float
    variance: float
    stderr_variance: float
    stderr_mean: float

    def variance_within(self, expected: float, n_sigma: float = 3.0) -> bool:
        return abs(self.variance - expected) <= n_sigma * self.stderr_variance

    def mean_within(self, expected: float, n_sigma: float = 3.0) -> bool:
        return abs(self.mean - expected) <= n_sigma * self.stderr_mean


def coherent_samples(alpha: complex, n: int, rng: np.random.Generator) -> np.ndarray:
    noise = rng.normal(0.0, _VACUUM_STD, size=(2, n))
    return alpha + noise[0] + 1j * noise[1]


def amplify(a: np.ndarray, partner: np.ndarray, coeffs: MuNu) -> np.ndarray:
    """``mu a + nu conj(partner)``; pass ``a`` as its own partner for a single mode."""
    return coeffs.mu * a + coeffs.nu * np.conj(partner)


def attenuate(a: np.ndarray, tau: float, rng: np.random.Generator) -> np.ndarray:
    """Beamsplitter with amplitude transmissivity ``tau`` and a vacuum in the open port."""
    return tau * a + math.sqrt(1.0 - tau * tau) * coherent_samples(0j, a.size, rng)


def quadrature(a: np.ndarray, phi: float) -> np.ndarray:
    return (a * np.exp(-1j * phi)).real


def summarize(x: np.ndarray) -> SampleStats:
    n = x.size
    var = float(np.var(x, ddof=1))
    return SampleStats(float(np.mean(x)), var, var * math.sqrt(2.0 / (n - 1)), math.sqrt(var / n))


def sample_link(
    coeffs: MuNu,
    config: str,
    phi: float,
    alpha_s0: complex = 0j,
    alpha_i0: complex = 0j,
    order: str | None = None,
    tau: float = 1.0,
    tau_idler: float | None = None,
    n: int = 1_000_000,
    seed: int = 0,
) -> SampleStats:
    """Sample the detected signal quadrature of an amplifier with optional loss.

    ``order`` is ``None`` (lossless), ``"AL"`` or ``"LA"``.  ``config="A"``
    is the single-mode amplifier; ``"B"`` amplifies a signal/idler pair and
    detects the signal.
    """
    if config not in ("A", "B"):
        raise ValueError(f"config must be 'A' or 'B', got {config!r}")
    if order not in (None, "AL", "LA"):
        raise ValueError(f"order must be None, 'AL' or 'LA', got {order!r}")
    tau_i = tau if tau_idler is None else tau_idler
    rng = np.random.default_rng(seed)
    sig = coherent_samples(complex(alpha_s0), n, rng)
    idl = coherent_samples(complex(alpha_i0), n, rng) if config == "B" else None

    if order == "LA":
        sig = attenuate(sig, tau, rng)
        if idl is not None:
            idl = attenuate(idl, tau_i, rng)
    out = amplify(sig, sig if idl is None else idl, coeffs)
    if order == "AL":
        out = attenuate(out, tau, rng)
    return summarize(quadrature(out, phi))
