"""Undepleted-pump solutions of the three-wave four-wave-mixing system.

Two pumping schemes are covered:

* configuration ``"A"``: two non-degenerate pumps ``A1``, ``A3`` and a
  degenerate signal/idler ``A2``;
* configuration ``"B"``: a degenerate pump ``A2`` and a non-degenerate
  signal ``A1`` / idler ``A3`` pair.

In both cases the linearised signal evolves as ``A_s = mu*A_s0 + nu*conj(A_x0)``
with ``|mu|^2 - |nu|^2 = 1``.  Everything here is SI: W, m, rad.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

Basis = Literal["signal", "plus", "minus"]
PhaseConvention = Literal["lab", "pump_frame"]

# |g^2| z^2 below this switches cosh/sinh to their Taylor series
SERIES_THRESHOLD = 1e-8


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not np.all(np.isfinite(value)):
            raise ValueError(f"{name} must be finite, got {value!r}")


def wrap_phase(angle: float) -> float:
    """Map an angle onto (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def phase_distance(a: float, b: float, period: float = 2.0 * math.pi) -> float:
    """Smallest absolute difference between two angles modulo ``period``."""
    return abs(math.remainder(a - b, period))


@dataclass(frozen=True)
class FiberParams:
    """Nonlinear fiber: ``gamma`` in 1/(W m), ``delta_beta`` in 1/m, ``length`` in m."""

    gamma: float
    delta_beta: float
    length: float

    def __post_init__(self):
        _check_finite(gamma=self.gamma, delta_beta=self.delta_beta, length=self.length)
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.length < 0:
            raise ValueError("length must be non-negative")


@dataclass(frozen=True)
class PumpConfigA:
    """Two non-degenerate pumps (powers in W, input phases in rad)."""

    p1: float
    p3: float
    theta10: float = 0.0
    theta30: float = 0.0

    def __post_init__(self):
        _check_finite(p1=self.p1, p3=self.p3, theta10=self.theta10, theta30=self.theta30)
        if self.p1 <= 0 or self.p3 <= 0:
            raise ValueError("pump powers must be positive")


@dataclass(frozen=True)
class PumpConfigB:
    """Single degenerate pump (power in W, input phase in rad)."""

    p2: float
    theta20: float = 0.0

    def __post_init__(self):
        _check_finite(p2=self.p2, theta20=self.theta20)
        if self.p2 <= 0:
            raise ValueError("pump power must be positive")


@dataclass(frozen=True)
class MuNu:
    """Bogoliubov pair of a single-mode (or +/-) parametric map.

    ``kappa`` and ``g_squared`` are kept for reference; they are ``nan`` for
    pairs built directly from numbers rather than fiber parameters.
    """

    mu: complex
    nu: complex
    kappa: float = math.nan
    g_squared: float = math.nan
    config: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        object.__setattr__(self, "nu", complex(self.nu))
        _check_finite(mu=abs(self.mu), nu=abs(self.nu))
        scale = max(1.0, abs(self.mu) ** 2)
        if abs(self.symplectic_defect) > 1e-9 * scale:
            raise ValueError(f"|mu|^2 - |nu|^2 = {1 + self.symplectic_defect!r}, expected 1")

    @classmethod
    def from_polar(cls, abs_nu: float, theta_mu: float, theta_nu: float, **kwargs) -> MuNu:
        """Build a valid pair from ``|nu|`` and the two phases."""
        abs_mu = math.sqrt(1.0 + abs_nu * abs_nu)
        return cls(cmath.rect(abs_mu, theta_mu), cmath.rect(abs_nu, theta_nu), **kwargs)

    @property
    def symplectic_defect(self) -> float:
        return abs(self.mu) ** 2 - abs(self.nu) ** 2 - 1.0

    @property
    def theta_mu(self) -> float:
        return wrap_phase(cmath.phase(self.mu))

    @property
    def theta_nu(self) -> float:
        return wrap_phase(cmath.phase(self.nu))

    @property
    def abs_mu(self) -> float:
        return abs(self.mu)

    @property
    def abs_nu(self) -> float:
        return abs(self.nu)

    def flipped(self) -> MuNu:
        """The pair seen by the ``-`` mode, ``nu -> -nu``."""
        return MuNu(self.mu, -self.nu, self.kappa, self.g_squared, self.config)


@dataclass(frozen=True)
class QuadTransfer:
    """Real quadrature transfer matrix with the basis it acts in."""

    m: np.ndarray
    basis: str = "signal"

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.m))

    def __matmul__(self, other):
        return self.m @ np.asarray(other)


@dataclass(frozen=True)
class MappedParams:
    """Configuration-B parameters equivalent to a configuration-A pump pair.

    ``delta_beta`` is the B-side mismatch giving the same ``kappa``;
    ``phase_rate`` is the A-side ``delta`` that replaces ``delta_beta/2``.
    """

    p2: float
    theta20: float
    delta_beta: float
    phase_rate: float = field(default=math.nan)


def gain_terms(g_squared: float, z: float) -> tuple[float, float]:
    """Return ``(cosh(g z), sinh(g z)/g)`` as real functions of ``g**2``.

    For ``g**2 < 0`` these continue analytically to ``cos(|g| z)`` and
    ``sin(|g| z)/|g|``; near ``g = 0`` a Taylor series avoids the 0/0.
    """
    x = g_squared * z * z
    if abs(x) < SERIES_THRESHOLD:
        return 1.0 + x / 2.0 + x * x / 24.0, z * (1.0 + x / 6.0 + x * x / 120.0)
    if g_squared > 0:
        g = math.sqrt(g_squared)
        return math.cosh(g * z), math.sinh(g * z) / g
    g = math.sqrt(-g_squared)
    return math.cos(g * z), math.sin(g * z) / g


def coeffs_A(fiber: FiberParams, pumps: PumpConfigA) -> MuNu:
    """Propagator pair for two non-degenerate pumps (degenerate signal/idler)."""
    gamma, z = fiber.gamma, fiber.length
    root = math.sqrt(pumps.p1 * pumps.p3)
    kappa = fiber.delta_beta + gamma * (pumps.p1 + pumps.p3)
    # factored form keeps precision when g^2 nearly cancels
    g2 = (2 * gamma * root - kappa / 2) * (2 * gamma * root + kappa / 2)
    delta = (3 * gamma * (pumps.p1 + pumps.p3) - fiber.delta_beta) / 2
    c, s = gain_terms(g2, z)
    common = cmath.exp(1j * delta * z)
    mu = complex(c, kappa * s / 2) * common
    nu = 2j * gamma * root * s * cmath.exp(1j * (pumps.theta10 + pumps.theta30)) * common
    return MuNu(mu, nu, kappa, g2, "A")


def coeffs_B(
    fiber: FiberParams, pump: PumpConfigB, phase_convention: PhaseConvention = "lab"
) -> MuNu:
    """Propagator pair for a degenerate pump (non-degenerate signal/idler).

    ``phase_convention="lab"`` keeps the common phase ``(gamma P2 + dbeta/2) z``
    that the raw field equations produce.  ``"pump_frame"`` measures the fields
    against the output pump phase, which removes ``gamma P2 z`` and leaves
    ``dbeta z / 2``.
    """
    gamma, z, p2 = fiber.gamma, fiber.length, pump.p2
    kappa = 2 * gamma * p2 - fiber.delta_beta
    g2 = (gamma * p2 - kappa / 2) * (gamma * p2 + kappa / 2)
    c, s = gain_terms(g2, z)
    if phase_convention == "lab":
        rate = gamma * p2 + fiber.delta_beta / 2
    elif phase_convention == "pump_frame":
        rate = fiber.delta_beta / 2
    else:
        raise ValueError(f"unknown phase convention {phase_convention!r}")
    common = cmath.exp(1j * rate * z)
    mu = complex(c, kappa * s / 2) * common
    nu = 1j * gamma * p2 * s * cmath.exp(2j * pump.theta20) * common
    return MuNu(mu, nu, kappa, g2, "B")


def power_gain_A(coeffs: MuNu, theta_s0: float) -> float:
    """Signal power gain ``|mu e^{i t} + nu e^{-i t}|^2`` for input phase ``t``."""
    am, an = coeffs.abs_mu, coeffs.abs_nu
    rel = coeffs.theta_mu - coeffs.theta_nu + 2 * theta_s0
    return max(am * am + an * an + 2 * am * an * math.cos(rel), 0.0)


def power_gain_A_expanded(fiber: FiberParams, pumps: PumpConfigA, theta_s0: float) -> float:
    """Same gain written through the relative phase ``2 t_s0 - t_10 - t_30``."""
    gamma, z = fiber.gamma, fiber.length
    root = math.sqrt(pumps.p1 * pumps.p3)
    kappa = fiber.delta_beta + gamma * (pumps.p1 + pumps.p3)
    g2 = (2 * gamma * root - kappa / 2) * (2 * gamma * root + kappa / 2)
    xi = 2 * theta_s0 - pumps.theta10 - pumps.theta30
    c, s = gain_terms(g2, z)
    # sinh^2(gz)/g^2 = s^2 and sinh(2gz)/g = 2 c s hold on both sides of g^2 = 0
    sinh2 = g2 * s * s
    bracket = sinh2 + (kappa**2 + 16 * gamma**2 * root**2 + 8 * kappa * gamma * root * math.cos(xi)) * s * s / 4
    return 1 + bracket + 2 * gamma * root * math.sin(xi) * 2 * c * s


def power_gain_B(
    coeffs: MuNu, theta_s0: float, theta_i0: float, eta: float, mode: str = "signal"
) -> float:
    """Power gain for configuration B with idler/signal amplitude ratio ``eta``.

    ``mode="idler"`` returns the idler gain, which is the signal expression
    with ``eta -> 1/eta``.
    """
    if eta < 0 or not math.isfinite(eta):
        raise ValueError("eta must be a finite non-negative ratio")
    if mode == "idler":
        if eta == 0:
            raise ValueError("idler gain is undefined for a vacuum idler (eta = 0)")
        eta = 1.0 / eta
    elif mode != "signal":
        raise ValueError(f"mode must be 'signal' or 'idler', got {mode!r}")
    am, an = coeffs.abs_mu, coeffs.abs_nu
    rel = coeffs.theta_mu - coeffs.theta_nu + theta_s0 + theta_i0
    return max(am * am + eta * eta * an * an + 2 * eta * am * an * math.cos(rel), 0.0)


def power_gain_B_expanded(
    fiber: FiberParams, pump: PumpConfigB, theta_s0: float, theta_i0: float, eta: float
) -> float:
    gamma, z, p2 = fiber.gamma, fiber.length, pump.p2
    kappa = 2 * gamma * p2 - fiber.delta_beta
    g2 = (gamma * p2 - kappa / 2) * (gamma * p2 + kappa / 2)
    xi = theta_s0 + theta_i0 - 2 * pump.theta20
    c, s = gain_terms(g2, z)
    bracket = g2 * s * s + (kappa**2 + 4 * gamma**2 * p2**2 * eta**2 + 4 * kappa * gamma * eta * p2 * math.cos(xi)) * s * s / 4
    return 1 + bracket + gamma * eta * p2 * math.sin(xi) * 2 * c * s


def gain_extrema(coeffs: MuNu) -> tuple[float, float]:
    """Maximal and minimal phase-sensitive power gains."""
    am, an = coeffs.abs_mu, coeffs.abs_nu
    return (am + an) ** 2, (am - an) ** 2


def quad_transfer(coeffs: MuNu, basis: Basis = "signal") -> QuadTransfer:
    """2x2 real map acting on ``(X, Y)`` with ``A = X + iY``."""
    if basis in ("signal", "plus"):
        nu = coeffs.nu
    elif basis == "minus":
        nu = -coeffs.nu
    else:
        raise ValueError(f"unknown basis {basis!r}")
    a = coeffs.mu + nu
    b = coeffs.mu - nu
    return QuadTransfer([[a.real, -b.imag], [a.imag, b.real]], basis)


def propagate_field(coeffs: MuNu, a0: complex, partner: complex | None = None) -> complex:
    """``mu*a0 + nu*conj(partner)``; ``partner`` defaults to ``a0`` (configuration A)."""
    if partner is None:
        partner = a0
    return coeffs.mu * a0 + coeffs.nu * complex(partner).conjugate()


def pm_basis(a_s: complex, a_i: complex, direction: str = "to_pm") -> tuple[complex, complex]:
    """Symmetric/antisymmetric combinations ``(a_s +- a_i)/sqrt(2)``.

    The map is its own inverse, so ``direction`` only documents intent.
    """
    if direction not in ("to_pm", "from_pm"):
        raise ValueError(f"direction must be 'to_pm' or 'from_pm', got {direction!r}")
    r = 1 / math.sqrt(2)
    return (a_s + a_i) * r, (a_s - a_i) * r


def map_A_to_B_params(fiber: FiberParams, pumps: PumpConfigA) -> MappedParams:
    """Configuration-B parameters that reproduce a configuration-A propagator.

    ``P2 = 2 sqrt(P1 P3)`` and ``2 theta20 = theta10 + theta30``.  The B-side
    mismatch is chosen so both configurations share the same ``kappa``;
    then ``|mu|`` and ``|nu|`` coincide and only the common phase differs
    (``delta`` on the A side).
    """
    gamma = fiber.gamma
    p2 = 2 * math.sqrt(pumps.p1 * pumps.p3)
    kappa_a = fiber.delta_beta + gamma * (pumps.p1 + pumps.p3)
    delta = (3 * gamma * (pumps.p1 + pumps.p3) - fiber.delta_beta) / 2
    return MappedParams(
        p2=p2,
        theta20=(pumps.theta10 + pumps.theta30) / 2,
        delta_beta=2 * gamma * p2 - kappa_a,
        phase_rate=delta,
    )
