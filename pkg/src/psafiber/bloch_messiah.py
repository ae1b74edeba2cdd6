"""Rotation-squeeze-rotation factorisation of 2x2 quadrature transfers.

A transfer ``M`` is written as ``C R(theta) diag(d1, d2) R(phi)^T`` where
``R`` is a plane rotation and ``C = +-I``.  :func:`decompose` reads the
factors straight from the phases of ``(mu, nu)``; :func:`numeric_oracle`
gets them from the eigen-decomposition of ``M^T M`` and is used to check it.

Branch convention: both angles are reported in (-pi/2, pi/2]; a shift of
either angle by pi is absorbed in ``c_sign``.  In the ``minus`` basis the
paper-style factorisation keeps the angles of the ``plus`` basis and puts
the large gain on the second axis; this is flagged by ``swapped``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .fwm import (
    Basis,
    FiberParams,
    MuNu,
    PumpConfigA,
    PumpConfigB,
    QuadTransfer,
    gain_terms,
    quad_transfer,
)


class PoleDetected(ArithmeticError):
    pass


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class BMFactors:
    """``c_sign * R(theta) @ diag(...) @ R(phi).T``.

    ``s_plus >= 1 >= s_minus`` always; ``swapped`` puts ``s_plus`` on the
    second (Y) axis instead of the first.
    """

    theta: float
    phi: float
    s_plus: float
    s_minus: float
    c_sign: int = 1
    swapped: bool = False

    @property
    def diagonal(self) -> tuple[float, float]:
        if self.swapped:
            return self.s_minus, self.s_plus
        return self.s_plus, self.s_minus

    def canonical(self) -> BMFactors:
        """Equivalent factors with the large gain on the X axis."""
        if not self.swapped:
            return self
        return _normalize(
            replace(self, theta=self.theta + math.pi / 2, phi=self.phi + math.pi / 2, swapped=False)
        )


def _fold(angle: float) -> tuple[float, int]:
    """Fold onto (-pi/2, pi/2]; returns the angle and the sign picked up."""
    k = math.floor((angle + math.pi / 2) / math.pi)
    folded = angle - k * math.pi
    if folded <= -math.pi / 2:
        folded += math.pi
        k -= 1
    return folded, (-1 if k % 2 else 1)


def _normalize(f: BMFactors) -> BMFactors:
    theta, s1 = _fold(f.theta)
    phi, s2 = _fold(f.phi)
    return replace(f, theta=theta, phi=phi, c_sign=f.c_sign * s1 * s2)


def reconstruct(factors: BMFactors) -> QuadTransfer:
    d1, d2 = factors.diagonal
    m = factors.c_sign * rotation(factors.theta) @ np.diag([d1, d2]) @ rotation(factors.phi).T
    return QuadTransfer(m)


def _sign_against(m: np.ndarray, factors: BMFactors) -> int:
    # C = M W Sigma^-1 U^T is +-I; its trace sign is robust to round-off
    d1, d2 = factors.diagonal
    c = m @ rotation(factors.phi) @ np.diag([1 / d1, 1 / d2]) @ rotation(factors.theta).T
    return 1 if np.trace(c) >= 0 else -1


def decompose(coeffs: MuNu, basis: Basis = "signal") -> BMFactors:
    """Closed-form factors from ``theta = (t_mu + t_nu)/2``, ``phi = -(t_mu - t_nu)/2``.

    For ``|nu| = 0`` the rotations are not unique; the whole rotation is
    put in ``theta`` and ``phi = 0``.
    """
    am, an = coeffs.abs_mu, coeffs.abs_nu
    if an == 0.0:
        theta, phi = coeffs.theta_mu, 0.0
    else:
        theta = (coeffs.theta_mu + coeffs.theta_nu) / 2
        phi = -(coeffs.theta_mu - coeffs.theta_nu) / 2
    s_plus = am + an
    # (|mu| - |nu|) = 1 / (|mu| + |nu|) without the cancellation
    s_minus = 1.0 / s_plus
    if basis in ("signal", "plus"):
        swapped = False
    elif basis == "minus":
        swapped = True
    else:
        raise ValueError(f"unknown basis {basis!r}")
    factors = _normalize(BMFactors(theta, phi, s_plus, s_minus, 1, swapped))
    m = quad_transfer(coeffs, basis).m
    return replace(factors, c_sign=_sign_against(m, factors))


def numeric_oracle(m: QuadTransfer | np.ndarray) -> BMFactors:
    """Factors obtained from the orthogonal diagonalisation of ``M^T M``.

    Only ``det M = 1`` is assumed; no knowledge of ``(mu, nu)`` is used.
    """
    m = np.asarray(getattr(m, "m", m), dtype=float)
    det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if abs(det - 1.0) > 1e-8:
        raise ValueError(f"matrix is not symplectic (det = {det!r})")
    a = float(m[0, 0] ** 2 + m[1, 0] ** 2)
    d = float(m[0, 1] ** 2 + m[1, 1] ** 2)
    b = float(m[0, 0] * m[0, 1] + m[1, 0] * m[1, 1])
    half_gap = math.hypot((a - d) / 2, b)
    lam_plus = (a + d) / 2 + half_gap
    psi = 0.5 * math.atan2(2 * b, a - d)
    s_plus = math.sqrt(lam_plus)
    s_minus = det / s_plus
    u = m @ rotation(psi) @ np.diag([1 / s_plus, 1 / s_minus])
    theta = math.atan2(float(u[1, 0]), float(u[0, 0]))
    factors = _normalize(BMFactors(theta, psi, s_plus, s_minus))
    return replace(factors, c_sign=_sign_against(m, factors))


def factors_agree(
    f1: BMFactors, f2: BMFactors, tol: float = 1e-10, angle_tol: float = 1e-8
) -> bool:
    """True when two factorisations give the same matrix and the same angles mod pi.

    Angles are skipped for near-pure rotations, where only ``theta - phi``
    is defined.
    """
    f1, f2 = f1.canonical(), f2.canonical()
    if abs(f1.s_plus - f2.s_plus) > tol * max(1.0, f1.s_plus):
        return False
    if abs(f1.s_minus - f2.s_minus) > tol:
        return False
    m1, m2 = reconstruct(f1).m, reconstruct(f2).m
    if np.max(np.abs(m1 - m2)) > tol * max(1.0, f1.s_plus):
        return False
    if f1.s_plus - f1.s_minus <= 1e-6:
        return True
    dt = abs(math.remainder(f1.theta - f2.theta, math.pi))
    dp = abs(math.remainder(f1.phi - f2.phi, math.pi))
    return dt <= angle_tol and dp <= angle_tol


def rotation_tangents(
    fiber: FiberParams,
    pumps: PumpConfigA | PumpConfigB,
    phase_convention: str = "lab",
) -> tuple[float, float]:
    """``(tan 2 theta, tan 2 phi)`` straight from fiber and pump parameters.

    The tangent formulas are evaluated after clearing ``cosh(gz)`` and the
    cosines of the phase terms, which keeps them finite through ``g^2 <= 0``
    and ``tan`` singularities of the individual angles.

    Raises
    ------
    PoleDetected
        When a denominator vanishes (relative size below 1e-14).
    """
    gamma, z, db = fiber.gamma, fiber.length, fiber.delta_beta
    if isinstance(pumps, PumpConfigA):
        root = math.sqrt(pumps.p1 * pumps.p3)
        kappa = db + gamma * (pumps.p1 + pumps.p3)
        g2 = (2 * gamma * root - kappa / 2) * (2 * gamma * root + kappa / 2)
        delta = (3 * gamma * (pumps.p1 + pumps.p3) - db) / 2
        pump_phase = pumps.theta10 + pumps.theta30
        theta_g = pump_phase + 2 * delta * z
    elif isinstance(pumps, PumpConfigB):
        p2 = pumps.p2
        kappa = 2 * gamma * p2 - db
        g2 = (gamma * p2 - kappa / 2) * (gamma * p2 + kappa / 2)
        pump_phase = 2 * pumps.theta20
        if phase_convention == "lab":
            theta_g = pump_phase + (2 * gamma * p2 + db) * z
        elif phase_convention == "pump_frame":
            theta_g = pump_phase + db * z
        else:
            raise ValueError(f"unknown phase convention {phase_convention!r}")
    else:
        raise TypeError(f"unsupported pump specification {type(pumps).__name__}")

    c, s = gain_terms(g2, z)
    # (kappa / 2g) tanh(gz) == k_s / (2 c)
    k_s = kappa * s

    def ratio(num, den):
        if abs(den) < 1e-14 * (abs(num) + abs(den)) or (num == 0 and den == 0):
            raise PoleDetected(f"denominator {den!r} vanishes (numerator {num!r})")
        return num / den

    sg, cg = math.sin(theta_g), math.cos(theta_g)
    tan_2theta = ratio(k_s * sg - 2 * c * cg, k_s * cg + 2 * c * sg)
    sp, cp = math.sin(pump_phase), math.cos(pump_phase)
    tan_2phi = -ratio(k_s * sp + 2 * c * cp, -k_s * cp + 2 * c * sp)
    return tan_2theta, tan_2phi


angles_appendix_d = rotation_tangents
