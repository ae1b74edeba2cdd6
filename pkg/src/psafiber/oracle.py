"""Brute-force integration of the full nonlinear three-wave equations.

Nothing in here uses the closed forms of :mod:`psafiber.fwm`; the pumps are
propagated with their self/cross phase modulation and can deplete, so the
propagator pair extracted from two weak-probe runs is an independent check
of the analytic solution and of the undepleted-pump approximation itself.

The stepper is the classic fourth-order Runge-Kutta with step doubling:
each step is taken once with ``h`` and twice with ``h/2``; the difference
estimates the local error and the Richardson combination is kept.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass

from .fwm import FiberParams, MuNu, PumpConfigA, PumpConfigB


class MaxStepsExceeded(RuntimeError):
    pass


class ProbeTooLarge(ValueError):
    """The probe is strong enough to deplete the pumps."""


class OracleInaccurate(ArithmeticError):
    """The extracted pair misses ``|mu|^2 - |nu|^2 = 1`` beyond rounding."""


def _checked_pair(mu: complex, nu: complex, config: str) -> MuNu:
    try:
        return MuNu(mu, nu, config=config)
    except ValueError as exc:
        raise OracleInaccurate(f"integrated pair is not symplectic: {exc}") from None


@dataclass(frozen=True)
class FieldState3:
    a1: complex
    a2: complex
    a3: complex
    z: float = 0.0

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.a1, self.a2, self.a3)


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 1.0
    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


def total_power(state: FieldState3) -> float:
    return abs(state.a1) ** 2 + abs(state.a2) ** 2 + abs(state.a3) ** 2


def _derivative(z, a1, a2, a3, gamma, delta_beta):
    p1 = a1.real * a1.real + a1.imag * a1.imag
    p2 = a2.real * a2.real + a2.imag * a2.imag
    p3 = a3.real * a3.real + a3.imag * a3.imag
    e = cmath.exp(1j * delta_beta * z)
    ig = 1j * gamma
    a2sq = a2 * a2
    d1 = ig * ((p1 + 2 * p2 + 2 * p3) * a1 + a2sq * a3.conjugate() * e)
    d2 = ig * ((2 * p1 + p2 + 2 * p3) * a2 + 2 * a1 * a3 * a2.conjugate() * e.conjugate())
    d3 = ig * ((2 * p1 + 2 * p2 + p3) * a3 + a1.conjugate() * a2sq * e)
    return d1, d2, d3


def rhs(state: FieldState3, fiber: FiberParams) -> tuple[complex, complex, complex]:
    """d(A1, A2, A3)/dz including self/cross phase modulation and mixing terms."""
    return _derivative(state.z, state.a1, state.a2, state.a3, fiber.gamma, fiber.delta_beta)


def _rk4(z, y, h, gamma, db):
    a1, a2, a3 = y
    k1 = _derivative(z, a1, a2, a3, gamma, db)
    hh = h / 2
    k2 = _derivative(z + hh, a1 + hh * k1[0], a2 + hh * k1[1], a3 + hh * k1[2], gamma, db)
    k3 = _derivative(z + hh, a1 + hh * k2[0], a2 + hh * k2[1], a3 + hh * k2[2], gamma, db)
    k4 = _derivative(z + h, a1 + h * k3[0], a2 + h * k3[1], a3 + h * k3[2], gamma, db)
    h6 = h / 6
    return (
        a1 + h6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
        a2 + h6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
        a3 + h6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]),
    )


def integrate(
    initial: FieldState3,
    fiber: FiberParams,
    cfg: IntegratorConfig | None = None,
    observer: Callable[[FieldState3], None] | None = None,
) -> FieldState3:
    """Propagate ``initial`` from ``initial.z`` to ``fiber.length``.

    The error of each component is measured against
    ``abs_tol + rel_tol * |A_k|`` so weak fields are resolved relative to
    their own size as long as ``abs_tol`` is scaled accordingly.
    ``observer`` is called with the state after every accepted step.
    """
    cfg = cfg or IntegratorConfig()
    gamma, db = fiber.gamma, fiber.delta_beta
    z, z_end = initial.z, fiber.length
    y = initial.as_tuple()
    if z_end <= z:
        return FieldState3(*y, z=z)
    h = min(cfg.step, z_end - z)
    steps = 0
    while z < z_end:
        if steps >= cfg.max_steps:
            raise MaxStepsExceeded(f"reached {cfg.max_steps} steps at z = {z:.6g} m")
        steps += 1
        last = z + h >= z_end
        if last:
            h = z_end - z
        full = _rk4(z, y, h, gamma, db)
        half = _rk4(z, y, h / 2, gamma, db)
        half = _rk4(z + h / 2, half, h / 2, gamma, db)
        err = 0.0
        for f, c, old in zip(full, half, y):
            scale = cfg.abs_tol + cfg.rel_tol * max(abs(c), abs(old))
            err = max(err, abs(c - f) / 15.0 / scale)
        if err <= 1.0:
            z = z_end if last else z + h
            y = tuple(c + (c - f) / 15.0 for f, c in zip(full, half))
            if observer is not None:
                observer(FieldState3(*y, z=z))
            factor = 4.0 if err == 0 else min(4.0, 0.9 * err ** -0.2)
            h *= max(factor, 1.0)
        else:
            h *= max(0.1, 0.9 * err ** -0.2)
    return FieldState3(*y, z=z_end)


def _pump_state(pump_spec) -> tuple[complex, complex, complex]:
    if isinstance(pump_spec, PumpConfigA):
        return (cmath.rect(math.sqrt(pump_spec.p1), pump_spec.theta10), 0j,
                cmath.rect(math.sqrt(pump_spec.p3), pump_spec.theta30))
    if isinstance(pump_spec, PumpConfigB):
        return (0j, cmath.rect(math.sqrt(pump_spec.p2), pump_spec.theta20), 0j)
    raise TypeError(f"unsupported pump specification {type(pump_spec).__name__}")


def _depletion_watch(pumps):
    # depletion can undo itself further on, so every step is checked
    launched = [(k, abs(a) ** 2) for k, a in enumerate(pumps) if a != 0]

    def watch(state: FieldState3):
        fields = state.as_tuple()
        for k, p0 in launched:
            change = abs(abs(fields[k]) ** 2 - p0) / p0
            if change > 1e-6:
                raise ProbeTooLarge(f"pump power changed by {change:.3g} (relative) at z = {state.z:.6g} m")

    return watch


def extract_mu_nu(
    fiber: FiberParams,
    pump_spec: PumpConfigA | PumpConfigB,
    probe_eps: float | None = None,
    cfg: IntegratorConfig | None = None,
    phase_convention: str = "lab",
) -> MuNu:
    """Recover ``(mu, nu)`` numerically from two weak-probe integrations.

    The probe is launched with phases 0 and pi/2.  For two pumps
    (configuration A) the degenerate signal output gives
    ``mu = (out_0 - i out_90) / 2 eps`` and ``nu = (out_0 + i out_90) / 2 eps``;
    for a single pump (configuration B) the signal and idler outputs give
    ``mu`` and ``nu`` directly.  ``phase_convention="pump_frame"`` (B only)
    references the outputs to the measured output pump phase.

    Raises
    ------
    ProbeTooLarge
        If ``eps^2 / P_pump > 1e-8`` or a pump power moves by more than
        1e-6 relative anywhere along the fiber.
    OracleInaccurate
        If the integration error at very high gain breaks the symplectic
        condition.

    The default probe ``1e-9 sqrt(P_min)`` keeps the amplified probe far
    below the pumps up to gains of about 1e12.
    """
    cfg = cfg or IntegratorConfig()
    pumps = _pump_state(pump_spec)
    is_a = isinstance(pump_spec, PumpConfigA)
    p_min = min(abs(a) ** 2 for a in pumps if a != 0)
    if probe_eps is None:
        probe_eps = 1e-9 * math.sqrt(p_min)
    if not probe_eps > 0:
        raise ValueError("probe_eps must be positive")
    if probe_eps**2 / p_min > 1e-8:
        raise ProbeTooLarge(f"probe power ratio {probe_eps**2 / p_min:.3g} exceeds 1e-8")
    if phase_convention not in ("lab", "pump_frame"):
        raise ValueError(f"unknown phase convention {phase_convention!r}")
    if is_a and phase_convention != "lab":
        raise ValueError("pump_frame convention is only defined for configuration B")

    run_cfg = IntegratorConfig(cfg.step, cfg.rel_tol, cfg.abs_tol * probe_eps, cfg.max_steps)
    outputs = []
    for probe_phase in (0.0, math.pi / 2):
        probe = cmath.rect(probe_eps, probe_phase)
        a1, a2, a3 = pumps
        if is_a:
            a2 = probe
        else:
            a1 = probe
        outputs.append(integrate(FieldState3(a1, a2, a3), fiber, run_cfg, _depletion_watch(pumps)))

    if is_a:
        o0, o90 = outputs[0].a2, outputs[1].a2
        mu = (o0 - 1j * o90) / (2 * probe_eps)
        nu = (o0 + 1j * o90) / (2 * probe_eps)
        return _checked_pair(mu, nu, "A")

    # signal A_s = mu * p, idler A_i = nu * conj(p) for a probe p on the signal
    mus, nus = [], []
    for out, probe_phase in zip(outputs, (0.0, math.pi / 2)):
        p = cmath.rect(probe_eps, probe_phase)
        frame = 1.0
        if phase_convention == "pump_frame":
            frame = cmath.exp(-1j * (cmath.phase(out.a2) - cmath.phase(pumps[1])))
        mus.append(out.a1 * frame / p)
        nus.append(out.a3 * frame / p.conjugate())
    return _checked_pair(sum(mus) / 2, sum(nus) / 2, "B")
