"""``psa``: batch front end driven by scenario files.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 numerical check failed.
Everything is computed before anything is written, so a failing run never
leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import math
import sys
from pathlib import Path

import numpy as np

from .bloch_messiah import BMFactors, decompose, rotation
from .fwm import (
    MuNu,
    PumpConfigB,
    coeffs_A,
    coeffs_B,
    gain_extrema,
    pm_basis,
    power_gain_A,
    power_gain_B,
    propagate_field,
    quad_transfer,
)
from .loss import LinkInputs, LinkLayout, LossChannel, layout_ratio, nf_optimum, nf_with_loss
from .noise import duan_lhs
from .oracle import MaxStepsExceeded, OracleInaccurate, ProbeTooLarge, extract_mu_nu
from .scenario import Amplitude, Scenario, ScenarioError, ValidationError, load_scenario

ORACLE_TOL = 1e-6
COMPOSITION_TOL = 1e-10


class NumericalCheckFailed(Exception):
    exit_code = 4

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


def _db(x: float) -> float:
    if x <= 0:
        return -math.inf
    return 10 * math.log10(x)


def _deg(x: float) -> float:
    return math.degrees(x)


def coeffs_for(scn: Scenario) -> MuNu:
    if scn.config == "A":
        return coeffs_A(scn.fiber, scn.pumps)
    return coeffs_B(scn.fiber, scn.pumps, scn.phase_convention)


def resolve_inputs(scn: Scenario, coeffs: MuNu, theta_s0: float | None = None, theta_i0: float | None = None):
    """Signal, idler and detection phase with ``optimal`` entries filled in.

    Config A: signal phase ``(theta_nu - theta_mu)/2``, detection along
    ``(theta_mu + theta_nu)/2``.  Config B: signal phase 0 by default, idler
    phase ``-theta_s0 - (theta_mu - theta_nu)``, detection along
    ``theta_mu + theta_s0``.
    """
    sig = scn.signal or Amplitude(1.0, None)
    if theta_s0 is None:
        theta_s0 = sig.phase
    if scn.config == "A":
        if theta_s0 is None:
            theta_s0 = (coeffs.theta_nu - coeffs.theta_mu) / 2
        phi = scn.phi if scn.phi is not None else (coeffs.theta_mu + coeffs.theta_nu) / 2
        return sig.value(theta_s0), 0j, phi
    if theta_s0 is None:
        theta_s0 = 0.0
    idl = scn.idler or Amplitude(sig.magnitude, None)
    if theta_i0 is None:
        theta_i0 = idl.phase
    if theta_i0 is None:
        theta_i0 = -theta_s0 - (coeffs.theta_mu - coeffs.theta_nu)
    phi = scn.phi if scn.phi is not None else coeffs.theta_mu + theta_s0
    return sig.value(theta_s0), idl.value(theta_i0), phi


def _fiber_echo(scn: Scenario) -> dict:
    out = {
        "config": scn.config,
        "gamma_per_W_m": scn.fiber.gamma,
        "delta_beta_per_m": scn.fiber.delta_beta,
        "length_m": scn.fiber.length,
    }
    if scn.config == "B":
        out["phase_convention"] = scn.phase_convention
    return out


def _complex_keys(prefix: str, z: complex) -> dict:
    arg = math.atan2(z.imag, z.real)
    return {
        f"{prefix}_re": z.real,
        f"{prefix}_im": z.imag,
        f"{prefix}_abs": abs(z),
        f"{prefix}_arg_rad": arg,
        f"{prefix}_arg_deg": _deg(arg),
    }


def cmd_coeffs(scn: Scenario) -> dict:
    c = coeffs_for(scn)
    bm = decompose(c, "signal")
    g_max, g_min = gain_extrema(c)
    rep = {"command": "coeffs", **_fiber_echo(scn)}
    rep.update(_complex_keys("mu", c.mu))
    rep.update(_complex_keys("nu", c.nu))
    rep.update(
        {
            "kappa_per_m": c.kappa,
            "g_squared_per_m2": c.g_squared,
            "symplectic_defect": c.symplectic_defect,
            "theta_rad": bm.theta,
            "theta_deg": _deg(bm.theta),
            "phi_rad": bm.phi,
            "phi_deg": _deg(bm.phi),
            "s_plus": bm.s_plus,
            "s_minus": bm.s_minus,
            "c_sign": bm.c_sign,
            "G_max": g_max,
            "G_max_dB": _db(g_max),
            "G_min": g_min,
            "G_min_dB": _db(g_min),
        }
    )
    if scn.loss is not None:
        rep["loss_tau"] = scn.loss.tau
        rep["loss_tau_idler"] = scn.loss.tau_i
        rep["loss_layout"] = scn.layout.order if scn.layout else "none"
        rep["layout_ratio"] = layout_ratio(c, scn.loss, scn.config)
        if scn.layout is not None:
            nf = nf_optimum(c, scn.layout, scn.loss, scn.input_snr)
            rep["nf_optimum"] = nf
            rep["nf_optimum_dB"] = _db(nf)
    return rep


# scans


def _gain_rows(scn: Scenario, c: MuNu, thetas):
    rows = []
    for t in thetas:
        t = float(t)
        if scn.config == "A":
            g = power_gain_A(c, t)
        else:
            a_s, a_i, _ = resolve_inputs(scn, c, theta_s0=t)
            if abs(a_s) == 0:
                raise ValidationError("gain scan needs a non-zero signal amplitude")
            g = power_gain_B(c, t, math.atan2(a_i.imag, a_i.real), abs(a_i) / abs(a_s))
        rows.append([t, g, _db(g)])
    return ["theta_s0_rad", "gain", "gain_dB"], rows


def _duan_rows(scn: Scenario, powers):
    if scn.config != "B":
        raise ValidationError("the P2_W scan needs configuration B")
    rows = []
    for p in powers:
        p = float(p)
        if p < 0:
            raise ValidationError(f"pump power must be non-negative, got {p!r}")
        if p == 0:
            # no pump, no interaction
            c = MuNu(1.0, 0.0, config="B")
        else:
            c = coeffs_B(scn.fiber, PumpConfigB(p, scn.pumps.theta20), scn.phase_convention)
        rows.append([p, c.abs_mu, c.abs_nu, duan_lhs(c)])
    return ["P2_W", "mu_abs", "nu_abs", "duan_lhs"], rows


def _tau_rows(scn: Scenario, c: MuNu, taus):
    if scn.layout is None:
        raise ValidationError("the tau scan needs [loss] layout = AL or LA")
    a_s, a_i, phi = resolve_inputs(scn, c)
    rows = []
    for t in taus:
        t = float(t)
        try:
            loss = LossChannel(t, scn.loss.tau_idler if scn.loss else None)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        nf = nf_with_loss(c, scn.layout, loss, LinkInputs(a_s, a_i), phi, scn.input_snr).noise_figure
        opt = nf_optimum(c, scn.layout, loss, scn.input_snr)
        rows.append([t, nf, _db(nf), opt, _db(opt)])
    return ["tau", "nf", "nf_dB", "nf_optimum", "nf_optimum_dB"], rows


def _grid_rows(scn: Scenario, c: MuNu, first: str, angles, phis):
    if first == "theta_i0_rad" and scn.config != "B":
        raise ValidationError("the idler-phase scan needs configuration B")
    layout = scn.layout or LinkLayout("AL", scn.config)
    loss = scn.loss if scn.layout is not None else LossChannel(1.0)
    rows = []
    for a in angles:
        a = float(a)
        if first == "theta_s0_rad":
            a_s, a_i, _ = resolve_inputs(scn, c, theta_s0=a)
        else:
            a_s, a_i, _ = resolve_inputs(scn, c, theta_i0=a)
        if abs(a_s) == 0:
            raise ValidationError("noise-figure scans need a non-zero signal amplitude")
        nfs = nf_with_loss(c, layout, loss, LinkInputs(a_s, a_i), np.asarray(phis, dtype=float), scn.input_snr)
        for phi, nf in zip(phis, np.atleast_1d(nfs.noise_figure)):
            rows.append([a, float(phi), float(nf), _db(float(nf))])
    return [first, "phi_rad", "nf", "nf_dB"], rows


def cmd_scan(scn: Scenario) -> tuple[list[str], list[list]]:
    if scn.scan is None:
        raise ValidationError("missing section [scan]")
    spec = scn.scan
    axes = spec.axes()
    if spec.name == "P2_W":
        return _duan_rows(scn, axes[0])
    c = coeffs_for(scn)
    if spec.name == "theta_s0_rad":
        return _gain_rows(scn, c, axes[0])
    if spec.name == "tau":
        return _tau_rows(scn, c, axes[0])
    return _grid_rows(scn, c, spec.variables[0], axes[0], axes[1])


# phasor trace


def _stage(prefix: str, mean: np.ndarray, cov: np.ndarray) -> dict:
    return {
        f"{prefix}.mean_x": float(mean[0]),
        f"{prefix}.mean_y": float(mean[1]),
        f"{prefix}.cov_xx": float(cov[0, 0]),
        f"{prefix}.cov_xy": float(cov[0, 1]),
        f"{prefix}.cov_yy": float(cov[1, 1]),
    }


def _axis_angle(cov: np.ndarray) -> float:
    w, v = np.linalg.eigh(cov)
    vec = v[:, int(np.argmax(w))]
    return math.atan2(float(vec[1]), float(vec[0]))


def _trace_mode(label: str, c: MuNu, basis: str, a0: complex, expected_out: complex):
    f: BMFactors = decompose(c, basis)
    d = np.diag(f.diagonal)
    rin = rotation(f.phi).T
    rout = f.c_sign * rotation(f.theta)
    mean = np.array([a0.real, a0.imag])
    cov = 0.25 * np.eye(2)
    rep = {}
    for name, step in (("input", None), ("after_input_rotation", rin), ("after_squeeze", d), ("output", rout)):
        if step is not None:
            mean = step @ mean
            cov = step @ cov @ step.T
        rep.update(_stage(f"{label}.{name}", mean, cov))
    direct = quad_transfer(c, basis).m
    composed = rout @ d @ rin
    err = max(
        float(np.max(np.abs(composed - direct))),
        abs(complex(*mean) - expected_out) / max(1.0, abs(expected_out)),
    )
    mean_angle = math.atan2(mean[1], mean[0])
    axis = _axis_angle(cov)
    rep[f"{label}.theta_rad"] = f.theta
    rep[f"{label}.phi_rad"] = f.phi
    rep[f"{label}.output_mean_angle_rad"] = mean_angle
    rep[f"{label}.output_major_axis_rad"] = axis
    rep[f"{label}.axis_misalignment_rad"] = abs(math.remainder(mean_angle - axis, math.pi))
    return rep, err


def cmd_phasor(scn: Scenario) -> dict:
    c = coeffs_for(scn)
    a_s, a_i, _ = resolve_inputs(scn, c)
    rep = {"command": "phasor", **_fiber_echo(scn)}
    if scn.config == "A":
        part, err = _trace_mode("signal", c, "signal", a_s, propagate_field(c, a_s))
    else:
        out_s = propagate_field(c, a_s, a_i)
        out_i = propagate_field(c, a_i, a_s)
        p0, m0 = pm_basis(a_s, a_i, "to_pm")
        p_out, m_out = pm_basis(out_s, out_i, "to_pm")
        part = {}
        for label, z in (("signal.input", a_s), ("idler.input", a_i)):
            part.update(_stage(label, np.array([z.real, z.imag]), 0.25 * np.eye(2)))
        plus, err_p = _trace_mode("plus", c, "plus", p0, p_out)
        minus, err_m = _trace_mode("minus", c, "minus", m0, m_out)
        part.update(plus)
        part.update(minus)
        s_back, i_back = pm_basis(
            complex(plus["plus.output.mean_x"], plus["plus.output.mean_y"]),
            complex(minus["minus.output.mean_x"], minus["minus.output.mean_y"]),
            "from_pm",
        )
        cov_out = (c.abs_mu**2 + c.abs_nu**2) / 4 * np.eye(2)
        part.update(_stage("signal.output", np.array([s_back.real, s_back.imag]), cov_out))
        part.update(_stage("idler.output", np.array([i_back.real, i_back.imag]), cov_out))
        err = max(err_p, err_m, abs(s_back - out_s), abs(i_back - out_i))
    rep.update(part)
    rep["composition_error"] = err
    rep["composition_ok"] = err <= COMPOSITION_TOL
    if not rep["composition_ok"]:
        raise NumericalCheckFailed(f"stage composition differs from the direct transfer by {err:.3g}", rep)
    return rep


# oracle check


def _delta_keys(prefix: str, a: complex, b: complex) -> dict:
    d = a - b
    return {
        f"{prefix}_re": abs(d.real),
        f"{prefix}_im": abs(d.imag),
        f"{prefix}_abs": abs(d),
    }


def _componentwise(a: MuNu, b: MuNu) -> float:
    d1, d2 = a.mu - b.mu, a.nu - b.nu
    return max(abs(d1.real), abs(d1.imag), abs(d2.real), abs(d2.imag))


def cmd_oracle_check(scn: Scenario) -> dict:
    rep = {"command": "oracle-check", **_fiber_echo(scn)}
    try:
        raw = extract_mu_nu(scn.fiber, scn.pumps)
        if scn.config == "B" and scn.phase_convention == "pump_frame":
            oracle = extract_mu_nu(scn.fiber, scn.pumps, phase_convention="pump_frame")
        else:
            oracle = raw
    except (ProbeTooLarge, MaxStepsExceeded, OracleInaccurate) as exc:
        raise NumericalCheckFailed(f"oracle integration failed: {exc}", rep) from None
    analytic = coeffs_for(scn)
    if scn.config == "B":
        matched = []
        for conv in ("lab", "pump_frame"):
            err = _componentwise(raw, coeffs_B(scn.fiber, scn.pumps, conv))
            rep[f"raw_output_error_{conv}"] = err
            if err <= ORACLE_TOL:
                matched.append(conv)
        rep["matched_convention"] = {0: "none", 2: "both"}.get(len(matched), matched[0] if matched else "none")
    rep.update(_complex_keys("mu_oracle", oracle.mu))
    rep.update(_complex_keys("nu_oracle", oracle.nu))
    rep.update(_delta_keys("delta_mu", oracle.mu, analytic.mu))
    rep.update(_delta_keys("delta_nu", oracle.nu, analytic.nu))
    worst = _componentwise(oracle, analytic)
    rep["max_component_error"] = worst
    rep["tolerance"] = ORACLE_TOL
    rep["pass"] = worst <= ORACLE_TOL
    if not rep["pass"]:
        raise NumericalCheckFailed(f"oracle and closed form differ by {worst:.3g}", rep)
    return rep


# output


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def render_kv(report: dict) -> str:
    return json.dumps({k: _json_value(v) for k, v in report.items()}, indent=2) + "\n"


def render_table(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def render_rows_kv(header: list[str], rows: list[list]) -> str:
    lines = [json.dumps({k: _json_value(v) for k, v in zip(header, row)}) for row in rows]
    return "\n".join(lines) + "\n"


def run(command: str, scn: Scenario, fmt: str | None) -> str:
    if command == "scan":
        header, rows = cmd_scan(scn)
        return render_rows_kv(header, rows) if fmt == "kv" else render_table(header, rows)
    report = {"coeffs": cmd_coeffs, "phasor": cmd_phasor, "oracle-check": cmd_oracle_check}[command](scn)
    if fmt == "csv":
        return render_table(["key", "value"], [[k, v] for k, v in report.items()])
    return render_kv(report)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="psa", description="Phase-sensitive fiber amplifier calculations.")
    p.add_argument("command", choices=["coeffs", "scan", "phasor", "oracle-check"])
    p.add_argument("scenario", help="scenario file")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.add_argument("--format", choices=["csv", "kv"], help="csv for scans and kv (JSON) for reports by default")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head)
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scn = load_scenario(args.scenario)
        text = run(args.command, scn, args.format)
    except ScenarioError as exc:
        print(f"psa: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except NumericalCheckFailed as exc:
        if exc.report is not None:
            _emit(render_kv(exc.report), args.out)
        print(f"psa: numerical check failed: {exc}", file=sys.stderr)
        return exc.exit_code
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
