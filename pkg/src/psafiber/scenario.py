"""Scenario files: sectioned ``key = value`` text with units in the key names.

Example::

    [fiber]
    gamma_per_W_m = 11.3e-3
    delta_beta_per_m = 4.53e-11
    length_m = 300

    [config]
    type = A

    [pumps]
    P1_W = 0.2
    P3_W = 0.2
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fwm import FiberParams, PumpConfigA, PumpConfigB
from .loss import LinkLayout, LossChannel


class ScenarioError(Exception):
    exit_code = 1


class ParseError(ScenarioError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.key = key


class ValidationError(ScenarioError):
    exit_code = 3


class UnknownScanVariable(ValidationError):
    pass


KNOWN_KEYS = {
    "fiber": {"gamma_per_W_m", "delta_beta_per_m", "length_m"},
    "config": {"type", "phase_convention"},
    "pumps": {"P1_W", "P3_W", "theta10_rad", "theta30_rad", "P2_W", "theta20_rad"},
    "signal": {"amplitude_sqrtW", "phase_rad", "re_sqrtW", "im_sqrtW"},
    "idler": {"amplitude_sqrtW", "phase_rad", "re_sqrtW", "im_sqrtW"},
    "loss": {"tau", "tau_idler", "layout"},
    "detection": {"phi_rad", "input_snr"},
    "scan": {"variable", "start", "stop", "steps"},
}

SCAN_VARIABLES = ("theta_s0_rad", "P2_W", "tau", "theta_s0_rad,phi_rad", "theta_i0_rad,phi_rad")

OPTIMAL = "optimal"


@dataclass(frozen=True)
class Amplitude:
    """A coherent input; ``phase`` is ``None`` when it is to be chosen optimally."""

    magnitude: float
    phase: float | None

    def value(self, phase: float | None = None) -> complex:
        ph = self.phase if phase is None else phase
        if ph is None:
            raise ValueError("phase not resolved")
        return complex(self.magnitude * math.cos(ph), self.magnitude * math.sin(ph))


@dataclass(frozen=True)
class ScanSpec:
    variables: tuple[str, ...]
    starts: tuple[float, ...]
    stops: tuple[float, ...]
    steps: tuple[int, ...]

    @property
    def name(self) -> str:
        return ",".join(self.variables)

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(a, b, n) for a, b, n in zip(self.starts, self.stops, self.steps)]


@dataclass(frozen=True)
class Scenario:
    fiber: FiberParams
    config: str
    pumps: PumpConfigA | PumpConfigB
    phase_convention: str = "lab"
    signal: Amplitude | None = None
    idler: Amplitude | None = None
    loss: LossChannel | None = None
    layout: LinkLayout | None = None
    phi: float | None = None
    input_snr: str = "joint"
    scan: ScanSpec | None = None
    source: str = field(default="", compare=False)


def _line_index(text: str) -> dict[tuple[str, str], int]:
    index, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", line)
        if m and section is not None:
            index.setdefault((section, m.group(1).strip()), n)
    return index


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, lines: dict[tuple[str, str], int]):
        self.parser = parser
        self.lines = lines

    def has(self, section: str, key: str | None = None) -> bool:
        if key is None:
            return self.parser.has_section(section)
        return self.parser.has_option(section, key)

    def section(self, name: str) -> None:
        if not self.parser.has_section(name):
            raise ValidationError(f"missing section [{name}]")

    def raw(self, section: str, key: str) -> str:
        if not self.parser.has_option(section, key):
            raise ValidationError(f"missing key {key!r} in section [{section}]")
        return self.parser.get(section, key).strip()

    def number(self, section: str, key: str, default: float | None = None) -> float:
        if default is not None and not self.parser.has_option(section, key):
            return default
        text = self.raw(section, key)
        try:
            value = float(text)
        except ValueError:
            raise ParseError(f"expected a number, got {text!r}", self.lines.get((section, key)), key) from None
        if not math.isfinite(value):
            raise ValidationError(f"{key} must be finite, got {text!r}")
        return value

    def numbers(self, section: str, key: str) -> tuple[str, ...]:
        return tuple(p.strip() for p in self.raw(section, key).split(","))

    def number_list(self, section: str, key: str) -> tuple[float, ...]:
        out = []
        for part in self.numbers(section, key):
            try:
                out.append(float(part))
            except ValueError:
                raise ParseError(f"expected a number, got {part!r}", self.lines.get((section, key)), key) from None
        return tuple(out)

    def int_list(self, section: str, key: str) -> tuple[int, ...]:
        out = []
        for part in self.numbers(section, key):
            try:
                out.append(int(part))
            except ValueError:
                raise ParseError(f"expected an integer, got {part!r}", self.lines.get((section, key)), key) from None
        return tuple(out)

    def phase(self, section: str, key: str, default: float | None = 0.0) -> float | None:
        if self.parser.has_option(section, key) and self.raw(section, key).lower() == OPTIMAL:
            return None
        return self.number(section, key, default)


def _amplitude(r: _Reader, section: str) -> Amplitude | None:
    if not r.has(section):
        return None
    polar = r.has(section, "amplitude_sqrtW") or r.has(section, "phase_rad")
    cart = r.has(section, "re_sqrtW") or r.has(section, "im_sqrtW")
    if polar and cart:
        raise ValidationError(f"[{section}] mixes polar and cartesian keys")
    if cart:
        z = complex(r.number(section, "re_sqrtW", 0.0), r.number(section, "im_sqrtW", 0.0))
        return Amplitude(abs(z), math.atan2(z.imag, z.real))
    mag = r.number(section, "amplitude_sqrtW", 1.0)
    if mag < 0:
        raise ValidationError(f"[{section}] amplitude_sqrtW must be non-negative")
    return Amplitude(mag, r.phase(section, "phase_rad"))


def _scan(r: _Reader) -> ScanSpec | None:
    if not r.has("scan"):
        return None
    variable = r.raw("scan", "variable").replace(" ", "")
    if variable not in SCAN_VARIABLES:
        raise UnknownScanVariable(f"unknown scan variable {variable!r}; expected one of {', '.join(SCAN_VARIABLES)}")
    names = tuple(variable.split(","))
    starts = r.number_list("scan", "start")
    stops = r.number_list("scan", "stop")
    steps = r.int_list("scan", "steps")
    if not (len(starts) == len(stops) == len(steps) == len(names)):
        raise ValidationError(f"scan over {variable} needs {len(names)} start/stop/steps values")
    if any(n < 1 for n in steps):
        raise ValidationError("scan steps must be at least 1")
    return ScanSpec(names, starts, stops, steps)


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ParseError(str(exc).replace("\n", " "), getattr(exc, "lineno", None)) from None
    lines = _line_index(text)
    for section in parser.sections():
        if section not in KNOWN_KEYS:
            raise ValidationError(f"unknown section [{section}]")
        for key in parser.options(section):
            if key not in KNOWN_KEYS[section]:
                raise ValidationError(f"unknown key {key!r} in section [{section}] (line {lines.get((section, key))})")

    r = _Reader(parser, lines)
    r.section("fiber")
    r.section("config")
    r.section("pumps")
    try:
        fiber = FiberParams(
            r.number("fiber", "gamma_per_W_m"),
            r.number("fiber", "delta_beta_per_m"),
            r.number("fiber", "length_m"),
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    config = r.raw("config", "type").upper()
    convention = r.raw("config", "phase_convention") if r.has("config", "phase_convention") else "lab"
    if convention not in ("lab", "pump_frame"):
        raise ValidationError(f"phase_convention must be 'lab' or 'pump_frame', got {convention!r}")
    try:
        if config == "A":
            if convention != "lab":
                raise ValidationError("phase_convention applies to configuration B only")
            pumps = PumpConfigA(
                r.number("pumps", "P1_W"),
                r.number("pumps", "P3_W"),
                r.number("pumps", "theta10_rad", 0.0),
                r.number("pumps", "theta30_rad", 0.0),
            )
        elif config == "B":
            pumps = PumpConfigB(r.number("pumps", "P2_W"), r.number("pumps", "theta20_rad", 0.0))
        else:
            raise ValidationError(f"config type must be A or B, got {config!r}")
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    loss = layout = None
    if r.has("loss"):
        try:
            tau = r.number("loss", "tau")
            tau_i = r.number("loss", "tau_idler") if r.has("loss", "tau_idler") else None
            loss = LossChannel(tau, tau_i)
            if r.has("loss", "layout"):
                layout = LinkLayout(r.raw("loss", "layout").upper(), config)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None

    phi, input_snr = None, "joint"
    if r.has("detection"):
        if r.has("detection", "phi_rad"):
            phi = r.phase("detection", "phi_rad")
        if r.has("detection", "input_snr"):
            input_snr = r.raw("detection", "input_snr")
            if input_snr not in ("joint", "signal"):
                raise ValidationError(f"input_snr must be 'joint' or 'signal', got {input_snr!r}")

    return Scenario(
        fiber=fiber,
        config=config,
        pumps=pumps,
        phase_convention=convention,
        signal=_amplitude(r, "signal"),
        idler=_amplitude(r, "idler"),
        loss=loss,
        layout=layout,
        phi=phi,
        input_snr=input_snr,
        scan=_scan(r),
        source=source,
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))
