"""Flat ``key = value`` run configuration.

Powers and thresholds are written in dB here and converted to linear units
in exactly one place, :meth:`RunConfig.params`.  A CSV written by the tool
starts with the resolved configuration as ``#``-prefixed lines, and
:func:`load_config` accepts such a file directly to reproduce the run.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields

from ..geometry import NodeLayout
from ..params import SystemParams, db_to_linear
from ..quadrature import QuadratureSettings

ENGINES = ("exact", "asymptotic", "montecarlo")
SWEEP_VARIABLES = ("p_interference_dbw", "p_putx_dbw", "m_and_n", "alpha", "gamma_th_db",
                   "pu_tx_position")
HEADER_MAGIC = "# ehrelay"

# keys that change how a run is scheduled but never its numbers
_SCHEDULING_KEYS = {"workers"}


class ConfigError(ValueError):
    pass


def _parse_point(text: str):
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y', got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _parse_points(text: str):
    return tuple(_parse_point(chunk) for chunk in text.split(";") if chunk.strip())


def _parse_floats(text: str):
    return tuple(float(s) for s in text.split(",") if s.strip())


def _parse_engines(text: str):
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [n for n in names if n not in ENGINES]
    if bad or not names:
        raise ValueError(f"unknown engine(s) {bad or text!r}; choose from {', '.join(ENGINES)}")
    return names


def _parse_bool(text: str):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_variable(text: str):
    text = text.strip()
    if text not in SWEEP_VARIABLES:
        raise ValueError(f"unknown sweep variable {text!r}")
    return text


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _fmt_point(pt) -> str:
    return f"{_fmt_float(pt[0])},{_fmt_float(pt[1])}"


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 0.5
    eta: float = 0.8
    gamma_th_db: float = 0.0
    p_interference_dbw: float = 10.0
    p_putx_dbw: float = 0.0
    m_receivers: int = 3
    n_transmitters: int = 3
    path_loss_exponent: float = 3.0
    ss: tuple = (0.0, 0.0)
    sr: tuple = (1.0, 0.0)
    sd: tuple = (2.0, 0.0)
    pu_tx_center: tuple = (0.0, 1.0)
    pu_rx_center: tuple = (2.0, 1.0)
    engines: tuple = ENGINES
    throughput: bool = True
    trials: int = 1_000_000
    seed: int = 1
    rel_tol: float = 1e-7
    abs_tol: float = 1e-10
    max_depth: int = 50
    workers: int = 1
    variable: str = "p_interference_dbw"
    start: float = -10.0
    stop: float = 30.0
    steps: int = 21
    values: tuple = ()
    positions: tuple = ()

    def layout(self) -> NodeLayout:
        return NodeLayout(self.ss, self.sr, self.sd, self.pu_tx_center, self.pu_rx_center)

    def params(self) -> SystemParams:
        return SystemParams.from_layout(
            self.layout(), self.path_loss_exponent,
            alpha=self.alpha, eta=self.eta,
            p_interference=db_to_linear(self.p_interference_dbw),
            p_putx=db_to_linear(self.p_putx_dbw),
            m_receivers=self.m_receivers, n_transmitters=self.n_transmitters)

    @property
    def gamma_th(self) -> float:
        return db_to_linear(self.gamma_th_db)

    def quadrature(self) -> QuadratureSettings:
        return QuadratureSettings(rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                                  max_depth=self.max_depth)

    def replace(self, **changes) -> RunConfig:
        return dataclasses.replace(self, **changes)

    def validated(self) -> RunConfig:
        """Check cross-field constraints; returns ``self``."""
        try:
            self.params()
            self.quadrature()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.trials < 1000:
            raise ConfigError("trials must be at least 1000")
        if self.steps < 2 and not self.values and not self.positions:
            raise ConfigError("steps must be at least 2")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        return self

    def header_lines(self):
        """``# key = value`` lines that reproduce this configuration."""
        lines = []
        for f in fields(self):
            if f.name in _SCHEDULING_KEYS:
                continue
            lines.append(f"# {f.name} = {_format_value(f.name, getattr(self, f.name))}")
        return lines


_PARSERS = {
    "alpha": float, "eta": float, "gamma_th_db": float, "p_interference_dbw": float,
    "p_putx_dbw": float, "m_receivers": int, "n_transmitters": int,
    "path_loss_exponent": float, "ss": _parse_point, "sr": _parse_point, "sd": _parse_point,
    "pu_tx_center": _parse_point, "pu_rx_center": _parse_point, "engines": _parse_engines,
    "throughput": _parse_bool, "trials": int, "seed": int, "rel_tol": float,
    "abs_tol": float, "max_depth": int, "workers": int, "variable": _parse_variable,
    "start": float, "stop": float, "steps": int, "values": _parse_floats,
    "positions": _parse_points,
}


def _format_value(key, value) -> str:
    if key in ("ss", "sr", "sd", "pu_tx_center", "pu_rx_center"):
        return _fmt_point(value)
    if key == "positions":
        return "; ".join(_fmt_point(pt) for pt in value)
    if key == "values":
        return ", ".join(_fmt_float(v) for v in value)
    if key == "engines":
        return ",".join(value)
    if key == "throughput":
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt_float(value)
    return str(value)


def parse_config(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines into typed overrides.

    Blank lines and ``#`` comments are ignored.  Errors name the line.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            parsed = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
        if isinstance(parsed, float) and not math.isfinite(parsed):
            raise ConfigError(f"{source}:{lineno}: {key} must be finite")
        out[key] = parsed
    return out


def header_text(text: str) -> str:
    """Config text embedded in the ``#`` block of a CSV written by this tool."""
    lines = []
    for raw in text.splitlines():
        if not raw.startswith("#"):
            break
        body = raw[1:].strip()
        if "=" in body:
            lines.append(body)
    return "\n".join(lines)


def load_config(path: str, base: RunConfig | None = None) -> RunConfig:
    with open(path) as fh:
        text = fh.read()
    if text.startswith(HEADER_MAGIC):
        text = header_text(text)
    overrides = parse_config(text, source=path)
    return (base or RunConfig()).replace(**overrides).validated()
