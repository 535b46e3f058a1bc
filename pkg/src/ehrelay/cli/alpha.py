"""Search over the energy-harvesting time fraction alpha.

Throughput is not proven unimodal in alpha, so the scan reports the grid
argmax (ties go to the smallest alpha) and the whole curve.  An optional
golden-section pass refines the best grid cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .. import analytic, asymptotic
from ..montecarlo import EmpiricalOutage
from ..throughput import (DELAY_SENSITIVE, DELAY_TOLERANT, throughput_delay_sensitive,
                          throughput_delay_tolerant)
from .config import HEADER_MAGIC, ConfigError, RunConfig
from .sweep import format_number

ALPHA_LOWER = 0.02
ALPHA_UPPER = 0.98
MODES = (DELAY_SENSITIVE, DELAY_TOLERANT)
_COLUMN = {DELAY_SENSITIVE: "tau_ds", DELAY_TOLERANT: "tau_dt"}
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

Objective = Callable[[float, str], float]


@dataclass
class AlphaScanResult:
    alphas: np.ndarray
    curves: dict                      # mode -> throughput per grid alpha
    best: dict                        # mode -> (alpha, throughput) on the grid
    refined: dict = field(default_factory=dict)
    header: list = field(default_factory=list)

    def to_csv(self) -> str:
        modes = list(self.curves)
        lines = list(self.header)
        for mode in modes:
            a, v = self.best[mode]
            lines.append(f"# grid argmax {mode}: alpha {format_number(a)} "
                         f"throughput {format_number(v)}")
            if mode in self.refined:
                a, v = self.refined[mode]
                lines.append(f"# refined {mode}: alpha {format_number(a)} "
                             f"throughput {format_number(v)}")
        lines.append(",".join(["alpha"] + [_COLUMN[m] for m in modes]))
        for i, a in enumerate(self.alphas):
            lines.append(",".join([format_number(a)]
                                  + [format_number(self.curves[m][i]) for m in modes]))
        return "\n".join(lines) + "\n"


def throughput_objective(cfg: RunConfig, engine: str = "exact") -> Objective:
    """Throughput of ``cfg`` at a given alpha, with the named outage engine."""

    def objective(alpha: float, mode: str) -> float:
        c = cfg.replace(alpha=float(alpha))
        p = c.params()
        if engine == "exact":
            ev = analytic.outage_evaluator(p, c.quadrature())
        elif engine == "asymptotic":
            ev = asymptotic.outage_evaluator(p)
        elif engine == "montecarlo":
            ev = EmpiricalOutage(p, c.trials, c.seed, c.workers)
        else:
            raise ConfigError(f"unknown engine {engine!r}")
        if mode == DELAY_SENSITIVE:
            return throughput_delay_sensitive(c.gamma_th, p, ev).value
        return throughput_delay_tolerant(p, ev).value

    return objective


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   tol: float = 1e-4, max_iter: int = 200):
    """Maximise ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def alpha_scan(cfg: RunConfig, modes=MODES, steps: int = 49, lower: float = ALPHA_LOWER,
               upper: float = ALPHA_UPPER, refine: bool = False, engine: str = "exact",
               objective: Optional[Objective] = None) -> AlphaScanResult:
    """Evaluate throughput on an even alpha grid and report the argmax.

    Parameters
    ----------
    cfg : RunConfig
        Everything except alpha.
    modes : sequence of str
        Any of ``"delay-sensitive"``, ``"delay-tolerant"``.
    steps : int
        Grid points including both ends.
    refine : bool
        Run golden-section search between the grid neighbours of the argmax.
    objective : callable, optional
        ``objective(alpha, mode) -> throughput``; defaults to the model.
    """
    if not 0.0 < lower < upper < 1.0:
        raise ConfigError("alpha bounds must satisfy 0 < lower < upper < 1")
    if steps < 2:
        raise ConfigError("steps must be at least 2")
    bad = [m for m in modes if m not in MODES]
    if bad or not modes:
        raise ConfigError(f"unknown throughput mode(s) {bad}")
    objective = objective or throughput_objective(cfg, engine)
    alphas = np.linspace(lower, upper, steps)
    result = AlphaScanResult(alphas, {}, {})
    for mode in modes:
        values = np.array([objective(float(a), mode) for a in alphas])
        k = int(np.argmax(values))  # first maximum, i.e. smallest alpha
        result.curves[mode] = values
        result.best[mode] = (float(alphas[k]), float(values[k]))
        if refine:
            lo, hi = alphas[max(k - 1, 0)], alphas[min(k + 1, steps - 1)]
            a, v = golden_section(lambda x: objective(x, mode), float(lo), float(hi))
            if v >= values[k]:
                result.refined[mode] = (a, v)
            else:
                result.refined[mode] = result.best[mode]
    result.header = [f"{HEADER_MAGIC} alpha-scan", f"# engine: {engine}",
                     f"# alpha grid: {format_number(lower)} .. {format_number(upper)} "
                     f"in {steps} points"] + cfg.header_lines()
    return result
