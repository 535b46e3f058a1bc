"""Single-point evaluation, parameter sweeps and their CSV form."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .. import analytic, asymptotic
from ..montecarlo import simulate
from ..quadrature import QuadratureError, QuadratureSettings
from ..throughput import (TruncationError, throughput_delay_sensitive,
                          throughput_delay_tolerant)
from .config import HEADER_MAGIC, ConfigError, RunConfig

COLUMNS = ("value", "p_out_exact", "p_out_asymptotic", "p_out_mc", "mc_std_error",
           "tau_ds_exact", "tau_dt_exact", "tau_ds_mc", "tau_dt_mc", "truncation_upper",
           "notes")
NUMERIC_COLUMNS = COLUMNS[1:-1]

# failures that mean "the numerics did not converge" rather than bad input
NUMERICAL_ERRORS = (QuadratureError, TruncationError, OverflowError, FloatingPointError)


def format_number(x: Optional[float]) -> str:
    """12 significant digits in scientific notation; ``None`` is an empty field."""
    return "" if x is None else f"{float(x):.11e}"


def format_position(pt) -> str:
    return f"{format_number(pt[0])};{format_number(pt[1])}"


@dataclass
class PointResult:
    value: str
    fields: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return not self.notes

    def cells(self):
        return [self.value] + [format_number(self.fields.get(c)) for c in NUMERIC_COLUMNS] \
            + [";".join(self.notes)]


@dataclass
class SweepResult:
    """Rows in sweep order plus the header block that reproduces them."""

    rows: list
    header: list
    curve_ids: Optional[list] = None

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.rows)

    def columns(self):
        return (("curve",) if self.curve_ids is not None else ()) + COLUMNS

    def to_csv(self) -> str:
        lines = list(self.header)
        lines.append(",".join(self.columns()))
        for i, row in enumerate(self.rows):
            cells = row.cells()
            if self.curve_ids is not None:
                cells = [self.curve_ids[i]] + cells
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def _dt_settings(cfg: RunConfig) -> QuadratureSettings:
    # the throughput integral sits on top of the outage integral, so it
    # asks for ten times less than the outage evaluation it consumes
    return QuadratureSettings(rel_tol=10 * cfg.rel_tol, abs_tol=10 * cfg.abs_tol,
                              max_depth=cfg.max_depth)


def _tag(engine: str, exc: Exception) -> str:
    kind = "nonconvergence" if isinstance(exc, NUMERICAL_ERRORS) else "error"
    return f"{engine}:{kind}"


def run_point(cfg: RunConfig, value: str = "", mc_workers: Optional[int] = None,
              exact: Callable = analytic.outage_exact) -> PointResult:
    """Evaluate every requested engine at one parameter point.

    An engine that fails leaves its fields empty and adds a note; the other
    engines still run.  ``exact`` can be swapped for a modified outage
    function, which is how the regression grid's sensitivity is checked.
    """
    p = cfg.params()
    q = cfg.quadrature()
    g = cfg.gamma_th
    out = PointResult(value)
    frac = p.transmit_fraction
    rate = math.log2(1.0 + g)

    if "exact" in cfg.engines:
        try:
            p_out = float(exact(g, p, q))
            out.fields["p_out_exact"] = p_out
            if cfg.throughput:
                out.fields["tau_ds_exact"] = frac * rate * (1.0 - p_out)

                def evaluator(x):
                    return exact(x, p, q)

                evaluator.source = "exact"
                res = throughput_delay_tolerant(p, evaluator, _dt_settings(cfg))
                out.fields["tau_dt_exact"] = res.value
                out.fields["truncation_upper"] = res.truncation_upper
        except (*NUMERICAL_ERRORS, ValueError) as exc:
            out.notes.append(_tag("exact", exc))

    if "asymptotic" in cfg.engines:
        try:
            out.fields["p_out_asymptotic"] = float(asymptotic.outage_asymptotic(g, p))
        except (*NUMERICAL_ERRORS, ValueError) as exc:
            out.notes.append(_tag("asymptotic", exc))

    if "montecarlo" in cfg.engines:
        workers = cfg.workers if mc_workers is None else mc_workers
        try:
            (est,), cap = simulate(p, [g], cfg.trials, cfg.seed, workers)
            out.fields["p_out_mc"] = est.mean
            out.fields["mc_std_error"] = est.std_error
            if cfg.throughput:
                out.fields["tau_ds_mc"] = frac * rate * (1.0 - est.mean)
                out.fields["tau_dt_mc"] = frac * cap.mean
        except (*NUMERICAL_ERRORS, ValueError) as exc:
            out.notes.append(_tag("montecarlo", exc))
    return out


def grid_values(cfg: RunConfig):
    """``(display value, point config)`` for every sweep point, in order."""
    var = cfg.variable
    if var == "pu_tx_position":
        if not cfg.positions:
            raise ConfigError("sweeping pu_tx_position needs a 'positions' list")
        return [(format_position(pt), cfg.replace(pu_tx_center=tuple(pt)))
                for pt in cfg.positions]
    if cfg.values:
        raw = np.asarray(cfg.values, dtype=float)
    else:
        if cfg.steps < 2:
            raise ConfigError("steps must be at least 2")
        raw = np.linspace(cfg.start, cfg.stop, cfg.steps)
    if var == "m_and_n":
        counts = [int(round(v)) for v in raw]
        if any(k < 1 for k in counts):
            raise ConfigError("m_and_n values must be at least 1")
        return [(str(k), cfg.replace(m_receivers=k, n_transmitters=k)) for k in counts]
    return [(format_number(v), cfg.replace(**{var: float(v)})) for v in raw]


def _map_ordered(fn, items: Sequence, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def evaluate_grid(points, workers: int, exact: Callable = analytic.outage_exact):
    """Run ``(value, cfg)`` points on a pool; results keep input order."""
    mc_workers = 1 if len(points) > 1 and workers > 1 else None
    return _map_ordered(lambda vc: run_point(vc[1], vc[0], mc_workers, exact), points, workers)


def check_points(points):
    for _, c in points:
        c.validated()
    return points


def run_sweep(cfg: RunConfig) -> SweepResult:
    """Evaluate ``cfg`` over its sweep grid.  Rows come back in grid order."""
    cfg = cfg.validated()
    points = check_points(grid_values(cfg))
    rows = evaluate_grid(points, cfg.workers)
    header = [f"{HEADER_MAGIC} sweep"] + cfg.header_lines()
    return SweepResult(rows, header)


def eval_point(cfg: RunConfig) -> SweepResult:
    cfg = cfg.validated()
    header = [f"{HEADER_MAGIC} eval"] + cfg.header_lines()
    return SweepResult([run_point(cfg)], header)


def read_csv(text: str):
    """Parse a CSV written by this tool into ``(columns, rows)``.

    Numeric cells become floats, empty cells ``None``; other cells stay text.
    """
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(columns):
            raise ValueError(f"row has {len(cells)} cells, expected {len(columns)}")
        row = {}
        for name, cell in zip(columns, cells):
            if cell == "":
                row[name] = None
            else:
                try:
                    row[name] = float(cell)
                except ValueError:
                    row[name] = cell
        rows.append(row)
    return columns, rows
