"""Figure presets and the exact-vs-simulation regression grid.

Axis ranges, point counts and the legend parameter sets below are
reconstructions: only the physical setup is documented for each figure, so
the grids are chosen to cover the interesting regime and then frozen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .. import analytic
from .config import HEADER_MAGIC, ConfigError, RunConfig
from .sweep import (SweepResult, _map_ordered, check_points, format_number,
                    format_position, grid_values, run_point)

# PU transmitter cluster positions used where a figure varies the geometry:
# next to SS, the default, next to SR and next to SD
PU_TX_POSITIONS = ((-1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, -1.0))

_POWER_AXIS = dict(start=-10.0, stop=30.0, steps=21)
_PUTX_AXIS = dict(start=-20.0, stop=30.0, steps=21)
_M_AXIS = (1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 30, 40, 50, 60, 75, 100)


@dataclass(frozen=True)
class FigurePreset:
    """One figure: shared settings plus one override set per curve."""

    figure_id: str
    description: str
    common: dict
    curves: tuple  # of (curve id, overrides)


def _curve_set(key, values, fmt=format_number):
    return tuple((f"{key}={fmt(v)}", {key: v}) for v in values)


FIGURES = {
    "fig3": FigurePreset(
        "fig3", "outage vs P_I for three SIR thresholds",
        dict(variable="p_interference_dbw", **_POWER_AXIS, p_putx_dbw=0.0, throughput=False),
        _curve_set("gamma_th_db", (-10.0, 0.0, 10.0))),
    "fig4": FigurePreset(
        "fig4", "throughputs vs P_I for three PU transmit powers",
        dict(variable="p_interference_dbw", **_POWER_AXIS, gamma_th_db=0.0, throughput=True),
        _curve_set("p_putx_dbw", (-10.0, 0.0, 10.0))),
    "fig5": FigurePreset(
        "fig5", "outage vs P_PUtx for four PU transmitter positions",
        dict(variable="p_putx_dbw", **_PUTX_AXIS, gamma_th_db=-10.0,
             p_interference_dbw=10.0, throughput=False),
        _curve_set("pu_tx_center", PU_TX_POSITIONS, format_position)),
    "fig6": FigurePreset(
        "fig6", "outage vs P_PUtx for three interference limits",
        dict(variable="p_putx_dbw", **_PUTX_AXIS, gamma_th_db=-10.0, throughput=False),
        _curve_set("p_interference_dbw", (0.0, 10.0, 20.0))),
    "fig7": FigurePreset(
        "fig7", "throughputs vs P_PUtx for three interference limits",
        dict(variable="p_putx_dbw", **_PUTX_AXIS, gamma_th_db=0.0, throughput=True),
        _curve_set("p_interference_dbw", (0.0, 10.0, 20.0))),
    "fig8": FigurePreset(
        "fig8", "outage vs M = N, exact and large-system",
        dict(variable="m_and_n", values=tuple(float(k) for k in _M_AXIS), gamma_th_db=-10.0,
             p_interference_dbw=10.0, p_putx_dbw=0.0, throughput=False,
             engines=("exact", "asymptotic")),
        (("base", {}),)),
    "fig9": FigurePreset(
        "fig9", "throughputs vs alpha for M = N in {3, 15}",
        dict(variable="alpha", start=0.05, stop=0.95, steps=19, gamma_th_db=0.0,
             p_interference_dbw=10.0, p_putx_dbw=0.0, throughput=True),
        tuple((f"m_and_n={k}", {"m_receivers": k, "n_transmitters": k}) for k in (3, 15))),
}


def figure_configs(figure_id: str, base: RunConfig | None = None,
                   overrides: dict | None = None):
    """``(curve id, config)`` per curve: ``base``, then the preset, then ``overrides``.

    ``overrides`` carries explicit command-line choices such as trials or
    engines, which win over the preset.
    """
    try:
        preset = FIGURES[figure_id]
    except KeyError:
        raise ConfigError(f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}") \
            from None
    base = base or RunConfig()
    out = []
    for curve_id, curve in preset.curves:
        cfg = base.replace(**preset.common).replace(**curve).replace(**(overrides or {}))
        out.append((curve_id, cfg.validated()))
    return out


def figure_preset(figure_id: str, base: RunConfig | None = None,
                  overrides: dict | None = None) -> SweepResult:
    """Run every curve of a figure as one table with a ``curve`` column."""
    curves = figure_configs(figure_id, base, overrides)
    points, ids = [], []
    for curve_id, cfg in curves:
        for value, point_cfg in check_points(grid_values(cfg)):
            points.append((value, point_cfg))
            ids.append(curve_id)
    workers = curves[0][1].workers
    mc_workers = 1 if workers > 1 else None
    rows = _map_ordered(lambda vc: run_point(vc[1], vc[0], mc_workers), points, workers)
    header = [f"{HEADER_MAGIC} figure {figure_id}", f"# {FIGURES[figure_id].description}"]
    for curve_id, cfg in curves:
        header.append(f"# [curve {curve_id}]")
        header.extend(cfg.header_lines())
    return SweepResult(rows, header, ids)


# ---------------------------------------------------------------------------
# regression grid

@dataclass(frozen=True)
class GridPoint:
    figure: str
    gamma_th_db: float
    p_interference_dbw: float
    p_putx_dbw: float
    pu_tx_center: tuple = (0.0, 1.0)

    def config(self, base: RunConfig) -> RunConfig:
        return base.replace(gamma_th_db=self.gamma_th_db,
                            p_interference_dbw=self.p_interference_dbw,
                            p_putx_dbw=self.p_putx_dbw, pu_tx_center=self.pu_tx_center)


def regression_grid():
    """30 points drawn from the settings of the outage and throughput figures.

    Outage depends on the two powers only through ``P_I / P_PUtx``, so the
    points are spread over distinct ratios rather than a product grid.
    """
    pts = []
    for g in (-10.0, 0.0, 10.0):
        for pi in (0.0, 10.0, 20.0):
            pts.append(GridPoint("fig3", g, pi, 0.0))
    for pi in (5.0, 15.0):
        for pp in (-10.0, 10.0):
            pts.append(GridPoint("fig4", 0.0, pi, pp))
    for pos in PU_TX_POSITIONS:
        for pp in (-5.0, 15.0):
            pts.append(GridPoint("fig5", -10.0, 10.0, pp, pos))
    for pi in (0.0, 12.0):
        for pp in (-5.0, 5.0, 25.0):
            pts.append(GridPoint("fig6", -10.0, pi, pp))
    for pp in (-20.0, 2.0, 22.0):
        pts.append(GridPoint("fig7", 0.0, 10.0, pp))
    return tuple(pts)


VALIDATE_COLUMNS = ("point", "figure", "gamma_th_db", "p_interference_dbw", "p_putx_dbw",
                    "pu_tx_center", "p_out_exact", "p_out_mc", "mc_std_error", "tolerance",
                    "abs_diff", "status")


@dataclass
class ValidationReport:
    header: list
    rows: list      # list of lists of cells
    failures: int
    nonconverged: int

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.nonconverged == 0

    def to_csv(self) -> str:
        lines = list(self.header) + [",".join(VALIDATE_COLUMNS)]
        lines += [",".join(r) for r in self.rows]
        lines.append(f"# summary: {len(self.rows) - self.failures - self.nonconverged} passed, "
                     f"{self.failures} failed, {self.nonconverged} did not converge")
        return "\n".join(lines) + "\n"


def tolerance(std_error: float) -> float:
    return max(0.005, 3.0 * std_error)


def validate(base: RunConfig | None = None,
             exact: Callable = analytic.outage_exact) -> ValidationReport:
    """Compare exact and simulated outage on :func:`regression_grid`.

    Uses the trials, seed, tolerances and non-grid settings of ``base``.
    A point passes when ``|exact - MC| <= max(0.005, 3 sigma)``.
    """
    base = (base or RunConfig()).replace(engines=("exact", "montecarlo"), throughput=False)
    base = base.validated()
    grid = regression_grid()
    points = [(str(i), gp.config(base).validated()) for i, gp in enumerate(grid)]
    mc_workers = 1 if base.workers > 1 else None
    results = _map_ordered(lambda vc: run_point(vc[1], vc[0], mc_workers, exact),
                           points, base.workers)
    rows, failures, nonconverged = [], 0, 0
    for i, (gp, res) in enumerate(zip(grid, results)):
        ex = res.fields.get("p_out_exact")
        mc = res.fields.get("p_out_mc")
        se = res.fields.get("mc_std_error")
        if ex is None or mc is None:
            status, tol, diff = "nonconvergence", None, None
            nonconverged += 1
        else:
            tol, diff = tolerance(se), abs(ex - mc)
            status = "pass" if diff <= tol else "FAIL"
            failures += status == "FAIL"
        rows.append([str(i), gp.figure, format_number(gp.gamma_th_db),
                     format_number(gp.p_interference_dbw), format_number(gp.p_putx_dbw),
                     format_position(gp.pu_tx_center), format_number(ex), format_number(mc),
                     format_number(se), format_number(tol), format_number(diff), status])
    header = [f"{HEADER_MAGIC} validate"] + base.header_lines()
    return ValidationReport(header, rows, failures, nonconverged)
