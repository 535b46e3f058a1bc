"""Delay-sensitive and delay-tolerant throughput.

Both modes take an *outage evaluator*: any callable mapping a linear SIR
threshold (scalar or array) to the outage probability at that threshold,
i.e. the CDF of the end-to-end SIR.  Exact, large-system and simulated
outage all plug into the same two formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .params import SystemParams
from .quadrature import QuadratureSettings, integrate

DELAY_SENSITIVE = "delay-sensitive"
DELAY_TOLERANT = "delay-tolerant"

# the CCDF of the end-to-end SIR is cut once it drops below this
TRUNCATION_SURVIVAL = 1e-6
_MAX_DOUBLINGS = 80

OutageEvaluator = Callable[[object], object]


@dataclass(frozen=True)
class ThroughputResult:
    value: float
    mode: str
    outage_source: str
    truncation_upper: Optional[float] = None


class TruncationError(RuntimeError):
    pass


def _source(outage) -> str:
    return getattr(outage, "source", "custom")


def _evaluate(outage, x):
    # evaluators that only take scalars are called point by point
    x = np.asarray(x, dtype=float)
    try:
        out = np.asarray(outage(x), dtype=float)
    except TypeError:
        out = None
    if out is None or out.shape != x.shape:
        out = np.array([float(outage(float(v))) for v in x.ravel()]).reshape(x.shape)
    return out


def throughput_delay_sensitive(gamma_th: float, p: SystemParams,
                               outage: OutageEvaluator) -> ThroughputResult:
    """Fixed-rate throughput ``(1 - alpha)/2 * log2(1 + g) * (1 - P_out(g))``."""
    if not gamma_th > 0:
        raise ValueError("delay-sensitive throughput needs gamma_th > 0")
    p_out = float(_evaluate(outage, gamma_th))
    value = p.transmit_fraction * math.log2(1.0 + gamma_th) * (1.0 - p_out)
    return ThroughputResult(value, DELAY_SENSITIVE, _source(outage))


def truncation_point(outage: OutageEvaluator) -> float:
    """Smallest ``U = 2**k`` (k >= 0) with ``1 - P_out(U) < 1e-6``.

    The doubling grid is evaluated in one batch.
    """
    grid = 2.0 ** np.arange(_MAX_DOUBLINGS)
    survival = 1.0 - _evaluate(outage, grid)
    hits = np.flatnonzero(survival < TRUNCATION_SURVIVAL)
    if hits.size == 0:
        raise TruncationError(
            f"outage stays below {1 - TRUNCATION_SURVIVAL} up to {grid[-1]:.3g}; "
            "the evaluator is not a valid CDF")
    return float(grid[hits[0]])


def throughput_delay_tolerant(p: SystemParams, outage: OutageEvaluator,
                              quad: QuadratureSettings | None = None) -> ThroughputResult:
    """Ergodic-rate throughput ``(1 - alpha)/(2 ln 2) * int_0^U (1 - F(x))/(1 + x) dx``.

    ``F`` is the outage evaluator and ``U`` comes from
    :func:`truncation_point`.  The integral is taken in ``v = ln(1 + x)``,
    where the integrand is just ``1 - F(e^v - 1)``.
    """
    quad = quad or QuadratureSettings(rel_tol=1e-6, abs_tol=1e-9)
    upper = truncation_point(outage)

    def survival(v):
        return 1.0 - _evaluate(outage, np.expm1(v))

    integral = integrate(survival, 0.0, math.log1p(upper), quad)
    value = p.transmit_fraction / math.log(2.0) * float(integral)
    return ThroughputResult(value, DELAY_TOLERANT, _source(outage), upper)
