"""Outage and throughput of an energy-harvesting underlay cognitive relay link.

Three independent engines share one parameter model:

* :mod:`ehrelay.analytic`: exact outage by nested adaptive quadrature
* :mod:`ehrelay.asymptotic`: closed-form large-system outage
* :mod:`ehrelay.montecarlo`: seeded, counter-based simulation

:mod:`ehrelay.throughput` turns any of them into delay-sensitive and
delay-tolerant throughput, and :mod:`ehrelay.cli` wraps everything in a
sweep/CSV command-line tool.
"""

from __future__ import annotations

from .analytic import outage_exact
from .asymptotic import outage_asymptotic, theta_d, theta_r
from .geometry import ChannelParams, NodeLayout, channel_params
from .montecarlo import estimate_ergodic_capacity, estimate_outage, simulate
from .params import SystemParams, baseline, db_to_linear, linear_to_db
from .throughput import throughput_delay_sensitive, throughput_delay_tolerant

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "NodeLayout", "SystemParams", "baseline", "channel_params",
    "db_to_linear", "estimate_ergodic_capacity", "estimate_outage", "linear_to_db",
    "outage_asymptotic", "outage_exact", "simulate", "theta_d", "theta_r",
    "throughput_delay_sensitive", "throughput_delay_tolerant",
]
