"""Large-system (M, N -> infinity) outage probability in closed form.

In the limit the aggregate PU powers concentrate at their means and the
strongest interference link becomes ``w (1 + ln M) + Ybar`` with
``Ybar ~ Normal(0, 2 w^2)``.  Each hop's success probability then has the
closed form implemented by :func:`_hop_survival`; the relay and destination
hops use the same kernel with their own link parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import erf, erfc, erfcx
from .params import SystemParams


@dataclass(frozen=True)
class HopLinks:
    """Link gains entering one hop of the large-system model.

    ``nu_harvest`` feeds the transmitter's harvested power, ``omega`` its
    interference link to the PU receivers, ``lam`` the information link and
    ``nu_interf`` the PU interference at the receiving node.
    """

    nu_harvest: float
    omega: float
    lam: float
    nu_interf: float


@dataclass(frozen=True)
class AsymptoticTerms:
    gamma: float    # composite rate P_PUtx N nu_interf g / (lam P_I)
    u: float        # Ybar at which the two power limits cross
    u_star: float   # Ybar at which the max-interference link hits zero


def relay_links(p: SystemParams) -> HopLinks:
    c = p.channel
    return HopLinks(c.nu1, c.omega1, c.lambda1, c.nu2)


def destination_links(p: SystemParams) -> HopLinks:
    c = p.channel
    return HopLinks(c.nu2, c.omega2, c.lambda2, c.nu3)


def hop_terms(gamma_th: float, p: SystemParams, links: HopLinks) -> AsymptoticTerms:
    n, m = p.n_transmitters, p.m_receivers
    shift = links.omega * (1.0 + math.log(m))
    return AsymptoticTerms(
        gamma=p.p_putx * n * links.nu_interf * gamma_th / (links.lam * p.p_interference),
        u=p.p_interference / (p.rho * n * p.p_putx * links.nu_harvest) - shift,
        u_star=-shift,
    )


def _hop_survival(gamma_th: float, p: SystemParams, links: HopLinks) -> float:
    if gamma_th < 0:
        raise ValueError("gamma_th must be nonnegative")
    w = links.omega
    t = hop_terms(gamma_th, p, links)
    gw = t.gamma * w
    arg = gw + t.u / (2.0 * w)
    # exp(g^2 w^2 - g w (1 + ln M)) erfc(arg): the exponential can overflow
    # while erfc underflows, so for arg >= 0 fold them via erfcx.
    if arg >= 0:
        cap = p.p_interference / (p.rho * p.n_transmitters * p.p_putx * links.nu_harvest)
        log_scale = -t.gamma * cap - (t.u / (2.0 * w)) ** 2
        capped = 0.5 * math.exp(log_scale) * float(erfcx(arg))
    else:
        log_scale = gw * gw - gw * (1.0 + math.log(p.m_receivers))
        if log_scale > 700.0:
            raise OverflowError(
                f"large-system formula outside its range (log-scale {log_scale:.1f})")
        capped = 0.5 * math.exp(log_scale) * float(erfc(arg))
    harvest_rate = links.nu_interf * gamma_th / (links.lam * p.rho * links.nu_harvest)
    limited = 0.5 * math.exp(-harvest_rate) * float(
        erf(t.u / (2.0 * w)) - erf(t.u_star / (2.0 * w)))
    return capped + limited


def theta_r(gamma_th: float, p: SystemParams) -> float:
    """Large-system probability that the relay's SIR reaches ``gamma_th``."""
    return _hop_survival(float(gamma_th), p, relay_links(p))


def theta_d(gamma_th: float, p: SystemParams) -> float:
    """Large-system probability that the destination's SIR reaches ``gamma_th``."""
    return _hop_survival(float(gamma_th), p, destination_links(p))


def outage_asymptotic(gamma_th, p: SystemParams):
    """``1 - theta_r * theta_d``; the hops decouple only in the limit.

    Defined for every ``M, N >= 1`` but only meaningful for large systems.
    Accepts scalar or array thresholds.
    """
    g = np.asarray(gamma_th, dtype=float)
    flat = [1.0 - theta_r(x, p) * theta_d(x, p) for x in g.ravel()]
    out = np.clip(np.array(flat).reshape(g.shape), 0.0, 1.0)
    return out[()] if out.ndim == 0 else out


def outage_evaluator(p: SystemParams):
    def evaluate(gamma_th):
        return outage_asymptotic(gamma_th, p)

    evaluate.source = "asymptotic"
    evaluate.thread_safe = True
    return evaluate
