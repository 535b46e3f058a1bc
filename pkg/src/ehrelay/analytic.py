"""Exact outage probability by nested numerical integration.

Conditioning on the aggregate PU power at the relay ``Z2`` makes the two
hops independent.  Each hop's success probability given ``Z2`` splits on
which of the two transmit-power limits is active (harvested energy or the
interference cap), giving four kernels:

``j_r_i``   first hop, energy-limited; averaged over ``Z1``
``j_r_ii``  first hop, interference-limited; averaged over ``Y1``
``j_d_i``   second hop, energy-limited; closed form
``j_d_ii``  second hop, interference-limited; averaged over ``Y2``

The outage probability is one minus the ``Z2``-average of the product of
the two hop success probabilities.

Every kernel broadcasts over ``z2`` and ``gamma_th`` so one outer node set
is evaluated with a single batched inner integration.  Integration
variables are normalised by each distribution's natural scale: Erlang
variables by ``P_PUtx * nu`` and maxima by ``omega``.
"""

from __future__ import annotations

import numpy as np

from .distributions import ErlangSpec, erlang_pdf, gamma_q
from .params import SystemParams
from .quadrature import QuadratureError, QuadratureSettings, integrate_semi_infinite

DEFAULT_SETTINGS = QuadratureSettings()

# e^-LOWER_CLIP underflows to zero, so tails beyond it contribute nothing
_LOWER_CLIP = 1e4


def _harmonic(m: int) -> float:
    return float(np.sum(1.0 / np.arange(1, m + 1)))


def _max_exp_density_unit(s, m: int):
    # density of the max of m unit-mean exponentials, product form
    return m * (-np.expm1(-s)) ** (m - 1) * np.exp(-s)


def _batch(z2, gamma_th):
    z2, gamma_th = np.broadcast_arrays(np.asarray(z2, dtype=float),
                                       np.asarray(gamma_th, dtype=float))
    if np.any(gamma_th < 0):
        raise ValueError("gamma_th must be nonnegative")
    return z2, gamma_th


def _shape_out(x):
    x = np.asarray(x, dtype=float)
    return x[()] if x.ndim == 0 else x


def j_r_i(z2, gamma_th, p: SystemParams, q: QuadratureSettings = DEFAULT_SETTINGS):
    """First-hop success with the energy limit active, given ``Z2 = z2``.

    ``Pr{X1 >= z2 g / (rho Z1), Y1 <= P_I / (rho Z1)}`` averaged over ``Z1``.
    """
    z2, g = _batch(z2, gamma_th)
    if np.any(z2 < 0):
        raise ValueError("z2 must be nonnegative")
    c = p.channel
    theta = p.p_putx * c.nu1
    a = z2 * g / (theta * p.rho * c.lambda1)
    b = p.p_interference / (theta * p.rho * c.omega1)
    m, n = p.m_receivers, p.n_transmitters
    unit = ErlangSpec(n, 1.0)

    def integrand(x):
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            return np.exp(-a / x) * (-np.expm1(-b / x)) ** m * erlang_pdf(x, unit)

    lower = np.zeros(z2.shape) if z2.ndim else 0.0
    return _shape_out(integrate_semi_infinite(integrand, lower, q, scale=float(n)))


def j_r_ii(z2, gamma_th, p: SystemParams, q: QuadratureSettings = DEFAULT_SETTINGS):
    """First-hop success with the interference cap active, given ``Z2 = z2``.

    ``Pr{X1 >= Y1 z2 g / P_I, Z1 >= P_I / (rho Y1)}`` averaged over ``Y1``.
    The second factor is the Erlang survival function ``Q(N, .)``.
    """
    z2, g = _batch(z2, gamma_th)
    if np.any(z2 < 0):
        raise ValueError("z2 must be nonnegative")
    c = p.channel
    theta = p.p_putx * c.nu1
    slope = c.omega1 * z2 * g / (p.p_interference * c.lambda1)
    knee = p.p_interference / (theta * p.rho * c.omega1)
    m, n = p.m_receivers, p.n_transmitters

    def integrand(s):
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            return np.exp(-slope * s) * gamma_q(n, knee / s) * _max_exp_density_unit(s, m)

    lower = np.zeros(z2.shape) if z2.ndim else 0.0
    return _shape_out(integrate_semi_infinite(integrand, lower, q, scale=_harmonic(m)))


def j_d_i(z2, gamma_th, p: SystemParams):
    """Second-hop success with the energy limit active, given ``Z2 = z2``.

    Closed form: ``(1 - e^{-P_I/(z2 rho w2)})^M (1 + P_PUtx nu3 g / (rho z2 l2))^-N``.
    """
    z2, g = _batch(z2, gamma_th)
    if np.any(z2 <= 0):
        raise ValueError("z2 must be positive")
    c = p.channel
    cap = (-np.expm1(-p.p_interference / (z2 * p.rho * c.omega2))) ** p.m_receivers
    load = 1.0 + p.p_putx * c.nu3 * g / (p.rho * z2 * c.lambda2)
    return _shape_out(cap * load ** (-float(p.n_transmitters)))


def j_d_ii(z2, gamma_th, p: SystemParams, q: QuadratureSettings = DEFAULT_SETTINGS):
    """Second-hop success with the interference cap active, given ``Z2 = z2``.

    Integral over ``y2 >= P_I / (rho z2)`` of the density of ``Y2`` times
    ``(1 + y2 g P_PUtx nu3 / (P_I l2))^-N``, the latter being ``Z3``
    averaged out of the exponential tail of ``X2``.
    """
    z2, g = _batch(z2, gamma_th)
    if np.any(z2 <= 0):
        raise ValueError("z2 must be positive")
    c = p.channel
    slope = c.omega2 * g * p.p_putx * c.nu3 / (p.p_interference * c.lambda2)
    with np.errstate(over="ignore"):
        lower = np.minimum(p.p_interference / (p.rho * z2 * c.omega2), _LOWER_CLIP)
    m, n = p.m_receivers, float(p.n_transmitters)

    def integrand(s):
        with np.errstate(over="ignore", under="ignore"):
            return _max_exp_density_unit(s, m) * (1.0 + s * slope) ** (-n)

    return _shape_out(integrate_semi_infinite(integrand, lower, q, scale=1.0))


def hop_success(z2, gamma_th, p: SystemParams, q: QuadratureSettings = DEFAULT_SETTINGS):
    """Conditional success probabilities ``(Pr{G_R >= g | z2}, Pr{G_D >= g | z2})``."""
    relay = j_r_i(z2, gamma_th, p, q) + j_r_ii(z2, gamma_th, p, q)
    dest = j_d_i(z2, gamma_th, p) + j_d_ii(z2, gamma_th, p, q)
    return relay, dest


def outage_exact(gamma_th, p: SystemParams, q: QuadratureSettings = DEFAULT_SETTINGS):
    """Exact outage probability ``Pr{min(G_R, G_D) < gamma_th}``.

    ``gamma_th`` is a linear SIR threshold, scalar or array; arrays are
    integrated as one batch.  Inner kernels run at ten times the outer
    tolerance.  A result outside ``[0, 1]`` by more than ten outer
    tolerances raises :class:`QuadratureError` rather than being clipped.
    """
    g = np.asarray(gamma_th, dtype=float)
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise ValueError("gamma_th must be finite and nonnegative")
    inner = q.tightened(10.0)
    theta2 = p.p_putx * p.channel.nu2
    n = p.n_transmitters
    unit = ErlangSpec(n, 1.0)

    def outer(x):
        # one kernel evaluation per outer node serves both hops
        xb = x.reshape((-1,) + (1,) * g.ndim)
        z2 = theta2 * xb
        relay, dest = hop_success(z2, g, p, inner)
        return relay * dest * erlang_pdf(xb, unit)

    success = integrate_semi_infinite(outer, 0.0, q, scale=float(n))
    out = 1.0 - np.asarray(success, dtype=float)
    slack = 10.0 * max(q.abs_tol, q.rel_tol)
    if np.any(out < -slack) or np.any(out > 1.0 + slack):
        raise QuadratureError(f"outage estimate {out} left [0, 1]", out, np.nan)
    return _shape_out(np.clip(out, 0.0, 1.0))


def outage_evaluator(p: SystemParams, q: QuadratureSettings = DEFAULT_SETTINGS):
    """Bind ``p`` and ``q`` into a one-argument, thread-safe outage function."""

    def evaluate(gamma_th):
        return outage_exact(gamma_th, p, q)

    evaluate.source = "exact"
    evaluate.thread_safe = True
    return evaluate
