"""System parameters shared by every evaluator, plus dB helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import ChannelParams, NodeLayout, channel_params


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class SystemParams:
    """Protocol and power parameters, all in linear units.

    ``alpha`` is the harvesting fraction of the slot and ``eta`` the
    conversion efficiency.  ``p_interference`` is the peak interference
    allowed at each PU receiver and ``p_putx`` the power of each PU
    transmitter, both in watts.  ``m_receivers`` / ``n_transmitters`` count
    the PU receivers and transmitters.

    The two information hops split the non-harvesting time equally, so the
    slot length cancels and the harvested power reaching the transmitter is
    ``rho * Z`` with ``rho = 2 * eta * alpha / (1 - alpha)``.
    """

    alpha: float
    eta: float
    p_interference: float
    p_putx: float
    m_receivers: int
    n_transmitters: int
    channel: ChannelParams

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta!r}")
        if not (self.p_interference > 0 and self.p_putx > 0):
            raise ValueError("p_interference and p_putx must be positive")
        for name in ("m_receivers", "n_transmitters"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def rho(self) -> float:
        return 2.0 * self.eta * self.alpha / (1.0 - self.alpha)

    @property
    def transmit_fraction(self) -> float:
        """Share of the slot carrying one hop, ``(1 - alpha) / 2``."""
        return 0.5 * (1.0 - self.alpha)

    def replace(self, **changes) -> SystemParams:
        return replace(self, **changes)

    @classmethod
    def from_layout(cls, layout: NodeLayout, path_loss_exponent: float, *, alpha: float,
                    eta: float, p_interference: float, p_putx: float, m_receivers: int,
                    n_transmitters: int) -> SystemParams:
        return cls(alpha=alpha, eta=eta, p_interference=p_interference, p_putx=p_putx,
                   m_receivers=m_receivers, n_transmitters=n_transmitters,
                   channel=channel_params(layout, path_loss_exponent))


def baseline(**overrides) -> SystemParams:
    """Default layout and the parameter set shared by most figures.

    ``alpha = 0.5``, ``eta = 0.8``, ``M = N = 3``, ``P_I = 10 dBW``,
    ``P_PUtx = 0 dBW``, path-loss exponent 3, PU transmitters at (0, 1).
    Keyword overrides are applied to the resulting parameters.
    """
    layout = NodeLayout()
    params = SystemParams.from_layout(
        layout, 3.0, alpha=0.5, eta=0.8, p_interference=10.0, p_putx=1.0,
        m_receivers=3, n_transmitters=3)
    return replace(params, **overrides) if overrides else params
