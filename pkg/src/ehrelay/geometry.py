"""Node placement and path-loss link parameters.

All primary transmitters sit at one center point and all primary receivers
at another, so every PU link family collapses to a single mean gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Point = tuple[float, float]

MIN_LINK_DISTANCE = 1.0


@dataclass(frozen=True)
class NodeLayout:
    """Planar coordinates of the secondary nodes and the two PU centers."""

    ss: Point = (0.0, 0.0)
    sr: Point = (1.0, 0.0)
    sd: Point = (2.0, 0.0)
    pu_tx_center: Point = (0.0, 1.0)
    pu_rx_center: Point = (2.0, 1.0)

    def with_pu_tx(self, center: Point) -> NodeLayout:
        return NodeLayout(self.ss, self.sr, self.sd, tuple(center), self.pu_rx_center)


@dataclass(frozen=True)
class ChannelParams:
    """Mean gains of the exponentially distributed link powers.

    ``lambda*`` are the information links SS->SR and SR->SD, ``omega*`` the
    interference links SS->PU_rx and SR->PU_rx, and ``nu*`` the links from
    the PU transmitters to SS, SR and SD.
    """

    lambda1: float
    lambda2: float
    omega1: float
    omega2: float
    nu1: float
    nu2: float
    nu3: float

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


def distance(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _gain(a: Point, b: Point, m: float, link: str) -> float:
    d = distance(a, b)
    if d < MIN_LINK_DISTANCE:
        raise ValueError(f"link {link} has distance {d:g} < {MIN_LINK_DISTANCE:g}")
    return d ** (-m)


def channel_params(layout: NodeLayout, m: float) -> ChannelParams:
    """Return the mean link gains ``d**-m`` for every active link of ``layout``.

    Raises
    ------
    ValueError
        If ``m`` is not positive or any active link is shorter than one unit.
    """
    if not m > 0:
        raise ValueError(f"path-loss exponent must be positive, got {m!r}")
    tx, rx = layout.pu_tx_center, layout.pu_rx_center
    return ChannelParams(
        lambda1=_gain(layout.ss, layout.sr, m, "SS-SR"),
        lambda2=_gain(layout.sr, layout.sd, m, "SR-SD"),
        omega1=_gain(layout.ss, rx, m, "SS-PUrx"),
        omega2=_gain(layout.sr, rx, m, "SR-PUrx"),
        nu1=_gain(tx, layout.ss, m, "PUtx-SS"),
        nu2=_gain(tx, layout.sr, m, "PUtx-SR"),
        nu3=_gain(tx, layout.sd, m, "PUtx-SD"),
    )
