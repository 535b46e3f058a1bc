from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ehrelay.geometry import ChannelParams, NodeLayout, channel_params, distance


def test_default_layout_gains():
    c = channel_params(NodeLayout(), 3.0)
    assert c.lambda1 == pytest.approx(1.0)
    assert c.lambda2 == pytest.approx(1.0)
    assert c.omega1 == pytest.approx(5.0 ** -1.5)       # SS (0,0) to PU rx (2,1)
    assert c.omega2 == pytest.approx(2.0 ** -1.5)       # SR (1,0) to PU rx
    assert c.nu1 == pytest.approx(1.0)                  # PU tx (0,1) to SS
    assert c.nu2 == pytest.approx(2.0 ** -1.5)
    assert c.nu3 == pytest.approx(5.0 ** -1.5)


def test_swapping_pu_centers_swaps_link_families():
    layout = NodeLayout(pu_tx_center=(0.0, 1.0), pu_rx_center=(2.0, 1.0))
    swapped = NodeLayout(pu_tx_center=(2.0, 1.0), pu_rx_center=(0.0, 1.0))
    a, b = channel_params(layout, 3.0), channel_params(swapped, 3.0)
    assert (a.lambda1, a.lambda2) == (b.lambda1, b.lambda2)
    # SS->rx and tx->SS exchange roles, likewise for SR
    assert b.omega1 == pytest.approx(a.nu1)
    assert b.omega2 == pytest.approx(a.nu2)
    assert b.nu1 == pytest.approx(a.omega1)
    assert b.nu2 == pytest.approx(a.omega2)


def test_with_pu_tx_moves_only_transmitters():
    layout = NodeLayout().with_pu_tx((1.0, 1.0))
    assert layout.pu_tx_center == (1.0, 1.0)
    assert layout.pu_rx_center == NodeLayout().pu_rx_center


def test_rejects_short_links_and_bad_exponent():
    with pytest.raises(ValueError, match="SS-SR"):
        channel_params(NodeLayout(sr=(0.5, 0.0)), 3.0)
    with pytest.raises(ValueError):
        channel_params(NodeLayout(), 0.0)
    with pytest.raises(ValueError):
        ChannelParams(1, 1, 1, 1, 1, 1, -1)


@given(m=st.floats(0.5, 6.0), x=st.floats(-5, 5), y=st.floats(1.0, 5.0))
def test_gains_follow_inverse_power_law(m, x, y):
    layout = NodeLayout(pu_tx_center=(x, -y))  # at least one unit below every node
    c = channel_params(layout, m)
    assert math.isclose(c.nu1, distance(layout.ss, layout.pu_tx_center) ** -m, rel_tol=1e-12)
    assert 0 < c.nu3 <= 1.0
