"""Replays of the four worked examples on a 3x3 grid (n1 top-left, row-major).

    n1 n2 n3
    n4 n5 n6
    n7 n8 n9
"""

import pytest

from rcasim import protocol, routing
from rcasim.chanstate import OccupancyReason
from rcasim.protocol import ResponseKind, StepKind
from rcasim.routing import DiscoveryStatus, RouteRequest

from conftest import grid3, n, trca_conflict


def kinds(d):
    return [m.response_info.kind for m in d.messages if isinstance(m, RouteRequest)]


def busy_neighbourhood(n1_n4_until=20.0):
    """n5 hears channel 1 and 2 from n2 and channel 3 from n4, while n8 hears nothing."""
    topo = grid3(channels=3, interfaces=2)
    states = protocol.new_states(topo)
    links = [(n(1), n(2), 1, 20.0), (n(2), n(3), 2, 20.0), (n(1), n(4), 3, n1_n4_until)]
    for a, b, ch, until in links:
        protocol.occupy_link(topo, states, a, b, ch, until, now=0.0)
    # the background itself must be a legal assignment
    for i, (a, b, ch, _) in enumerate(links):
        for c, d, ch2, _ in links[i + 1:]:
            assert not trca_conflict(topo, (a, b, ch), (c, d, ch2))
    return topo, states


def test_two_node_handshake():
    topo = grid3()
    states = protocol.new_states(topo)
    res = protocol.step_distribution(topo, states, n(1), n(2), t_pre=12.0, now=0.0)
    assert res.kind is StepKind.PROCEED and res.channel == 1
    assert res.response.kind is ResponseKind.AVAILABLE
    b = states[n(2)]
    assert b.c_pre == 1 and b.t_pre == 12.0
    assert (1, OccupancyReason.SELF_TX, 12.0) in b.c_cur
    # both neighbourhoods learn about the channel
    assert states[n(3)].is_occupied(1, 0.0) and states[n(4)].is_occupied(1, 0.0)


def test_case1_direct_assignment():
    topo = grid3(channels=3, interfaces=3)
    states = protocol.new_states(topo)
    protocol.occupy_link(topo, states, n(2), n(3), 2, 20.0)
    assert (2, OccupancyReason.NEIGHBOR_BLOCK, 20.0) in states[n(5)].c_cur

    d = routing.discover_route(topo, states, n(8), n(2), t_pre=30.0, now=0.0)
    assert d.status is DiscoveryStatus.ESTABLISHED
    assert d.route.path == [n(8), n(5), n(2)]
    assert d.route.channels == [1, 3]
    assert kinds(d) == [ResponseKind.AVAILABLE, ResponseKind.AVAILABLE]


def test_case2_route_elsewhere():
    topo, states = busy_neighbourhood()
    n5 = states[n(5)]
    assert n5.available_channels(0.0) == []
    assert n5.t_pre == 20.0
    assert states[n(8)].available_channels(0.0) == [1, 2, 3]

    d = routing.discover_route(topo, states, n(8), n(6), t_pre=15.0, now=0.0)
    first = d.messages[0]
    assert first.hop_list == (n(8), n(5)) and first.c_pre == 1
    assert first.response_info.kind is ResponseKind.ROUTE_ELSEWHERE
    assert d.status is DiscoveryStatus.ESTABLISHED
    assert d.route.path == [n(8), n(9), n(6)]
    assert d.route.channels == [1, 3]
    assert list(n5.waiting_queue) == []


def test_case3_wait_then_resume():
    topo, states = busy_neighbourhood(n1_n4_until=10.0)
    d = routing.discover_route(topo, states, n(8), n(5), t_pre=30.0, now=0.0)
    assert kinds(d) == [ResponseKind.WAIT]
    assert d.status is DiscoveryStatus.WAITING and d.waiting_on == n(5)
    n5 = states[n(5)]
    assert list(n5.waiting_queue) == [n(8)]
    assert n5.t_pre == pytest.approx(20.0 + 30.0)

    # n1 and n4 finish: channel 3 frees at n5 and the head waiter is told
    notes = protocol.release_link(topo, states, n(1), n(4), 3, now=8.0)
    assert [(x.waited_node, x.waiter, x.freed_channel) for x in notes] == [(n(5), n(8), 3)]
    assert routing.resume_waiting(d, topo, states, notes[0], now=8.0)
    assert d.status is DiscoveryStatus.ESTABLISHED
    assert d.route.path == [n(8), n(5)] and d.route.channels == [3]
    assert list(n5.waiting_queue) == []


def test_case3_literal_wait_update():
    topo, states = busy_neighbourhood(n1_n4_until=10.0)
    routing.discover_route(topo, states, n(8), n(5), t_pre=30.0, now=0.0, literal_tpre=True)
    assert states[n(5)].t_pre == 60.0


def test_case3_teardown_of_route_wakes_waiter():
    topo = grid3(channels=3, interfaces=2)
    states = protocol.new_states(topo)
    protocol.occupy_link(topo, states, n(1), n(2), 1, 20.0)
    protocol.occupy_link(topo, states, n(2), n(3), 2, 20.0)
    first = routing.discover_route(topo, states, n(1), n(4), t_pre=10.0, now=0.0)
    assert first.route.channels == [3]
    d = routing.discover_route(topo, states, n(8), n(5), t_pre=30.0, now=0.0)
    assert d.status is DiscoveryStatus.WAITING
    notes = routing.teardown(first.route, topo, states, now=8.0)
    assert [x.waiter for x in notes] == [n(8)]
    routing.resume_waiting(d, topo, states, notes[0], now=8.0)
    assert d.route.channels == [3]
