"""Comparison systems: static multi-radio assignment and a single common channel."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .routing import EstablishedRoute
from .topology import Topology


@dataclass(frozen=True)
class StaticAssignment:
    """Fixed interface-to-channel map, plus the channel each link is pinned to.

    Links missing from ``link_channels`` use the lowest channel both ends share.
    """

    interfaces: dict[int, tuple[int, ...]]
    link_channels: dict[tuple[int, int], int] = field(default_factory=dict)

    def shared(self, a: int, b: int) -> list[int]:
        return sorted(set(self.interfaces.get(a, ())) & set(self.interfaces.get(b, ())))

    def channel(self, a: int, b: int) -> int | None:
        key = (min(a, b), max(a, b))
        if key in self.link_channels:
            return self.link_channels[key]
        common = self.shared(a, b)
        return common[0] if common else None

    def digest(self) -> int:
        return hash((tuple(sorted(self.interfaces.items())), tuple(sorted(self.link_channels.items()))))


def _spread(topology: Topology, channels: int, k: int) -> dict[int, tuple[int, ...]]:
    # rank 0 is the highest-degree node, ties by id
    order = sorted(range(topology.n), key=lambda v: (-topology.degree(v), v))
    rank = {v: r for r, v in enumerate(order)}
    return {v: tuple(((i + rank[v]) % channels) + 1 for i in range(k)) for v in range(topology.n)}


def _with_common_channel(ifaces: dict[int, tuple[int, ...]], channels: int, k: int):
    out = {}
    for v, chans in ifaces.items():
        rest = [c for c in chans if c != 1][: k - 1]
        out[v] = (1, *rest)
    return out


def static_assign(topology: Topology, channels: int | None = None, k: int | None = None,
                  seed: int = 0, pin_links: bool = True, greedy: bool = False) -> StaticAssignment:
    """Fixed channels for the whole run.

    Interfaces get a degree-ranked spread of channels; if some neighbour pair
    then shares no channel, interface 0 is forced to channel 1 everywhere.
    Each link is then pinned to one of the channels its ends share, drawn with
    a ``seed``-driven generator. With ``greedy`` the draw is restricted to the
    shared channels that collide with the fewest already-pinned links. With
    ``pin_links=False`` every link uses its lowest shared channel.
    """
    channels = topology.channels if channels is None else channels
    k = topology.interfaces if k is None else k
    if channels < k:
        raise ValueError(f"need channels >= interfaces, got {channels} < {k}")
    if k < 1:
        raise ValueError("need at least one interface")
    ifaces = _spread(topology, channels, k)
    links = topology.links()
    if any(not set(ifaces[a]) & set(ifaces[b]) for a, b in links):
        ifaces = _with_common_channel(ifaces, channels, k)

    if not pin_links:
        return StaticAssignment(ifaces)
    rng = np.random.default_rng(seed)
    pinned: dict[tuple[int, int], int] = {}
    for a, b in links:
        common = sorted(set(ifaces[a]) & set(ifaces[b]))
        load = {ch: 0 for ch in common}
        for (u, v), ch in (pinned.items() if greedy else ()):
            if ch in load and topology.interferes(a, b, ch, u, v, ch):
                load[ch] += 1
        best = min(load.values())
        ties = [ch for ch in common if load[ch] == best]
        pinned[(a, b)] = ties[int(rng.integers(len(ties)))] if len(ties) > 1 else ties[0]
    return StaticAssignment(ifaces, pinned)


def static_route(assignment: StaticAssignment, topology: Topology, src: int, dst: int,
                 flow_id: int = 0, now: float = 0.0) -> EstablishedRoute | None:
    """Shortest path over links whose ends share a channel; no reassignment, ever."""
    path = topology.shortest_path(src, dst, usable=lambda a, b: bool(assignment.shared(a, b)))
    if path is None:
        return None
    chans = [assignment.channel(a, b) for a, b in zip(path, path[1:])]
    return EstablishedRoute(flow_id, path, chans, now)


def single_radio_route(topology: Topology, src: int, dst: int, flow_id: int = 0,
                       now: float = 0.0) -> EstablishedRoute | None:
    """Shortest path with every hop on the common channel 1."""
    path = topology.shortest_path(src, dst)
    if path is None:
        return None
    return EstablishedRoute(flow_id, path, [1] * (len(path) - 1), now)
