"""AODV-style route discovery carrying R-CA channel fields.

The search is deterministic: from the current frontier, next hops are tried
in order of remaining hop distance to the destination, ties broken by node
id. Each hop runs one distribution step; a refusal blacklists that node for
the rest of the discovery, a dead end backtracks and releases the last hop.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from . import protocol
from .protocol import Response, StepKind, WaitNotify
from .topology import Topology


class DiscoveryStatus(enum.Enum):
    ESTABLISHED = "established"
    WAITING = "waiting"
    NO_PATH = "no_path"
    NO_CHANNEL = "no_channel"


@dataclass(frozen=True)
class RouteRequest:
    origin: int
    destination: int
    request_id: int
    hop_list: tuple[int, ...]
    c_pre: int | None = None
    t_pre: float = 0.0
    response_info: Response | None = None
    excluded: frozenset[int] = frozenset()


@dataclass(frozen=True)
class RouteReply:
    destination: int
    path: tuple[int, ...]
    channels: tuple[int, ...]
    c_pre: int
    t_pre: float


@dataclass
class EstablishedRoute:
    flow_id: int
    path: list[int]
    channels: list[int]
    established_at: float
    active: bool = True

    def __post_init__(self):
        if len(self.channels) != len(self.path) - 1:
            raise ValueError("need one channel per hop")

    @property
    def hops(self) -> list[tuple[int, int, int]]:
        return [(a, b, ch) for a, b, ch in zip(self.path, self.path[1:], self.channels)]


_request_ids: dict[int, itertools.count] = {}


def next_request_id(origin: int, counters=None) -> int:
    counters = _request_ids if counters is None else counters
    return next(counters.setdefault(origin, itertools.count(1)))


@dataclass
class Discovery:
    """State of one outstanding route discovery."""

    flow_id: int
    src: int
    dst: int
    t_pre: float
    request_id: int
    path: list[int] = field(default_factory=list)
    channels: list[int] = field(default_factory=list)
    excluded: set[int] = field(default_factory=set)
    status: DiscoveryStatus | None = None
    waiting_on: int | None = None
    waiting_channel: int | None = None
    route: EstablishedRoute | None = None
    literal_tpre: bool = False
    # control messages produced since the caller last drained them
    messages: list = field(default_factory=list)
    notifications: list[WaitNotify] = field(default_factory=list)

    @property
    def frontier(self) -> int:
        return self.path[-1]

    def drain(self):
        msgs, notes = self.messages, self.notifications
        self.messages, self.notifications = [], []
        return msgs, notes


def discover_route(topology: Topology, states, src: int, dst: int, *, t_pre: float, now: float,
                   excluded=(), flow_id: int = 0, request_id: int | None = None,
                   literal_tpre: bool = False) -> Discovery:
    if src == dst:
        raise ValueError("source and destination must differ")
    topology._check(src)
    topology._check(dst)
    d = Discovery(flow_id, src, dst, t_pre,
                  request_id if request_id is not None else next_request_id(src),
                  path=[src], excluded=set(excluded) - {src, dst}, literal_tpre=literal_tpre)
    if dst not in topology.hop_distances(src, blocked=d.excluded):
        d.status = DiscoveryStatus.NO_PATH
        return d
    _advance(d, topology, states, now)
    return d


def _request(d: Discovery, nxt: int, res) -> RouteRequest:
    return RouteRequest(d.src, d.dst, d.request_id, tuple(d.path) + (nxt,), res.requested, d.t_pre,
                        res.response, frozenset(d.excluded))


def _backtrack(d: Discovery, topology, states, now) -> bool:
    """Drop the frontier; False when the source itself is the dead end."""
    dead = d.path.pop()
    if not d.path:
        d.path.append(dead)
        return False
    d.excluded.add(dead)
    ch = d.channels.pop()
    d.notifications.extend(protocol.release_link(topology, states, d.path[-1], dead, ch, now))
    return True


def _apply(d: Discovery, topology, states, nxt, res, now) -> bool:
    """Fold one step result into the discovery; True if the search should keep going."""
    d.messages.append(_request(d, nxt, res))
    if res.kind is StepKind.PROCEED:
        d.path.append(nxt)
        d.channels.append(res.channel)
        return True
    if res.kind is StepKind.REROUTE:
        d.excluded.add(nxt)
        return True
    d.status = DiscoveryStatus.WAITING
    d.waiting_on = nxt
    d.waiting_channel = res.requested
    return False


def _advance(d: Discovery, topology: Topology, states, now: float):
    while True:
        frontier = d.frontier
        if frontier == d.dst:
            d.status = DiscoveryStatus.ESTABLISHED
            d.waiting_on = None
            d.route = EstablishedRoute(d.flow_id, list(d.path), list(d.channels), now)
            d.messages.append(RouteReply(d.dst, tuple(d.path), tuple(d.channels), d.channels[-1], d.t_pre))
            return
        blocked = d.excluded | set(d.path[:-1])
        dist = topology.hop_distances(d.dst, blocked=blocked)
        candidates = sorted(
            (v for v in topology.neighbors(frontier) if v in dist and v not in blocked),
            key=lambda v: (dist[v], v),
        )
        if not candidates:
            if not _backtrack(d, topology, states, now):
                d.status = DiscoveryStatus.NO_CHANNEL
                return
            continue
        nxt = candidates[0]
        res = protocol.step_distribution(topology, states, frontier, nxt, d.t_pre, now,
                                         literal_tpre=d.literal_tpre)
        if res.kind is StepKind.REROUTE and res.response is None:
            # the frontier itself has no free channel or interface left
            d.messages.append(_request(d, nxt, res))
            if not _backtrack(d, topology, states, now):
                d.status = DiscoveryStatus.NO_CHANNEL
                return
            continue
        if not _apply(d, topology, states, nxt, res, now):
            return


def resume_waiting(d: Discovery, topology: Topology, states, notify: WaitNotify, now: float) -> bool:
    """Continue a waiting discovery after its waited node freed a channel.

    Returns False (and changes nothing) for a stale or misaddressed notify.
    """
    if (d.status is not DiscoveryStatus.WAITING or notify.waited_node != d.waiting_on
            or notify.waiter != d.frontier):
        return False
    nxt = d.waiting_on
    d.status = None
    d.waiting_on = None
    res = protocol.step_distribution(topology, states, d.frontier, nxt, d.t_pre, now,
                                     literal_tpre=d.literal_tpre)
    if res.kind is StepKind.REROUTE and res.response is None:
        d.messages.append(_request(d, nxt, res))
        if not _backtrack(d, topology, states, now):
            d.status = DiscoveryStatus.NO_CHANNEL
            return True
    elif not _apply(d, topology, states, nxt, res, now):
        return True
    _advance(d, topology, states, now)
    return True


def abort(d: Discovery, topology: Topology, states, now: float) -> list[WaitNotify]:
    """Give up a discovery: leave the waiting queue and release every partial hop."""
    if d.status is DiscoveryStatus.WAITING and d.waiting_on is not None:
        states[d.waiting_on].remove_waiter(d.frontier)
    while len(d.path) > 1:
        b = d.path.pop()
        ch = d.channels.pop()
        d.notifications.extend(protocol.release_link(topology, states, d.path[-1], b, ch, now))
    d.status = DiscoveryStatus.NO_CHANNEL
    d.waiting_on = None
    return d.drain()[1]


def teardown(route: EstablishedRoute, topology: Topology, states, now: float) -> list[WaitNotify]:
    """Release every hop of ``route``; a second call is a no-op."""
    if not route.active:
        return []
    route.active = False
    notes = []
    for a, b, ch in route.hops:
        notes.extend(protocol.release_link(topology, states, a, b, ch, now))
    return notes
