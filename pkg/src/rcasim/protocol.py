"""R-CA message handlers: channel distribution and response management.

Every handler mutates only the ChannelInfo of the node it runs on and
returns the messages that node emits. Waiting is represented as queue state,
never as a suspended call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .chanstate import ChannelInfo, OccupancyReason
from .topology import Topology

SELF = OccupancyReason.SELF_TX
BLOCK = OccupancyReason.NEIGHBOR_BLOCK


class ResponseKind(enum.Enum):
    AVAILABLE = "available"
    ROUTE_ELSEWHERE = "route_elsewhere"
    WAIT = "wait"


@dataclass(frozen=True)
class Response:
    kind: ResponseKind
    granted_channel: int | None
    t_pre_echo: float

    def __post_init__(self):
        if (self.granted_channel is not None) != (self.kind is ResponseKind.AVAILABLE):
            raise ValueError("granted_channel must be set exactly for AVAILABLE responses")


@dataclass(frozen=True)
class ChannelBroadcast:
    sender: int
    channel: int
    t_pre: float
    released: bool = False  # True announces that the sender gave the channel up


@dataclass(frozen=True)
class WaitNotify:
    waited_node: int
    waiter: int
    freed_channel: int


class StepKind(enum.Enum):
    PROCEED = "proceed"
    REROUTE = "reroute"
    WAITING = "waiting"


@dataclass(frozen=True)
class StepResult:
    kind: StepKind
    channel: int | None = None
    response: Response | None = None
    requested: int | None = None


def select_channel(own: ChannelInfo, now: float, interfaces_in_use: int, max_interfaces: int,
                   prefer=None) -> int | None:
    """Lowest free channel, or None when nothing is free or every interface is busy.

    If ``prefer`` is given, the lowest free channel inside it wins over the
    plain lowest one.
    """
    if interfaces_in_use >= max_interfaces:
        return None
    free = own.available_channels(now)
    if not free:
        return None
    if prefer:
        for ch in free:
            if ch in prefer:
                return ch
    return free[0]


def handle_request(own: ChannelInfo, requested_channel: int, incoming_t_pre: float, requester: int,
                   now: float, *, max_interfaces: int | None = None,
                   literal_tpre: bool = False) -> Response:
    """Answer a neighbour that wants ``requested_channel`` towards this node."""
    own._check_channel(requested_channel)
    has_interface = max_interfaces is None or len(own.self_grants(now)) < max_interfaces
    if has_interface and not own.is_occupied(requested_channel, now):
        own.occupy(requested_channel, SELF, incoming_t_pre)
        own.c_pre = requested_channel
        own.t_pre = max(own.t_pre, incoming_t_pre)
        return Response(ResponseKind.AVAILABLE, requested_channel, own.t_pre)
    if incoming_t_pre < own.t_pre:
        return Response(ResponseKind.ROUTE_ELSEWHERE, None, own.t_pre)
    if not own.enqueue_waiter(requester):
        # queue full (or requester already queued): refuse and let it route elsewhere
        return Response(ResponseKind.ROUTE_ELSEWHERE, None, own.t_pre)
    if literal_tpre:
        own.t_pre = incoming_t_pre + incoming_t_pre
    else:
        own.t_pre = own.t_pre + max(0.0, incoming_t_pre - now)
    return Response(ResponseKind.WAIT, None, own.t_pre)


def on_broadcast(own: ChannelInfo, msg: ChannelBroadcast, now: float) -> bool:
    """Apply a neighbour's channel announcement. Returns True if it freed the channel here.

    A block also raises this node's t_pre to the announced completion time.
    """
    if msg.released:
        freed = own.release(msg.channel, BLOCK, source=msg.sender, now=now)
        own.refresh_tpre(now)
        return freed
    own.occupy(msg.channel, BLOCK, msg.t_pre, source=msg.sender)
    # the blocked channel is expected back when the announcing link completes
    own.t_pre = max(own.t_pre, msg.t_pre)
    return False


def on_channel_freed(own: ChannelInfo, node: int, freed: int, now: float) -> WaitNotify | None:
    """Hand a just-freed channel to the head of the waiting queue."""
    waiter = own.dequeue_waiter()
    if waiter is None:
        return None
    return WaitNotify(waited_node=node, waiter=waiter, freed_channel=freed)


def _broadcast(topology: Topology, states, msg: ChannelBroadcast, skip, now) -> list[int]:
    freed_at = []
    for x in sorted(topology.neighbors(msg.sender)):
        if x in skip:
            continue
        if on_broadcast(states[x], msg, now):
            freed_at.append(x)
    return freed_at


def step_distribution(topology: Topology, states, node: int, next_hop: int, t_pre: float,
                      now: float, *, literal_tpre: bool = False) -> StepResult:
    """One hop of channel distribution from ``node`` towards ``next_hop``.

    The sender proposes its lowest free channel, preferring one the receiver
    also reports free (the receiver's expected channel rides on the reply).
    On a grant both endpoints occupy the channel and announce it to their
    neighbourhoods.
    """
    if next_hop not in topology.neighbors(node):
        raise ValueError(f"node {next_hop} is not a neighbour of {node}")
    k = topology.interfaces
    sender, receiver = states[node], states[next_hop]
    reuse = _live_link(sender, receiver, next_hop, now)
    if reuse is not None:
        # ride the link this node already runs towards next_hop; nothing new is occupied
        sender.link_users[(next_hop, reuse)] += 1
        occupy_link(topology, states, node, next_hop, reuse, t_pre, now, opened=False)
        resp = Response(ResponseKind.AVAILABLE, reuse, receiver.t_pre)
        return StepResult(StepKind.PROCEED, reuse, resp, reuse)
    if len(receiver.self_grants(now)) < k:
        receiver_free = set(receiver.available_channels(now))
    else:
        receiver_free = set()
    ch = select_channel(sender, now, len(sender.self_grants(now)), k, prefer=receiver_free)
    if ch is None:
        return StepResult(StepKind.REROUTE)
    sender.c_pre = ch
    resp = handle_request(receiver, ch, t_pre, node, now, max_interfaces=k, literal_tpre=literal_tpre)
    if resp.kind is ResponseKind.AVAILABLE:
        occupy_link(topology, states, node, next_hop, ch, t_pre, now)
        return StepResult(StepKind.PROCEED, ch, resp, ch)
    if resp.kind is ResponseKind.ROUTE_ELSEWHERE:
        return StepResult(StepKind.REROUTE, None, resp, ch)
    return StepResult(StepKind.WAITING, None, resp, ch)


def _live_link(sender: ChannelInfo, receiver: ChannelInfo, peer: int, now: float) -> int | None:
    for (p, ch), users in sender.link_users.items():
        if p == peer and users > 0 and ch in sender.self_grants(now) and ch in receiver.self_grants(now):
            return ch
    return None


def occupy_link(topology: Topology, states, a: int, b: int, ch: int, t_pre: float, now: float = 0.0,
                opened: bool = True):
    """Install link a -> b on ``ch`` at both ends and announce it to both neighbourhoods.

    ``opened=False`` only refreshes expiries of a link that is already counted.
    """
    if opened:
        key = (b, ch)
        states[a].link_users[key] = states[a].link_users.get(key, 0) + 1
    for end in (a, b):
        states[end].occupy(ch, SELF, t_pre)
        states[end].c_pre = ch
        states[end].t_pre = max(states[end].t_pre, t_pre)
    for end in (a, b):
        _broadcast(topology, states, ChannelBroadcast(end, ch, t_pre), {a, b}, now)


def release_link(topology: Topology, states, a: int, b: int, ch: int, now: float) -> list[WaitNotify]:
    """Drop one user of link a -> b on ``ch``.

    When the last user leaves, both ends release the channel, announce that to
    their neighbourhoods and wake the first waiter wherever it frees.
    """
    users = states[a].link_users.get((b, ch), 1) - 1
    if users > 0:
        states[a].link_users[(b, ch)] = users
        return []
    states[a].link_users.pop((b, ch), None)
    notes = []
    for end in (a, b):
        st = states[end]
        freed = st.release(ch, SELF, now=now)
        st.refresh_tpre(now)
        if freed:
            note = on_channel_freed(st, end, ch, now)
            if note is not None:
                notes.append(note)
    for end in (a, b):
        for x in _broadcast(topology, states, ChannelBroadcast(end, ch, now, released=True), {a, b}, now):
            note = on_channel_freed(states[x], x, ch, now)
            if note is not None:
                notes.append(note)
    return notes


def new_states(topology: Topology, queue_capacity: int = 10) -> list[ChannelInfo]:
    return [ChannelInfo(topology.channels, queue_capacity) for _ in range(topology.n)]
