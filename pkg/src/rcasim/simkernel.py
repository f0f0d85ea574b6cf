"""Deterministic discrete-event engine: CBR traffic, collisions and metrics.

Random streams (all numpy ``default_rng``):

1. placement, seeded with ``topology_seed`` (defaults to the run seed);
2. traffic, seeded with ``(seed, 1)`` and consumed in this order: flow
   endpoints, flow start offsets, then per-packet jitter flow by flow;
3. carrier-sense backoff, seeded with ``(seed, 2)``, drawn in event order.

Traffic is drawn before the simulation starts, so every algorithm sees the
same topology and the same packet schedule for a given seed.
"""

from __future__ import annotations

import enum
import hashlib
import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import baselines, protocol, routing
from .chanstate import estimate_tpre
from .routing import DiscoveryStatus
from .scenario import ConfigError, Scenario
from .topology import Topology


class EventKind(enum.Enum):
    FLOW_START = "FLOW_START"
    FLOW_STOP = "FLOW_STOP"
    PACKET_SEND = "PACKET_SEND"
    PACKET_ARRIVE = "PACKET_ARRIVE"
    CHANNEL_EXPIRE = "CHANNEL_EXPIRE"
    NOTIFY = "NOTIFY"
    DISCOVERY_TIMEOUT = "DISCOVERY_TIMEOUT"
    ROUTE_RETRY = "ROUTE_RETRY"
    TX_ATTEMPT = "TX_ATTEMPT"


# carrier-sense backoff: uniform over CW_SLOTS slots after the sensed transmission ends
SLOT_TIME = 20e-6
CW_SLOTS = 32


@dataclass(order=True)
class Event:
    time: float
    sequence: int
    kind: EventKind = field(compare=False)
    payload: object = field(compare=False, default=None)


class InvariantViolation(AssertionError):
    """The simulator caught itself breaking one of its own invariants."""


@dataclass(frozen=True)
class Flow:
    id: int
    src: int
    dst: int
    rate: float
    packet_size: int = 512
    start: float = 0.0
    stop: float = 50.0

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValueError("flow start must precede stop")
        if self.rate <= 0:
            raise ValueError("flow rate must be positive")
        if self.src == self.dst:
            raise ValueError("flow endpoints must differ")

    @property
    def slots(self) -> int:
        """Number of CBR packets between start and stop."""
        return math.ceil((self.stop - self.start) * self.rate - 1e-9)

    def remaining(self, now: float) -> int:
        return max(0, math.ceil((self.stop - max(now, self.start)) * self.rate - 1e-9))

    def packet_times(self, rng=None, jitter: float = 0.0) -> list[float]:
        """CBR send times, each delayed by up to ``jitter`` of an interval."""
        n = self.slots
        base = self.start + np.arange(n) / self.rate
        if rng is not None and jitter > 0 and n:
            shifted = base + rng.uniform(0.0, jitter, size=n) / self.rate
            base = np.where(shifted < self.stop, shifted, base)
        return [float(t) for t in base]


class Outcome(enum.Enum):
    DELIVERED = "DELIVERED"
    COLLIDED = "COLLIDED"


@dataclass(eq=False)
class Transmission:
    tx: int
    rx: int
    channel: int
    start: float
    end: float
    flow: int = -1
    collided: bool = False
    packet: object = None


def resolve_transmission(transmissions, topology: Topology) -> list[Outcome]:
    """Outcome per transmission: COLLIDED iff it overlaps an interfering one in time.

    Intervals are half-open, so back-to-back transmissions do not overlap.
    Both parties of an interfering overlap collide.
    """
    order = sorted(range(len(transmissions)), key=lambda i: (transmissions[i].start, i))
    hit = [False] * len(transmissions)
    active: dict[int, list[int]] = {}
    for i in order:
        t = transmissions[i]
        live = [j for j in active.get(t.channel, []) if transmissions[j].end > t.start]
        for j in live:
            o = transmissions[j]
            if topology.interferes(t.tx, t.rx, t.channel, o.tx, o.rx, o.channel):
                hit[i] = hit[j] = True
        live.append(i)
        active[t.channel] = live
    return [Outcome.COLLIDED if h else Outcome.DELIVERED for h in hit]


@dataclass
class FlowStats:
    flow_id: int
    src: int
    dst: int
    packet_size: int
    start: float
    stop: float
    sent: int = 0
    delivered: int = 0
    collided: int = 0
    dropped: int = 0
    in_flight: int = 0

    @property
    def delivery_rate(self) -> float:
        return self.delivered / self.sent if self.sent else 0.0

    @property
    def throughput_kbps(self) -> float:
        return self.delivered * self.packet_size * 8 / (self.stop - self.start) / 1000


@dataclass
class Metrics:
    flows: list[FlowStats] = field(default_factory=list)

    def _mean(self, attr):
        return sum(getattr(f, attr) for f in self.flows) / len(self.flows) if self.flows else 0.0

    @property
    def delivery_rate(self) -> float:
        return self._mean("delivery_rate")

    @property
    def throughput_kbps(self) -> float:
        return self._mean("throughput_kbps")

    def total(self, attr) -> int:
        return sum(getattr(f, attr) for f in self.flows)

    @property
    def sent(self) -> int:
        return self.total("sent")

    @property
    def delivered(self) -> int:
        return self.total("delivered")

    @property
    def collided(self) -> int:
        return self.total("collided")

    @property
    def dropped(self) -> int:
        return self.total("dropped")

    def digest(self) -> str:
        rows = [(f.flow_id, f.src, f.dst, f.sent, f.delivered, f.collided, f.dropped, f.in_flight)
                for f in self.flows]
        return hashlib.sha256(repr(rows).encode()).hexdigest()


def collect(stats) -> Metrics:
    """Freeze per-flow accumulators into Metrics, checking the count invariants."""
    flows = []
    for s in stats:
        if not s.delivered <= s.sent:
            raise InvariantViolation(f"flow {s.flow_id}: delivered {s.delivered} > sent {s.sent}")
        if s.delivered + s.collided + s.dropped + s.in_flight != s.sent:
            raise InvariantViolation(f"flow {s.flow_id}: packet conservation broken")
        flows.append(FlowStats(**{f.name: getattr(s, f.name) for f in s.__dataclass_fields__.values()}))
    return Metrics(flows)


def make_flows(scenario: Scenario, topology: Topology, rng) -> list[Flow]:
    if scenario.flow_endpoint_policy == "fixed_list":
        pairs = list(scenario.flow_list)
    else:
        hops = [topology.hop_distances(s) for s in range(topology.n)]
        candidates = [(s, d) for s in range(topology.n) for d in range(topology.n)
                      if s != d and hops[s].get(d, -1) >= scenario.min_hops]
        if len(candidates) < scenario.flows:
            raise ConfigError(f"only {len(candidates)} endpoint pairs are >= {scenario.min_hops} hops apart; "
                              f"{scenario.flows} flows requested")
        picks = rng.choice(len(candidates), size=scenario.flows, replace=False) if scenario.flows else []
        pairs = [candidates[int(i)] for i in picks]
    starts = rng.uniform(0.0, scenario.start_window, size=len(pairs)) if scenario.start_window > 0 \
        else np.zeros(len(pairs))
    return [Flow(i, s, d, scenario.rate, scenario.packet_size, float(st), scenario.duration)
            for i, ((s, d), st) in enumerate(zip(pairs, starts))]


@dataclass
class _FlowState:
    flow: Flow
    stats: FlowStats
    times: list[float]
    route: routing.EstablishedRoute | None = None
    discovery: routing.Discovery | None = None
    buffer: deque = field(default_factory=deque)
    active: bool = False
    wait_token: int = 0


class Simulation:
    """One run of one algorithm over a fixed topology and packet schedule."""

    def __init__(self, topology: Topology, flows, algorithm: str = "rca", *, horizon: float = 50.0,
                 packet_times=None, link_rate: float = 2e6, buffer_size: int = 50,
                 queue_cap: int = 10, wait_timeout: float = 2.0, retry_interval: float = 1.0,
                 literal_tpre: bool = False, static_seed: int = 0, trace: bool = True,
                 control_latency: float | None = None, carrier_sense: bool = True, mac_rng=None):
        if algorithm not in ("rca", "static", "single"):
            raise ConfigError(f"unknown algorithm {algorithm!r}")
        self.topology = topology
        self.algorithm = algorithm
        self.horizon = horizon
        self.link_rate = link_rate
        self.buffer_size = buffer_size
        self.queue_cap = queue_cap
        self.wait_timeout = wait_timeout
        self.retry_interval = retry_interval
        self.literal_tpre = literal_tpre
        # control messages are reliable and take one data-packet airtime
        self.control_latency = 512 * 8 / link_rate if control_latency is None else control_latency
        self.states = protocol.new_states(topology, queue_cap)
        self.assignment = baselines.static_assign(topology, seed=static_seed) if algorithm == "static" else None
        self._assignment_digest = self.assignment.digest() if self.assignment else None
        self.flows: dict[int, _FlowState] = {}
        for i, f in enumerate(flows):
            times = packet_times[i] if packet_times is not None else f.packet_times()
            self.flows[f.id] = _FlowState(f, FlowStats(f.id, f.src, f.dst, f.packet_size, f.start, f.stop), times)
        self._events: list[Event] = []
        self._seq = itertools.count()
        self.now = 0.0
        self.ifaces: dict[tuple[int, int], deque] = {}
        self.busy: set[tuple[int, int]] = set()
        self.ongoing: dict[int, list[Transmission]] = {}
        self.waiting: dict[tuple[int, int], int] = {}  # (waited, waiter) -> flow id
        self._request_ids: dict[int, itertools.count] = {}
        self.carrier_sense = carrier_sense
        self.mac_rng = mac_rng if mac_rng is not None else np.random.default_rng(0)
        self.tracing = trace
        self.trace: list[tuple] = []

    # -- bookkeeping -------------------------------------------------------
    def schedule(self, time: float, kind: EventKind, payload=None):
        if time < self.now:
            raise InvariantViolation(f"{kind.value} scheduled at {time} before now={self.now}")
        heapq.heappush(self._events, Event(time, next(self._seq), kind, payload))

    def log(self, kind: str, nodes="", channel="", flow="", outcome=""):
        if self.tracing:
            self.trace.append((self.now, kind, str(nodes), str(channel), str(flow), str(outcome)))

    def airtime(self, flow_id: int) -> float:
        return self.flows[flow_id].flow.packet_size * 8 / self.link_rate

    def trace_lines(self) -> list[str]:
        t = self.topology
        head = [
            "# rcasim trace v1",
            f"# algorithm {self.algorithm}",
            f"# positions {';'.join(f'{x!r},{y!r}' for x, y in t.positions.tolist())}",
            f"# range {t.reception_range!r}",
            f"# channels {t.channels}",
            f"# interfaces {t.interfaces}",
            f"# interference {t.interference_model.value}",
            f"# queue_cap {self.queue_cap}",
            f"# link_rate {self.link_rate!r}",
            "# fields: time\tsequence\tkind\tnodes\tchannel\tflow\toutcome",
        ]
        head += [f"# flow {fs.flow.id} {fs.flow.src}>{fs.flow.dst} size={fs.flow.packet_size}"
                 for fs in self.flows.values()]
        body = [f"{rec[0]:.9f}\t{i}\t" + "\t".join(rec[1:]) for i, rec in enumerate(self.trace)]
        return head + body

    # -- main loop ---------------------------------------------------------
    def run(self) -> Metrics:
        for fs in self.flows.values():
            self.schedule(fs.flow.start, EventKind.FLOW_START, fs.flow.id)
            for seq, t in enumerate(fs.times):
                self.schedule(t, EventKind.PACKET_SEND, (fs.flow.id, seq))
            self.schedule(fs.flow.stop, EventKind.FLOW_STOP, fs.flow.id)
        handlers = {
            EventKind.FLOW_START: self._flow_start,
            EventKind.FLOW_STOP: self._flow_stop,
            EventKind.PACKET_SEND: self._packet_send,
            EventKind.PACKET_ARRIVE: self._packet_arrive,
            EventKind.CHANNEL_EXPIRE: self._channel_expire,
            EventKind.NOTIFY: self._notify,
            EventKind.DISCOVERY_TIMEOUT: self._discovery_timeout,
            EventKind.ROUTE_RETRY: self._route_retry,
            EventKind.TX_ATTEMPT: self._tx_attempt,
        }
        while self._events and self._events[0].time <= self.horizon:
            ev = heapq.heappop(self._events)
            self.now = ev.time
            handlers[ev.kind](ev.payload)
        pending = sorted((o for live in self.ongoing.values() for o in live if o.end > self.now),
                         key=lambda o: (o.start, o.tx, o.channel))
        for o in pending:
            # cut off by the horizon; logged so replays see every transmission that could collide
            self.log("TX", f"{o.tx}>{o.rx}", o.channel, o.flow, f"IN_FLIGHT start={o.start!r}")
        if self.assignment is not None and self.assignment.digest() != self._assignment_digest:
            raise InvariantViolation("static assignment changed during the run")
        for fs in self.flows.values():
            s = fs.stats
            s.in_flight = s.sent - s.delivered - s.collided - s.dropped
            if s.in_flight < 0:
                raise InvariantViolation(f"flow {s.flow_id}: negative in-flight count")
        metrics = collect(fs.stats for fs in self.flows.values())
        self.log("METRICS", "", "", "", f"sent={metrics.sent} delivered={metrics.delivered} "
                 f"collided={metrics.collided} dropped={metrics.dropped}")
        return metrics

    # -- traffic -----------------------------------------------------------
    def _packet_send(self, payload):
        fid, seq = payload
        fs = self.flows[fid]
        fs.stats.sent += 1
        packet = [fid, seq, 0, fs.route]
        if fs.route is not None and fs.route.active:
            self.log("GEN", fs.flow.src, "", fid, "sent")
            self._enqueue(packet)
        elif len(fs.buffer) < self.buffer_size:
            self.log("GEN", fs.flow.src, "", fid, "buffered")
            fs.buffer.append(packet)
        else:
            self.log("GEN", fs.flow.src, "", fid, "dropped")
            fs.stats.dropped += 1

    def _enqueue(self, packet):
        fid, _, hop, route = packet
        node, ch = route.path[hop], route.channels[hop]
        key = (node, ch)
        q = self.ifaces.setdefault(key, deque())
        if len(q) >= self.buffer_size:
            self.flows[fid].stats.dropped += 1
            self.log("DROP", node, ch, fid, "queue_full")
            return
        q.append(packet)
        if key not in self.busy:
            self._attempt(key)

    def _attempt(self, key):
        """Send the head of an idle interface's queue, deferring while the channel is sensed busy."""
        q = self.ifaces[key]
        if not q:
            return
        if self.carrier_sense:
            tx, ch = key
            topo = self.topology
            sensed = [o.end for o in self.ongoing.get(ch, ()) if o.end > self.now and topo.within(o.tx, tx)]
            if sensed:
                self.busy.add(key)
                backoff = int(self.mac_rng.integers(CW_SLOTS)) * SLOT_TIME
                self.schedule(max(sensed) + backoff, EventKind.TX_ATTEMPT, key)
                return
        self._start_tx(key, q.popleft())

    def _tx_attempt(self, key):
        self.busy.discard(key)
        self._attempt(key)

    def _start_tx(self, key, packet):
        fid, _, hop, route = packet
        tx, ch = key
        rx = route.path[hop + 1]
        t = Transmission(tx, rx, ch, self.now, self.now + self.airtime(fid), fid, packet=packet)
        topo = self.topology
        live = [o for o in self.ongoing.get(ch, ()) if o.end > self.now]
        for o in live:
            if topo.interferes(tx, rx, ch, o.tx, o.rx, o.channel):
                o.collided = t.collided = True
        live.append(t)
        self.ongoing[ch] = live
        self.busy.add(key)
        self.schedule(t.end, EventKind.PACKET_ARRIVE, t)

    def _packet_arrive(self, t: Transmission):
        key = (t.tx, t.channel)
        self.busy.discard(key)
        self._attempt(key)
        fid, seq, hop, route = t.packet
        stats = self.flows[fid].stats
        outcome = "COLLIDED" if t.collided else "DELIVERED"
        self.log("TX", f"{t.tx}>{t.rx}", t.channel, fid, f"{outcome} start={t.start!r}")
        if t.collided:
            stats.collided += 1
        elif t.rx == route.path[-1]:
            stats.delivered += 1
            self.log("RECV", t.rx, "", fid, seq)
        elif route.active:
            self._enqueue([fid, seq, hop + 1, route])
        else:
            stats.dropped += 1
            self.log("DROP", t.rx, "", fid, "route_closed")

    def _install(self, fs: _FlowState, route: routing.EstablishedRoute):
        fs.route = route
        fs.discovery = None
        self.log("ROUTE", "-".join(map(str, route.path)), ",".join(map(str, route.channels)),
                 fs.flow.id, "ESTABLISHED")
        while fs.buffer:
            packet = fs.buffer.popleft()
            packet[3] = route
            self._enqueue(packet)

    # -- flows and routing -------------------------------------------------
    def _flow_start(self, fid):
        fs = self.flows[fid]
        fs.active = True
        self.log("FLOW_START", f"{fs.flow.src}>{fs.flow.dst}", "", fid)
        self._establish(fs)

    def _establish(self, fs: _FlowState):
        f = fs.flow
        if self.algorithm == "single":
            route = baselines.single_radio_route(self.topology, f.src, f.dst, f.id, self.now)
        elif self.algorithm == "static":
            route = baselines.static_route(self.assignment, self.topology, f.src, f.dst, f.id, self.now)
        else:
            t_pre = estimate_tpre(f.remaining(self.now), f.packet_size, f.rate, self.now)
            rid = routing.next_request_id(f.src, self._request_ids)
            d = routing.discover_route(self.topology, self.states, f.src, f.dst, t_pre=t_pre, now=self.now,
                                       flow_id=f.id, request_id=rid, literal_tpre=self.literal_tpre)
            fs.discovery = d
            self._after_discovery(fs)
            return
        if route is None:
            self.log("DISCOVERY", f"{f.src}>{f.dst}", "", f.id, "NO_PATH")
        else:
            self._install(fs, route)

    def _after_discovery(self, fs: _FlowState):
        d = fs.discovery
        msgs, notes = d.drain()
        for m in msgs:
            if isinstance(m, routing.RouteRequest):
                kind = m.response_info.kind.name if m.response_info else "NO_CHANNEL_AT_SENDER"
                if m.response_info and m.response_info.kind is protocol.ResponseKind.WAIT:
                    kind += f" q={len(self.states[m.hop_list[-1]].waiting_queue)}"
                self.log("RREQ", "-".join(map(str, m.hop_list)), m.c_pre or "", d.flow_id, kind)
            else:
                self.log("RREP", "-".join(map(str, m.path)), ",".join(map(str, m.channels)), d.flow_id,
                         f"t_pre={m.t_pre:.6f}")
        self._dispatch(notes)
        if d.status is DiscoveryStatus.ESTABLISHED:
            self._validate_route(d.route)
            self._install(fs, d.route)
        elif d.status is DiscoveryStatus.WAITING:
            self.waiting[(d.waiting_on, d.frontier)] = d.flow_id
            fs.wait_token += 1
            self.schedule(self.now + self.wait_timeout, EventKind.DISCOVERY_TIMEOUT, (d.flow_id, fs.wait_token))
            waited = self.states[d.waiting_on]
            exp = waited.expiry(d.waiting_channel, self.now)
            if exp is not None and exp <= self.horizon:
                self.schedule(exp, EventKind.CHANNEL_EXPIRE, (d.waiting_on, d.waiting_channel))
            self.log("DISCOVERY", f"{d.frontier}>{d.waiting_on}", "", d.flow_id, "WAITING")
        else:
            self.log("DISCOVERY", f"{d.src}>{d.dst}", "", d.flow_id, d.status.name)
            fs.discovery = None
            if self.now + self.retry_interval < fs.flow.stop:
                self.schedule(self.now + self.retry_interval, EventKind.ROUTE_RETRY, d.flow_id)

    def _dispatch(self, notes):
        for note in notes:
            self.schedule(self.now + self.control_latency, EventKind.NOTIFY, note)

    def _notify(self, note: protocol.WaitNotify):
        fid = self.waiting.pop((note.waited_node, note.waiter), None)
        fs = self.flows.get(fid) if fid is not None else None
        if fs is None or fs.discovery is None:
            self.log("NOTIFY", f"{note.waited_node}>{note.waiter}", note.freed_channel, "", "stale")
            # pass the wake-up on so the channel is not lost to an aborted waiter
            st = self.states[note.waited_node]
            if not st.is_occupied(note.freed_channel, self.now):
                nxt = protocol.on_channel_freed(st, note.waited_node, note.freed_channel, self.now)
                if nxt is not None:
                    self._dispatch([nxt])
            return
        self.log("NOTIFY", f"{note.waited_node}>{note.waiter}", note.freed_channel, fid, "resume")
        if routing.resume_waiting(fs.discovery, self.topology, self.states, note, self.now):
            self._after_discovery(fs)

    def _discovery_timeout(self, payload):
        fid, token = payload
        fs = self.flows[fid]
        d = fs.discovery
        if d is None or d.status is not DiscoveryStatus.WAITING or token != fs.wait_token:
            return
        self.waiting.pop((d.waiting_on, d.frontier), None)
        self.log("TIMEOUT", f"{d.frontier}>{d.waiting_on}", "", fid, "abort")
        self._dispatch(routing.abort(d, self.topology, self.states, self.now))
        self._after_discovery(fs)

    def _channel_expire(self, payload):
        node, ch = payload
        st = self.states[node]
        st.purge(self.now)
        if st.waiting_queue and not st.is_occupied(ch, self.now):
            self.log("EXPIRE", node, ch, "", "freed")
            note = protocol.on_channel_freed(st, node, ch, self.now)
            if note is not None:
                self._dispatch([note])

    def _route_retry(self, fid):
        fs = self.flows[fid]
        if fs.active and fs.route is None and fs.discovery is None:
            self.log("RETRY", f"{fs.flow.src}>{fs.flow.dst}", "", fid)
            self._establish(fs)

    def _flow_stop(self, fid):
        fs = self.flows[fid]
        fs.active = False
        self.log("FLOW_STOP", f"{fs.flow.src}>{fs.flow.dst}", "", fid)
        if self.algorithm == "rca":
            if fs.route is not None:
                self._dispatch(routing.teardown(fs.route, self.topology, self.states, self.now))
            elif fs.discovery is not None:
                d = fs.discovery
                self.waiting.pop((d.waiting_on, d.frontier), None)
                self._dispatch(routing.abort(d, self.topology, self.states, self.now))
                fs.discovery = None
        elif fs.route is not None:
            fs.route.active = False
        if fs.buffer:
            self.log("DROP", fs.flow.src, "", fid, f"flow_stopped n={len(fs.buffer)}")
        fs.stats.dropped += len(fs.buffer)
        fs.buffer.clear()

    def active_hops(self):
        """(flow, tx, rx, channel) for every hop currently holding an R-CA channel."""
        for fs in self.flows.values():
            if fs.route is not None and fs.route.active:
                yield from ((fs.flow.id, a, b, ch) for a, b, ch in fs.route.hops)
            elif fs.discovery is not None:
                d = fs.discovery
                yield from ((fs.flow.id, a, b, ch) for a, b, ch in zip(d.path, d.path[1:], d.channels))

    def _validate_route(self, route: routing.EstablishedRoute):
        hops = route.hops
        others = [h for h in self.active_hops() if h[0] != route.flow_id]
        topo = self.topology
        for i, (a, b, ch) in enumerate(hops):
            for c, d, ch2 in hops[i + 1:]:
                if topo.interferes(a, b, ch, c, d, ch2):
                    raise InvariantViolation(f"route {route.path} interferes with itself")
            for _, c, d, ch2 in others:
                if (c, d, ch2) == (a, b, ch):
                    continue  # the same link shared by two routes is one interface, not interference
                if topo.interferes(a, b, ch, c, d, ch2):
                    raise InvariantViolation(f"route {route.path} on {route.channels} interferes with active hop {c}-{d}")


def build(scenario: Scenario, seed: int | None = None, trace: bool = True) -> Simulation:
    scenario = scenario.validate()
    seed = scenario.seed if seed is None else seed
    topology = scenario.build_topology(seed)
    rng = np.random.default_rng((seed, 1))
    flows = make_flows(scenario, topology, rng)
    times = [f.packet_times(rng, scenario.jitter) for f in flows]
    return Simulation(topology, flows, scenario.algorithm, horizon=scenario.duration, packet_times=times,
                      link_rate=scenario.link_rate, buffer_size=scenario.buffer_size,
                      queue_cap=scenario.queue_cap, wait_timeout=scenario.wait_timeout,
                      retry_interval=scenario.retry_interval, literal_tpre=scenario.literal_tpre,
                      static_seed=seed, trace=trace, control_latency=scenario.airtime,
                      carrier_sense=scenario.carrier_sense, mac_rng=np.random.default_rng((seed, 2)))


def run(scenario: Scenario, seed: int | None = None, trace: bool = True) -> tuple[Metrics, list[str]]:
    """Simulate ``scenario`` once; equal (scenario, seed) give identical output."""
    if not isinstance(scenario, Scenario):
        raise ConfigError("run() needs a Scenario")
    sim = build(scenario, seed, trace)
    metrics = sim.run()
    return metrics, (sim.trace_lines() if trace else [])
