"""Generated-case checks of the protocol and simulator invariants."""

import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from rcasim import protocol, routing
from rcasim.chanstate import ChannelInfo, OccupancyReason
from rcasim.protocol import StepKind
from rcasim.routing import DiscoveryStatus
from rcasim.scenario import Scenario
from rcasim.simkernel import run
from rcasim.topology import from_positions

from conftest import RANGE, SPACING, grid3, in_range, trca_conflict

MANY = settings(max_examples=1000, deadline=None)
SELF = OccupancyReason.SELF_TX
BLOCK = OccupancyReason.NEIGHBOR_BLOCK


# -- waiting queue -----------------------------------------------------------

requests = st.lists(st.tuples(st.integers(1, 3), st.floats(0.0, 100.0), st.integers(0, 30), st.booleans()),
                    max_size=60)


@MANY
@given(requests)
def test_queue_never_exceeds_capacity(ops):
    own = ChannelInfo(3)
    for ch in (1, 2, 3):
        own.occupy(ch, BLOCK, 1e9, source=99)
    own.t_pre = 50.0
    for ch, t_in, who, pop in ops:
        if pop:
            own.dequeue_waiter()
        else:
            protocol.handle_request(own, ch, t_in, requester=who, now=0.0)
        assert len(own.waiting_queue) <= 10
        assert len(set(own.waiting_queue)) == len(own.waiting_queue)
        assert own.t_pre >= 0


class ListQueue:
    """Reference model: a bounded list without duplicates."""

    def __init__(self, cap=10):
        self.items, self.cap = [], cap

    def enqueue(self, x):
        if x in self.items or len(self.items) >= self.cap:
            return False
        self.items.append(x)
        return True

    def dequeue(self):
        return self.items.pop(0) if self.items else None

    def remove(self, x):
        if x in self.items:
            self.items.remove(x)
            return True
        return False


def apply_both(real, model, op, x):
    if op == "enq":
        assert real.enqueue_waiter(x) == model.enqueue(x)
    elif op == "deq":
        assert real.dequeue_waiter() == model.dequeue()
    else:
        assert real.remove_waiter(x) == model.remove(x)
    assert list(real.waiting_queue) == model.items


def test_fifo_bisimulation_long_run():
    rng = random.Random(20240)
    real, model = ChannelInfo(3), ListQueue()
    ops = 0
    for _ in range(20_000):
        op = rng.choices(["enq", "deq", "rm"], weights=[5, 3, 1])[0]
        apply_both(real, model, op, rng.randrange(15))
        ops += 1
    assert ops >= 10_000


@MANY
@given(st.lists(st.tuples(st.sampled_from(["enq", "deq", "rm"]), st.integers(0, 14)), max_size=80))
def test_fifo_bisimulation_generated(seq):
    real, model = ChannelInfo(3), ListQueue()
    for op, x in seq:
        apply_both(real, model, op, x)


# -- occupancy ----------------------------------------------------------------

occ_ops = st.lists(st.tuples(st.booleans(), st.integers(1, 4), st.sampled_from([SELF, BLOCK]),
                             st.integers(0, 3)), max_size=40)


@MANY
@given(occ_ops)
def test_occupy_release_conservation(ops):
    info = ChannelInfo(4)
    held: dict[int, set] = {ch: set() for ch in range(1, 5)}
    for occupy, ch, reason, src in ops:
        key = (reason, None if reason is SELF else src)
        if occupy:
            info.occupy(ch, reason, 10.0, source=key[1])
            held[ch].add(key)
        else:
            freed = info.release(ch, reason, source=key[1])
            held[ch].discard(key)
            assert freed == (not held[ch])
        avail = set(info.available_channels(0.0))
        busy = set(info.occupied_channels(0.0))
        assert avail | busy == {1, 2, 3, 4} and not avail & busy
        assert busy == {ch for ch, keys in held.items() if keys}


def occupancy(states):
    return [sorted(s.c_cur) for s in states]


@MANY
@given(st.integers(0, 8), st.integers(0, 8), st.sampled_from([None, (0, 1), (4, 5), (6, 7)]), st.integers(1, 3))
def test_route_teardown_restores_occupancy(src, dst, bg, bg_ch):
    if src == dst:
        return
    topo = grid3(channels=3, interfaces=2)
    states = protocol.new_states(topo)
    if bg:
        protocol.occupy_link(topo, states, *bg, bg_ch, 100.0)
    before = occupancy(states)
    d = routing.discover_route(topo, states, src, dst, t_pre=10.0, now=0.0)
    if d.status is DiscoveryStatus.WAITING:
        routing.abort(d, topo, states, now=0.0)
    elif d.route is not None:
        routing.teardown(d.route, topo, states, now=0.0)
    assert occupancy(states) == before


# -- simulator ----------------------------------------------------------------

tiny = st.builds(
    lambda nodes, ch, k, flows, rate, dur, alg, seed: (
        Scenario(nodes=nodes, area_x=500.0, area_y=500.0, placement="random", channels=ch,
                 interfaces=min(k, ch), flows=flows, rate=rate, duration=dur, min_hops=1,
                 start_window=0.5, algorithm=alg), seed),
    st.integers(3, 7), st.integers(2, 5), st.integers(1, 3), st.integers(0, 3), st.integers(1, 40),
    st.sampled_from([1.0, 1.5, 2.0]), st.sampled_from(["rca", "static", "single"]), st.integers(0, 10_000))


@MANY
@given(tiny)
def test_counts_are_conserved(case):
    scenario, seed = case
    m, _ = run(scenario, seed, trace=False)
    for f in m.flows:
        assert 0 <= f.delivered <= f.sent
        assert f.delivered + f.collided + f.dropped + f.in_flight == f.sent
        assert 0.0 <= f.delivery_rate <= 1.0


@MANY
@given(st.integers(3, 7), st.integers(3, 5), st.integers(1, 40), st.integers(0, 10_000))
def test_single_rca_flow_never_collides(nodes, channels, rate, seed):
    sc = Scenario(nodes=nodes, area_x=500.0, area_y=500.0, placement="random", channels=channels,
                  interfaces=2, flows=1, rate=rate, duration=1.5, min_hops=1, start_window=0.5)
    m, _ = run(sc, seed, trace=False)
    assert m.collided == 0


@MANY
@given(tiny)
def test_same_seed_same_trace(case):
    scenario, seed = case
    m1, t1 = run(scenario, seed)
    m2, t2 = run(scenario, seed)
    assert m1.digest() == m2.digest()
    assert t1 == t2


# -- exhaustive soundness on small grids --------------------------------------

def four_node_topologies():
    cells = [(c * SPACING, r * SPACING) for r in range(3) for c in range(3)]
    for subset in itertools.combinations(cells, 4):
        topo = from_positions(list(subset), channels=2, interfaces=2, reception_range=RANGE)
        if topo.is_connected():
            yield topo


def test_exhaustive_soundness_of_established_routes():
    checked = routes = grants = reused = 0
    for topo in four_node_topologies():
        for (a, b), ch in itertools.product(topo.links(), (1, 2)):
            background = (a, b, ch)
            for src, dst in itertools.permutations(range(topo.n), 2):
                states = protocol.new_states(topo)
                protocol.occupy_link(topo, states, a, b, ch, 100.0)
                d = routing.discover_route(topo, states, src, dst, t_pre=10.0, now=0.0)
                checked += 1
                if d.status is not DiscoveryStatus.ESTABLISHED:
                    continue
                routes += 1
                hops = d.route.hops
                for i, h in enumerate(hops):
                    assert in_range(topo, h[0], h[1])
                    if h == background:
                        # riding the already-open link shares its transmitter, nothing new is on air
                        reused += 1
                        continue
                    assert not trca_conflict(topo, h, background)
                    for g in hops[i + 1:]:
                        assert not trca_conflict(topo, h, g)
            # single-step grants are a subset of the brute-force feasible ones
            for x, y in itertools.permutations(range(topo.n), 2):
                if not in_range(topo, x, y) or {x, y} == {a, b}:
                    continue
                states = protocol.new_states(topo)
                protocol.occupy_link(topo, states, a, b, ch, 100.0)
                res = protocol.step_distribution(topo, states, x, y, 10.0, 0.0)
                if res.kind is StepKind.PROCEED:
                    grants += 1
                    assert not trca_conflict(topo, (x, y, res.channel), background)
    assert checked > 1000 and routes > reused and grants > 0
