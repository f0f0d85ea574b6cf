"""
Channel negotiation by hand
===========================

Three situations on a 3 x 3 grid, driven directly through the protocol
and routing calls, no event loop. Nodes are numbered 1..9 row by row:

    1 2 3
    4 5 6
    7 8 9
"""

from rcasim import protocol, routing
from rcasim.routing import RouteRequest
from rcasim.topology import from_positions

grid = [(c * 200.0, r * 200.0) for r in range(3) for c in range(3)]
topo = from_positions(grid, channels=3, interfaces=2, reception_range=250.0)


def name(v):
    return f"n{v + 1}"


def show(d):
    for m in (m for m in d.messages if isinstance(m, RouteRequest)):
        kind = m.response_info.kind.name if m.response_info else "-"
        print(f"   RREQ {'>'.join(map(name, m.hop_list))} on ch{m.c_pre}: {kind}")
    if d.route:
        hops = ", ".join(f"{name(a)}-{name(b)} ch{ch}" for a, b, ch in d.route.hops)
        print(f"   {d.status.value}: {hops}")
    else:
        print(f"   {d.status.value} (waiting on {name(d.waiting_on)})")


def background(n1_n4_until):
    # n2 is busy on channels 1 and 2, n1 talks to n4 on channel 3
    states = protocol.new_states(topo)
    for a, b, ch, until in [(0, 1, 1, 20.0), (1, 2, 2, 20.0), (0, 3, 3, n1_n4_until)]:
        protocol.occupy_link(topo, states, a, b, ch, until)
    return states

# %% A free neighbourhood: the first channel both ends have is taken
states = protocol.new_states(topo)
protocol.occupy_link(topo, states, 1, 2, 2, 20.0)
print("n8 -> n2 while n2-n3 holds channel 2")
show(routing.discover_route(topo, states, 7, 1, t_pre=30.0, now=0.0))

# %% n5 hears every channel and its traffic ends later than ours: go around it
states = background(20.0)
print("\nn8 -> n6, expected to finish at t=15, n5 busy until t=20")
print("   channels free at n5:", states[4].available_channels(0.0))
show(routing.discover_route(topo, states, 7, 5, t_pre=15.0, now=0.0))

# %% Our traffic outlasts n5's, so queue at n5 and resume when a channel frees
states = background(10.0)
print("\nn8 -> n5, expected to finish at t=30")
d = routing.discover_route(topo, states, 7, 4, t_pre=30.0, now=0.0)
show(d)
print(f"   n5 queue {[name(v) for v in states[4].waiting_queue]}, n5 t_pre now {states[4].t_pre:g}")

notes = protocol.release_link(topo, states, 0, 3, 3, now=8.0)
print(f"   t=8: n1-n4 done, n5 tells {name(notes[0].waiter)} that ch{notes[0].freed_channel} is free")
d.drain()
routing.resume_waiting(d, topo, states, notes[0], now=8.0)
show(d)
