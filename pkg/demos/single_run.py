"""
One scenario, three channel strategies
======================================

Runs the default 30-node grid with four flows under R-CA, the static
assignment and a single shared channel, then replays the R-CA trace to
re-check it independently of the simulator.
"""

import sys

from rcasim import Scenario, run
from rcasim.replay import replay_lines

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
base = Scenario(rate=20.0, flows=4)

# %% run each algorithm on the same topology and the same packet schedule
traces = {}
print(f"seed {seed}: {base.nodes} nodes, {base.channels} channels, {base.interfaces} interfaces, "
      f"{base.flows} flows at {base.rate:g} pkt/s")
print(f"{'algorithm':<10}{'sent':>7}{'deliv':>7}{'coll':>7}{'drop':>7}{'rate':>8}{'kbps':>8}")
for alg in ("rca", "static", "single"):
    m, traces[alg] = run(base.replace(algorithm=alg), seed)
    print(f"{alg:<10}{m.sent:>7}{m.delivered:>7}{m.collided:>7}{m.dropped:>7}"
          f"{m.delivery_rate:>8.3f}{m.throughput_kbps:>8.1f}")

# %% the established R-CA routes, straight from the trace
print("\nR-CA routes:")
for line in traces["rca"]:
    if "\tROUTE\t" in line:
        _, _, _, nodes, chans, flow, _ = line.split("\t")
        print(f"   flow {flow}: {nodes} on channels {chans}")

# %% an independent pass over the trace: interference, ordering, counts
report = replay_lines(traces["rca"])
print(f"\nreplay: {report.events} events, {report.transmissions} transmissions, "
      f"{len(report.violations)} violations")
