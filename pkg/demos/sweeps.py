"""
Delivery rate and throughput sweeps
===================================

Mean over seeds of delivery rate against packet rate (4 flows) and of
throughput against flow count (20 pkt/s), for all three strategies.
Pass the number of seeds as the first argument; the acceptance suite
uses 10.
"""

import sys

import numpy as np

from rcasim import Scenario
from rcasim.experiments import ExperimentMatrix, run_cells

seeds = range(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
algorithms = ("rca", "static", "single")


def table(key, values, attr, fmt):
    cells = run_cells(ExperimentMatrix(Scenario(), key, tuple(values), algorithms, tuple(seeds)))
    got = {}
    for (alg, value, _), m in cells:
        got.setdefault((alg, value), []).append(getattr(m, attr))
    print(f"{key:>8}" + "".join(f"{a:>10}" for a in algorithms))
    for v in values:
        print(f"{v:>8g}" + "".join(f"{np.mean(got[a, v]):>10{fmt}}" for a in algorithms))
    return got

# %% delivery rate falls fastest for the single channel as load grows
print(f"delivery rate, 4 flows, {len(seeds)} seeds")
table("rate", [5.0, 10.0, 15.0, 20.0, 25.0], "delivery_rate", ".3f")

# %% with many flows, negotiated channels keep throughput up
print(f"\nthroughput (kbit/s), 20 pkt/s, {len(seeds)} seeds")
got = table("flows", [2, 4, 6, 8, 10], "throughput_kbps", ".1f")
for n in (8, 10):
    print(f"R-CA / static at {n} flows: {np.mean(got['rca', n]) / np.mean(got['static', n]):.2f}")
