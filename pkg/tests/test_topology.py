import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcasim.topology import (InterferenceModel, Topology, from_positions, grid_topology, line_topology,
                             random_topology)

from conftest import in_range, trca_conflict

R = 250.0


def test_isolated_node_has_no_neighbours():
    t = from_positions([(10.0, 10.0)])
    assert t.neighbors(0) == frozenset()
    assert t.is_connected()


def test_boundary_distance_is_inclusive():
    t = from_positions([(0.0, 0.0), (R, 0.0)], reception_range=R)
    assert t.neighbors(0) == {1} and t.neighbors(1) == {0}


def test_line_neighbours_match_brute_force():
    t = line_topology(5, 0.9 * R, reception_range=R)
    for a in range(5):
        brute = {b for b in range(5) if b != a and abs(a - b) * 0.9 * R <= R}
        assert t.neighbors(a) == brute
    assert t.neighbors(2) == {1, 3}


def test_unknown_node_rejected():
    t = line_topology(3, 100.0)
    with pytest.raises(ValueError):
        t.neighbors(7)
    with pytest.raises(ValueError):
        t.neighbors(-1)


def test_link_exists():
    t = from_positions([(0.0, 0.0), (100.0, 0.0), (900.0, 0.0)])
    assert t.link_exists(0, 1, 1)
    assert not t.link_exists(0, 1, None)
    assert not t.link_exists(0, 2, 1)


def test_interferes_examples():
    t = line_topology(4, 0.9 * R, reception_range=R, channels=4)
    assert not t.interferes(0, 1, 1, 0, 1, 2)
    assert t.interferes(0, 1, 1, 0, 1, 1)
    assert t.interferes(0, 1, 1, 2, 3, 1)


def test_receiver_model_only_looks_at_receivers():
    t = line_topology(4, 0.9 * R, reception_range=R, interference_model=InterferenceModel.RECEIVER)
    # 0->1 and 2->3: receiver 1 hears transmitter 2
    assert t.interferes(0, 1, 1, 2, 3, 1)
    # 1->0 and 2->3: each receiver is two spacings from the other transmitter
    assert not t.interferes(1, 0, 1, 2, 3, 1)


@pytest.mark.parametrize("positions, kwargs", [
    ([(0.0, 0.0)], dict(channels=1, interfaces=1)),
    ([(0.0, 0.0)], dict(channels=3, interfaces=4)),
    ([(0.0, 0.0)], dict(channels=3, interfaces=0)),
    ([(5000.0, 0.0)], dict(area=(1200.0, 1200.0))),
])
def test_constructor_rejects_bad_inventory(positions, kwargs):
    with pytest.raises(ValueError):
        Topology(np.array(positions), **kwargs)


def test_two_far_nodes_disconnected():
    t = from_positions([(0.0, 0.0), (1000.0, 0.0)])
    assert not t.is_connected()


def closure_connected(t: Topology) -> bool:
    """Reachability by repeated squaring of (A + I)."""
    m = np.array([[1 if a == b or in_range(t, a, b) else 0 for b in range(t.n)] for a in range(t.n)])
    for _ in range(math.ceil(math.log2(max(t.n, 2))) + 1):
        m = np.minimum(m @ m, 1)
    return bool(m.all())


@pytest.mark.parametrize("seed", range(5))
def test_connectivity_matches_closure_oracle(seed):
    rng = np.random.default_rng(seed)
    pos = rng.uniform(0, 1200, size=(30, 2))
    t = Topology(pos)
    assert t.is_connected() == closure_connected(t)
    assert random_topology(30, seed=seed).is_connected()


def test_random_topology_is_seeded():
    a, b = random_topology(30, seed=4), random_topology(30, seed=4)
    assert np.array_equal(a.positions, b.positions)


def test_grid_has_four_neighbour_interior():
    t = grid_topology(30)
    assert t.is_connected()
    assert max(t.degree(v) for v in range(30)) == 4
    assert t.degree(7) == 4


def test_shortest_path_and_distances():
    t = line_topology(5, 200.0)
    assert t.shortest_path(0, 4) == [0, 1, 2, 3, 4]
    assert t.hop_distances(0)[4] == 4
    assert t.shortest_path(0, 4, usable=lambda a, b: {a, b} != {2, 3}) is None


coords = st.floats(0.0, 600.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=2, max_size=7), st.integers(1, 3), st.integers(1, 3))
def test_interference_symmetry_and_orthogonality(points, ch1, ch2):
    t = from_positions(points, channels=3, interfaces=2)
    for a, b, c, d in itertools.product(range(t.n), repeat=4):
        if a == b or c == d:
            continue
        got = t.interferes(a, b, ch1, c, d, ch2)
        assert got == t.interferes(c, d, ch2, a, b, ch1)
        assert got == trca_conflict(t, (a, b, ch1), (c, d, ch2))
        if ch1 != ch2:
            assert not got


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=10))
def test_neighbour_relation_symmetric_irreflexive(points):
    t = from_positions(points)
    for a in range(t.n):
        assert a not in t.neighbors(a)
        for b in t.neighbors(a):
            assert a in t.neighbors(b)
            assert in_range(t, a, b)
