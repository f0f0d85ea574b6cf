"""Static mesh topology: node placement, links and the interference predicate."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

NodeId = int
ChannelId = int

DEFAULT_RANGE = 250.0
DEFAULT_AREA = (1200.0, 1200.0)


class InterferenceModel(str, enum.Enum):
    """Which endpoint pairs of two co-channel links must be out of range."""

    TRCA = "trca"  # transmitter-receiver conflict avoidance, any endpoint pair
    RECEIVER = "receiver"  # receiver conflict avoidance, transmitter vs. receiver only


@dataclass(eq=False)
class Topology:
    """Immutable node placement plus radio inventory.

    ``positions`` is an (N, 2) array in meters. Node ids are the row indices.
    """

    positions: np.ndarray
    interfaces: int = 4
    channels: int = 4
    reception_range: float = DEFAULT_RANGE
    area: tuple[float, float] = DEFAULT_AREA
    interference_model: InterferenceModel = InterferenceModel.TRCA
    _within: tuple[tuple[bool, ...], ...] = field(init=False, repr=False)
    _neighbors: tuple[frozenset[int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ValueError("positions must be an (N, 2) array with N >= 1")
        if self.interfaces < 1:
            raise ValueError("interfaces must be >= 1")
        if self.channels <= 1:
            raise ValueError(f"channel count must exceed 1, got {self.channels}")
        if self.channels < self.interfaces:
            raise ValueError(
                f"channel count ({self.channels}) must be >= interfaces per node ({self.interfaces})"
            )
        if self.reception_range <= 0:
            raise ValueError("reception_range must be positive")
        ax, ay = self.area
        if (pos < 0).any() or (pos[:, 0] > ax).any() or (pos[:, 1] > ay).any():
            raise ValueError("node positions must lie within the area bounds")
        pos.setflags(write=False)
        self.positions = pos
        self.interference_model = InterferenceModel(self.interference_model)

        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        dist.setflags(write=False)
        self.distances = dist
        within = dist <= self.reception_range
        self._within = tuple(tuple(bool(v) for v in row) for row in within)
        self._neighbors = tuple(
            frozenset(int(j) for j in np.flatnonzero(within[i]) if j != i)
            for i in range(len(pos))
        )

    @property
    def n(self) -> int:
        return len(self._neighbors)

    def _check(self, node: NodeId):
        if not isinstance(node, (int, np.integer)) or not 0 <= node < self.n:
            raise ValueError(f"unknown node id {node!r}")

    def within(self, a: NodeId, b: NodeId) -> bool:
        """True if a and b are within reception range (a node is within range of itself)."""
        return self._within[a][b]

    def neighbors(self, node: NodeId) -> frozenset[int]:
        self._check(node)
        return self._neighbors[node]

    def degree(self, node: NodeId) -> int:
        return len(self.neighbors(node))

    def link_exists(self, a: NodeId, b: NodeId, shared_channel: ChannelId | None) -> bool:
        self._check(a)
        self._check(b)
        if a == b:
            raise ValueError("a link needs two distinct endpoints")
        return shared_channel is not None and b in self._neighbors[a]

    def interferes(self, tx1, rx1, ch1, tx2, rx2, ch2) -> bool:
        """Whether link (tx1 -> rx1 on ch1) conflicts with link (tx2 -> rx2 on ch2).

        Distinct channels never interfere.
        """
        if ch1 != ch2:
            return False
        w = self._within
        if self.interference_model is InterferenceModel.TRCA:
            return w[tx1][tx2] or w[tx1][rx2] or w[rx1][tx2] or w[rx1][rx2]
        return w[rx1][tx2] or w[rx2][tx1] or rx1 == rx2

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        comps = []
        for start in range(self.n):
            if start in seen:
                continue
            comp = {start}
            todo = deque([start])
            while todo:
                u = todo.popleft()
                for v in self._neighbors[u]:
                    if v not in comp:
                        comp.add(v)
                        todo.append(v)
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def hop_distances(self, src: NodeId, blocked=frozenset()) -> dict[int, int]:
        """BFS hop counts from ``src`` avoiding ``blocked`` nodes."""
        self._check(src)
        dist = {src: 0}
        todo = deque([src])
        while todo:
            u = todo.popleft()
            for v in sorted(self._neighbors[u]):
                if v not in dist and v not in blocked:
                    dist[v] = dist[u] + 1
                    todo.append(v)
        return dist

    def shortest_path(self, src: NodeId, dst: NodeId, usable=None) -> list[int] | None:
        """Shortest-hop path, neighbors expanded in ascending id order.

        ``usable(a, b)`` optionally filters which links may be traversed.
        """
        self._check(src)
        self._check(dst)
        parent = {src: None}
        todo = deque([src])
        while todo:
            u = todo.popleft()
            if u == dst:
                break
            for v in sorted(self._neighbors[u]):
                if v in parent or (usable is not None and not usable(u, v)):
                    continue
                parent[v] = u
                todo.append(v)
        if dst not in parent:
            return None
        path = [dst]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path[::-1]

    def links(self) -> list[tuple[int, int]]:
        """Undirected links as (low, high) id pairs, sorted."""
        return [(a, b) for a in range(self.n) for b in sorted(self._neighbors[a]) if a < b]


def from_positions(positions, **kwargs) -> Topology:
    pos = np.asarray(positions, dtype=float)
    if "area" not in kwargs:
        hi = pos.max(axis=0) if len(pos) else np.zeros(2)
        kwargs["area"] = (max(float(hi[0]), DEFAULT_AREA[0]), max(float(hi[1]), DEFAULT_AREA[1]))
    return Topology(pos, **kwargs)


def line_topology(n: int, spacing: float, **kwargs) -> Topology:
    pos = [(i * spacing, 0.0) for i in range(n)]
    return from_positions(pos, **kwargs)


def grid_topology(n: int, area=DEFAULT_AREA, spacing: float | None = None, **kwargs) -> Topology:
    """``n`` nodes on a near-square grid, row-major ids.

    With the default 1200 m area, 30 nodes land on a 6 x 5 grid with 200 m
    spacing, which gives interior nodes four neighbours at a 250 m range.
    """
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    if spacing is None:
        spacing = min(area[0] / cols, area[1] / max(rows, 1))
    pos = [((i % cols) * spacing, (i // cols) * spacing) for i in range(n)]
    return Topology(np.array(pos, dtype=float), area=tuple(area), **kwargs)


def random_topology(n: int, area=DEFAULT_AREA, seed: int = 0, max_tries: int = 100_000, **kwargs) -> Topology:
    """Uniform random placement, resampled until the neighbour graph is connected."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        pos = rng.uniform(0.0, 1.0, size=(n, 2)) * np.asarray(area, dtype=float)
        topo = Topology(pos, area=tuple(area), **kwargs)
        if topo.is_connected():
            return topo
    raise RuntimeError(f"no connected placement of {n} nodes found in {max_tries} tries")
