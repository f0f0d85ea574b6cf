"""Per-node channel information table and the waiting-node address queue."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field

DEFAULT_QUEUE_CAPACITY = 10


class OccupancyReason(enum.Enum):
    SELF_TX = "self"  # this node transmits or receives on the channel
    NEIGHBOR_BLOCK = "neighbor"  # a neighbour announced it occupies the channel


@dataclass
class ChannelInfo:
    """Channel state owned by one node.

    ``c_cur`` is kept as a multiset: one optional SELF_TX entry per channel and
    any number of NEIGHBOR_BLOCK entries keyed by the announcing neighbour.
    Every entry carries an absolute expiry time.
    """

    channels: int
    queue_capacity: int = DEFAULT_QUEUE_CAPACITY
    c_pre: int | None = None
    t_pre: float = 0.0
    _self: dict[int, float] = field(default_factory=dict, repr=False)
    _blocks: dict[int, dict[int | None, float]] = field(default_factory=dict, repr=False)
    waiting_queue: deque = field(default_factory=deque)
    # outgoing links this node opened, (peer, channel) -> number of routes riding it
    link_users: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.channels < 1:
            raise ValueError("channel count must be positive")
        if self.queue_capacity < 1:
            raise ValueError("queue capacity must be >= 1")

    def _check_channel(self, ch):
        if not 1 <= ch <= self.channels:
            raise ValueError(f"channel {ch} outside [1, {self.channels}]")

    @property
    def c_cur(self) -> list[tuple[int, OccupancyReason, float]]:
        """All entries as (channel, reason, expiry), expired ones included."""
        out = [(ch, OccupancyReason.SELF_TX, exp) for ch, exp in self._self.items()]
        for ch, srcs in self._blocks.items():
            out.extend((ch, OccupancyReason.NEIGHBOR_BLOCK, exp) for exp in srcs.values())
        return sorted(out, key=lambda e: (e[0], e[1].value, e[2]))

    def expiry(self, ch: int, now: float | None = None) -> float | None:
        """Latest expiry among live entries on ``ch``, or None if none are live."""
        exps = []
        if ch in self._self:
            exps.append(self._self[ch])
        exps.extend(self._blocks.get(ch, {}).values())
        if now is not None:
            exps = [e for e in exps if e > now]
        return max(exps) if exps else None

    def is_occupied(self, ch: int, now: float | None = None) -> bool:
        return self.expiry(ch, now) is not None

    def occupied_channels(self, now: float | None = None) -> list[int]:
        return [ch for ch in range(1, self.channels + 1) if self.is_occupied(ch, now)]

    def available_channels(self, now: float) -> list[int]:
        """Channels with no unexpired entry, ascending."""
        return [ch for ch in range(1, self.channels + 1) if not self.is_occupied(ch, now)]

    def self_grants(self, now: float | None = None) -> list[int]:
        """Channels this node currently holds for its own links (one interface each)."""
        return sorted(ch for ch, exp in self._self.items() if now is None or exp > now)

    def occupy(self, ch: int, reason: OccupancyReason, expiry: float, source: int | None = None):
        self._check_channel(ch)
        if reason is OccupancyReason.SELF_TX:
            self._self[ch] = max(expiry, self._self.get(ch, -math.inf))
        else:
            srcs = self._blocks.setdefault(ch, {})
            srcs[source] = max(expiry, srcs.get(source, -math.inf))
        return self

    def release(self, ch: int, reason: OccupancyReason, source: int | None = None,
                now: float | None = None) -> bool:
        """Drop the matching entry; return True iff ``ch`` is no longer occupied.

        For NEIGHBOR_BLOCK with ``source=None`` every neighbour entry on ``ch``
        goes. Releasing an absent entry is a no-op.
        """
        if reason is OccupancyReason.SELF_TX:
            self._self.pop(ch, None)
        else:
            srcs = self._blocks.get(ch)
            if srcs is not None:
                if source is None:
                    srcs.clear()
                else:
                    srcs.pop(source, None)
                if not srcs:
                    del self._blocks[ch]
        return not self.is_occupied(ch, now)

    def refresh_tpre(self, now: float) -> float:
        """Reset t_pre to the latest live expiry, i.e. when everything now held here should be done."""
        exps = [e for e in self._self.values() if e > now]
        exps.extend(e for srcs in self._blocks.values() for e in srcs.values() if e > now)
        self.t_pre = max(exps, default=0.0)
        return self.t_pre

    def purge(self, now: float):
        """Forget entries that expired at or before ``now``."""
        for ch in [c for c, e in self._self.items() if e <= now]:
            del self._self[ch]
        for ch in list(self._blocks):
            srcs = self._blocks[ch]
            for s in [s for s, e in srcs.items() if e <= now]:
                del srcs[s]
            if not srcs:
                del self._blocks[ch]

    def enqueue_waiter(self, node: int) -> bool:
        if len(self.waiting_queue) >= self.queue_capacity or node in self.waiting_queue:
            return False
        self.waiting_queue.append(node)
        return True

    def dequeue_waiter(self) -> int | None:
        return self.waiting_queue.popleft() if self.waiting_queue else None

    def remove_waiter(self, node: int) -> bool:
        try:
            self.waiting_queue.remove(node)
        except ValueError:
            return False
        return True

    def snapshot(self) -> tuple:
        """Hashable view of the whole table, for equality checks."""
        return (self.c_pre, self.t_pre, tuple(self.c_cur), tuple(self.waiting_queue),
                tuple(sorted(self.link_users.items())))


def estimate_tpre(remaining_packets: int, packet_size: int, rate: float, now: float) -> float:
    """Expected completion time of a CBR transmission with ``remaining_packets`` left.

    Airtime is folded into the inter-packet interval, so ``packet_size`` does
    not enter the estimate.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if remaining_packets < 0:
        raise ValueError("remaining_packets must be non-negative")
    return now + remaining_packets / rate
