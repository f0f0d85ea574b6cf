"""Re-check a recorded trace without re-running the simulation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .scenario import ConfigError
from .simkernel import Outcome, Transmission, resolve_transmission
from .topology import Topology, from_positions


@dataclass
class TraceHeader:
    algorithm: str
    topology: Topology
    queue_cap: int
    link_rate: float
    packet_sizes: dict[int, int]


@dataclass
class ReplayReport:
    events: int = 0
    transmissions: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def parse_header(lines: list[str]) -> TraceHeader:
    meta, sizes = {}, {}
    for line in lines:
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if body.startswith("flow "):
            _, fid, _, size = body.split()
            sizes[int(fid)] = int(size.split("=", 1)[1])
        elif " " in body and not body.startswith("fields"):
            key, value = body.split(" ", 1)
            meta[key] = value
    try:
        positions = [tuple(float(x) for x in p.split(",")) for p in meta["positions"].split(";") if p]
        topo = from_positions(positions, interfaces=int(meta["interfaces"]), channels=int(meta["channels"]),
                              reception_range=float(meta["range"]), interference_model=meta["interference"])
        return TraceHeader(meta["algorithm"], topo, int(meta["queue_cap"]), float(meta["link_rate"]), sizes)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"malformed trace header: {exc}") from None


def _hops(path: str, chans: str) -> list[tuple[int, int, int]]:
    nodes = [int(v) for v in path.split("-")]
    return list(zip(nodes, nodes[1:], (int(c) for c in chans.split(","))))


def replay_lines(lines: list[str]) -> ReplayReport:
    """Check ordering, queue bounds, per-flow counts, collision outcomes and route soundness."""
    head = parse_header(lines)
    topo = head.topology
    report = ReplayReport()
    bad = report.violations
    gen, recv, dropped = Counter(), Counter(), Counter()
    collided = Counter()
    txs: list[Transmission] = []
    recorded: list[Outcome | None] = []
    routes: dict[int, list[tuple[int, int, int]]] = {}
    metrics_line = None
    last_time, last_seq = float("-inf"), -1
    for lineno, line in enumerate(lines, 1):
        if line.startswith("#") or not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 7:
            raise ConfigError(f"line {lineno}: expected 7 tab-separated fields, got {len(parts)}")
        time_s, seq_s, kind, nodes, chan, flow, outcome = parts
        time, seq = float(time_s), int(seq_s)
        report.events += 1
        if time < last_time:
            bad.append(f"line {lineno}: time goes backwards ({time} < {last_time})")
        if seq <= last_seq:
            bad.append(f"line {lineno}: sequence {seq} not increasing")
        last_time, last_seq = time, seq
        fid = int(flow) if flow else None
        if kind == "GEN":
            gen[fid] += 1
            if outcome == "dropped":
                dropped[fid] += 1
        elif kind == "RECV":
            recv[fid] += 1
            if recv[fid] > gen[fid]:
                bad.append(f"line {lineno}: flow {fid} received more packets than it generated")
        elif kind == "DROP":
            dropped[fid] += int(outcome.split("n=", 1)[1]) if "n=" in outcome else 1
        elif kind == "TX":
            tx, rx = (int(v) for v in nodes.split(">"))
            result, start = outcome.split(" start=")
            start = float(start)
            end = start + head.packet_sizes[fid] * 8 / head.link_rate
            txs.append(Transmission(tx, rx, int(chan), start, end, fid))
            recorded.append(None if result == "IN_FLIGHT" else Outcome(result))
            if result == "COLLIDED":
                collided[fid] += 1
        elif kind == "RREQ" and " q=" in outcome:
            q = int(outcome.split(" q=", 1)[1])
            if q > head.queue_cap:
                bad.append(f"line {lineno}: waiting queue holds {q} > cap {head.queue_cap}")
        elif kind == "ROUTE":
            hops = _hops(nodes, chan)
            for a, b, ch in hops:
                if not topo.within(a, b) or not 1 <= ch <= topo.channels:
                    bad.append(f"line {lineno}: hop {a}-{b} on channel {ch} is not a usable link")
            if head.algorithm == "rca":
                _check_route(lineno, fid, hops, routes, topo, bad)
            routes[fid] = hops
        elif kind == "FLOW_STOP":
            routes.pop(fid, None)
        elif kind == "METRICS":
            metrics_line = (lineno, dict(kv.split("=") for kv in outcome.split()))
    report.transmissions = len(txs)
    for i, (got, want) in enumerate(zip(recorded, resolve_transmission(txs, topo))):
        if got is not None and got is not want:
            t = txs[i]
            bad.append(f"transmission {t.tx}>{t.rx} ch {t.channel} at {t.start!r}: recorded {got.value}, "
                       f"recomputed {want.value}")
    if metrics_line is not None:
        lineno, m = metrics_line
        expect = {"sent": sum(gen.values()), "delivered": sum(recv.values()),
                  "collided": sum(collided.values()), "dropped": sum(dropped.values())}
        for key, value in expect.items():
            if key in m and int(m[key]) != value:
                bad.append(f"line {lineno}: METRICS {key}={m[key]} but the trace shows {value}")
    return report


def _check_route(lineno, fid, hops, routes, topo, bad):
    for i, (a, b, ch) in enumerate(hops):
        for c, d, ch2 in hops[i + 1:]:
            if topo.interferes(a, b, ch, c, d, ch2):
                bad.append(f"line {lineno}: route of flow {fid} interferes with itself at {a}-{b}/{c}-{d}")
        for other, ohops in routes.items():
            if other == fid:
                continue
            for c, d, ch2 in ohops:
                if (c, d, ch2) != (a, b, ch) and topo.interferes(a, b, ch, c, d, ch2):
                    bad.append(f"line {lineno}: route of flow {fid} interferes with flow {other} at {c}-{d}")


def replay_file(path) -> ReplayReport:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read trace {path}: {exc.strerror}") from None
    return replay_lines(lines)
