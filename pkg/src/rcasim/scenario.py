"""Scenario description and the flat ``key = value`` file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .topology import InterferenceModel, Topology, grid_topology, random_topology

ALGORITHMS = ("rca", "static", "single")
PLACEMENTS = ("random", "grid")
ENDPOINT_POLICIES = ("random_pairs", "fixed_list")


class ConfigError(ValueError):
    """Invalid scenario or experiment configuration."""


@dataclass(frozen=True)
class Scenario:
    # topology
    nodes: int = 30
    area_x: float = 1200.0
    area_y: float = 1200.0
    reception_range: float = 250.0
    channels: int = 12
    interfaces: int = 4
    placement: str = "grid"
    topology_seed: int | None = None
    interference: str = "trca"
    # workload
    algorithm: str = "rca"
    flows: int = 4
    rate: float = 20.0
    packet_size: int = 512
    duration: float = 50.0
    flow_endpoint_policy: str = "random_pairs"
    flow_list: tuple[tuple[int, int], ...] = ()
    min_hops: int = 2
    start_window: float = 1.0
    jitter: float = 0.5
    seed: int = 0
    # protocol and link layer
    queue_cap: int = 10
    link_rate: float = 2e6
    buffer_size: int = 50
    wait_timeout: float = 2.0
    retry_interval: float = 1.0
    literal_tpre: bool = False
    carrier_sense: bool = True

    def validate(self) -> "Scenario":
        problems = []
        if self.nodes < 1:
            problems.append("nodes must be >= 1")
        if self.area_x <= 0 or self.area_y <= 0:
            problems.append("area must be positive")
        if self.reception_range <= 0:
            problems.append("range must be positive")
        if self.channels <= 1:
            problems.append("channels must be > 1 (at least two orthogonal channels)")
        if self.interfaces < 1:
            problems.append("interfaces must be >= 1")
        if self.channels < self.interfaces:
            problems.append(f"channels ({self.channels}) must be >= interfaces ({self.interfaces})")
        if self.placement not in PLACEMENTS:
            problems.append(f"placement must be one of {PLACEMENTS}")
        if self.interference not in {m.value for m in InterferenceModel}:
            problems.append("interference must be 'trca' or 'receiver'")
        if self.algorithm not in ALGORITHMS:
            problems.append(f"algorithm must be one of {ALGORITHMS}")
        if self.flows < 0:
            problems.append("flows must be >= 0")
        if self.rate <= 0:
            problems.append("rate must be > 0")
        if self.packet_size <= 0:
            problems.append("packet_size must be > 0")
        if self.duration <= 0:
            problems.append("duration must be > 0")
        if self.flow_endpoint_policy not in ENDPOINT_POLICIES:
            problems.append(f"flow_endpoint_policy must be one of {ENDPOINT_POLICIES}")
        if self.flow_endpoint_policy == "fixed_list":
            if len(self.flow_list) != self.flows:
                problems.append(f"flow_list has {len(self.flow_list)} entries but flows = {self.flows}")
            for s, d in self.flow_list:
                if s == d or not (0 <= s < self.nodes and 0 <= d < self.nodes):
                    problems.append(f"bad flow endpoints {s}>{d}")
        if self.min_hops < 1:
            problems.append("min_hops must be >= 1")
        if not 0 <= self.start_window < self.duration:
            problems.append("start_window must lie in [0, duration)")
        if not 0 <= self.jitter < 1:
            problems.append("jitter must lie in [0, 1)")
        if self.queue_cap < 1:
            problems.append("queue_cap must be >= 1")
        if self.link_rate <= 0:
            problems.append("link_rate must be > 0")
        if self.buffer_size < 1:
            problems.append("buffer_size must be >= 1")
        if self.wait_timeout <= 0 or self.retry_interval <= 0:
            problems.append("wait_timeout and retry_interval must be > 0")
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    @property
    def airtime(self) -> float:
        return self.packet_size * 8 / self.link_rate

    def build_topology(self, seed: int | None = None) -> Topology:
        tseed = self.topology_seed if self.topology_seed is not None else (self.seed if seed is None else seed)
        kw = dict(interfaces=self.interfaces, channels=self.channels,
                  reception_range=self.reception_range, interference_model=self.interference)
        area = (self.area_x, self.area_y)
        if self.placement == "grid":
            return grid_topology(self.nodes, area=area, **kw)
        return random_topology(self.nodes, area=area, seed=tseed, **kw)


# file key -> (field name, converter)
def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _flow_list(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        s, d = item.split(">")
        out.append((int(s), int(d)))
    return tuple(out)


def _opt_int(text: str):
    return None if text.lower() in ("", "none") else int(text)


KEYS = {
    "nodes": ("nodes", int),
    "area_x": ("area_x", float),
    "area_y": ("area_y", float),
    "range": ("reception_range", float),
    "channels": ("channels", int),
    "interfaces": ("interfaces", int),
    "placement": ("placement", str),
    "topology_seed": ("topology_seed", _opt_int),
    "interference": ("interference", str),
    "algorithm": ("algorithm", str),
    "flows": ("flows", int),
    "rate": ("rate", float),
    "packet_size": ("packet_size", int),
    "duration": ("duration", float),
    "flow_endpoint_policy": ("flow_endpoint_policy", str),
    "flow_list": ("flow_list", _flow_list),
    "min_hops": ("min_hops", int),
    "start_window": ("start_window", float),
    "jitter": ("jitter", float),
    "seed": ("seed", int),
    "queue_cap": ("queue_cap", int),
    "link_rate": ("link_rate", float),
    "buffer_size": ("buffer_size", int),
    "wait_timeout": ("wait_timeout", float),
    "retry_interval": ("retry_interval", float),
    "literal_tpre": ("literal_tpre", _bool),
    "carrier_sense": ("carrier_sense", _bool),
}


def parse_pairs(text: str, source: str = "<string>") -> list[tuple[int, str, str]]:
    """Split a ``key = value`` document into (line number, key, value) triples."""
    out = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: missing key")
        if key in seen:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        seen[key] = lineno
        out.append((lineno, key, value))
    return out


def scenario_from_pairs(pairs, source: str = "<string>", base: Scenario | None = None) -> Scenario:
    values = {}
    for lineno, key, value in pairs:
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        name, conv = KEYS[key]
        try:
            values[name] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
    if "flow_list" in values and "flow_endpoint_policy" not in values:
        values["flow_endpoint_policy"] = "fixed_list"
    scenario = (base or Scenario()).replace(**values)
    try:
        return scenario.validate()
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_text(text: str, source: str = "<string>") -> Scenario:
    return scenario_from_pairs(parse_pairs(text, source), source)


def parse_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc.strerror}") from None
    return parse_text(text, str(path))


def dump_scenario(scenario: Scenario) -> str:
    """Render a scenario back to the file format (round-trips through parse_text)."""
    lines = []
    for key, (name, _) in KEYS.items():
        value = getattr(scenario, name)
        if name == "flow_list":
            if not value:
                continue
            value = ", ".join(f"{s}>{d}" for s, d in value)
        elif value is None:
            continue
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
