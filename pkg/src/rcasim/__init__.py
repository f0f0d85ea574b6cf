"""Simulator for routing-driven dynamic channel assignment in multi-radio mesh networks."""

from .baselines import StaticAssignment, single_radio_route, static_assign, static_route
from .chanstate import ChannelInfo, OccupancyReason, estimate_tpre
from .experiments import ExperimentMatrix, parse_matrix, run_matrix
from .protocol import ResponseKind, handle_request, select_channel
from .routing import DiscoveryStatus, discover_route, teardown
from .scenario import ConfigError, Scenario, parse_scenario
from .simkernel import InvariantViolation, Metrics, resolve_transmission, run
from .topology import InterferenceModel, Topology, grid_topology, random_topology

__version__ = "0.1.0"

__all__ = [
    "ChannelInfo", "ConfigError", "DiscoveryStatus", "ExperimentMatrix", "InterferenceModel",
    "InvariantViolation", "Metrics", "OccupancyReason", "ResponseKind", "Scenario", "StaticAssignment",
    "Topology", "discover_route", "estimate_tpre", "grid_topology", "handle_request", "parse_matrix",
    "parse_scenario", "random_topology", "resolve_transmission", "run", "run_matrix", "select_channel",
    "single_radio_route", "static_assign", "static_route", "teardown",
]
