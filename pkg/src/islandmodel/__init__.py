"""Island-model evolutionary algorithms on sorting, shortest paths and Eulerian cycles."""

from .engine import NEVER, Problem, RunConfig, RunRecord, ScalarProblem, migration_step, run
from .topology import (Topology, TopologyError, diameter, is_strongly_connected, make_complete,
                       make_custom, make_ring, make_topology, make_torus)

__version__ = "0.1.0"

__all__ = ["NEVER", "Problem", "RunConfig", "RunRecord", "ScalarProblem", "migration_step", "run",
           "Topology", "TopologyError", "diameter", "is_strongly_connected", "make_complete",
           "make_custom", "make_ring", "make_topology", "make_torus"]
