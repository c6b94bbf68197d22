"""Cyberattack propagation over a networked infrastructure."""

from .compartments import (
    COMPARTMENTS,
    LETTERS,
    Compartment,
    CompartmentState,
    Mode,
    StateError,
)
from .dynamics import (
    DEFAULT_DT,
    AgentStream,
    SimulationError,
    agent_step,
    force_of_infection,
    mean_field_step,
    run_agent_ensemble,
    simulate,
)
from .params import (
    ParamError,
    ParameterClampWarning,
    PropagationParams,
    apply_param_deltas,
)
from .perspectives import (
    PerspectiveSnapshot,
    PerspectiveWeights,
    Trajectory,
    compute_perspectives,
)
from .topology import Edge, Node, NodeKind, Topology, TopologyError, build_topology

__all__ = [
    "COMPARTMENTS",
    "LETTERS",
    "Compartment",
    "CompartmentState",
    "Mode",
    "StateError",
    "DEFAULT_DT",
    "AgentStream",
    "SimulationError",
    "agent_step",
    "force_of_infection",
    "mean_field_step",
    "run_agent_ensemble",
    "simulate",
    "ParamError",
    "ParameterClampWarning",
    "PropagationParams",
    "apply_param_deltas",
    "PerspectiveSnapshot",
    "PerspectiveWeights",
    "Trajectory",
    "compute_perspectives",
    "Edge",
    "Node",
    "NodeKind",
    "Topology",
    "TopologyError",
    "build_topology",
]
