"""Network of infrastructure assets over which an attack propagates."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class NodeKind(str, Enum):
    IT = "IT"
    OT = "OT"
    NETWORK = "NETWORK"
    SERVICE = "SERVICE"


class TopologyError(ValueError):
    """Raised for malformed node or edge definitions."""


@dataclass(frozen=True)
class Node:
    id: str
    label: str = ""
    kind: NodeKind = NodeKind.IT
    service_weight: float = 1.0  # relative contribution to overall service availability


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    contact_rate: float = 1.0


@dataclass
class Topology:
    """Validated node/edge collection with a cached contact matrix.

    ``contact_matrix()[i, j]`` is the rate at which node j's compromise
    pressures node i; undirected edges contribute in both directions, and
    parallel edges between the same pair accumulate.
    """

    nodes: list[Node]
    edges: list[Edge]
    directed: bool = False
    _index: dict[str, int] = field(default_factory=dict, repr=False)
    _matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self._index = {node.id: i for i, node in enumerate(self.nodes)}

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def index_of(self, node_id: str) -> int:
        try:
            return self._index[node_id]
        except KeyError:
            raise TopologyError(f"unknown node id: {node_id}") from None

    def contact_matrix(self) -> np.ndarray:
        if self._matrix is None:
            n = self.n_nodes
            w = np.zeros((n, n), dtype=np.float64)
            for edge in self.edges:
                i, j = self._index[edge.source], self._index[edge.target]
                w[j, i] += edge.contact_rate
                if not self.directed:
                    w[i, j] += edge.contact_rate
            self._matrix = w
        return self._matrix

    def service_weights(self) -> np.ndarray:
        """Normalized per-node service weights (sum to 1)."""
        raw = np.array([node.service_weight for node in self.nodes], dtype=np.float64)
        return raw / raw.sum()


def build_topology(nodes, edges, directed: bool = False) -> Topology:
    """Validate and assemble a Topology; node order is preserved.

    ``nodes`` may be Node objects or mappings with id/label/kind/serviceWeight;
    ``edges`` may be Edge objects, (from, to, contactRate) tuples, or mappings.
    """
    node_objs: list[Node] = []
    seen: set[str] = set()
    for item in nodes:
        node = item if isinstance(item, Node) else _node_from_mapping(item)
        if node.id in seen:
            raise TopologyError(f"duplicate node id: {node.id}")
        if node.service_weight < 0:
            raise TopologyError(f"negative service weight on node: {node.id}")
        seen.add(node.id)
        node_objs.append(node)
    if node_objs and not any(node.service_weight > 0 for node in node_objs):
        raise TopologyError("at least one node must have service weight > 0")

    edge_objs: list[Edge] = []
    for item in edges:
        edge = item if isinstance(item, Edge) else _edge_from_any(item)
        for endpoint in (edge.source, edge.target):
            if endpoint not in seen:
                raise TopologyError(f"edge references unknown node id: {endpoint}")
        if edge.source == edge.target:
            raise TopologyError(f"self-loop on node id: {edge.source}")
        if edge.contact_rate < 0:
            raise TopologyError(
                f"negative contact rate on edge {edge.source}->{edge.target}"
            )
        edge_objs.append(edge)
    return Topology(node_objs, edge_objs, directed=directed)


def _node_from_mapping(item) -> Node:
    return Node(
        id=str(item["id"]),
        label=str(item.get("label", item["id"])),
        kind=NodeKind(item.get("kind", "IT")),
        service_weight=float(item.get("serviceWeight", 1.0)),
    )


def _edge_from_any(item) -> Edge:
    if isinstance(item, (tuple, list)):
        src, dst = item[0], item[1]
        rate = float(item[2]) if len(item) > 2 else 1.0
        return Edge(str(src), str(dst), rate)
    return Edge(str(item["from"]), str(item["to"]), float(item.get("contactRate", 1.0)))
