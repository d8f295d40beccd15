"""Unit-weight Max-Cut instances on cyclic and complete graphs."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .errors import InvalidInstanceError


class Topology(str, Enum):
    CYCLIC = "cyclic"
    COMPLETE = "complete"


@dataclass(frozen=True)
class Graph:
    """Undirected graph with unit coupling on every edge.

    Edges are stored as sorted ``(i, j)`` tuples with ``i < j``.
    """

    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    topology: Topology

    def __post_init__(self):
        if self.n_nodes < 1:
            raise InvalidInstanceError(f"n_nodes must be positive, got {self.n_nodes}")
        seen = set()
        for i, j in self.edges:
            if not (0 <= i < j < self.n_nodes):
                raise InvalidInstanceError(f"bad edge ({i}, {j}) for {self.n_nodes} nodes")
            if (i, j) in seen:
                raise InvalidInstanceError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def to_json(self) -> dict:
        return {
            "n": self.n_nodes,
            "topology": self.topology.value,
            "edges": [[i, j] for i, j in self.edges],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        g = make_graph(obj["topology"], int(obj["n"]))
        if "edges" in obj and [list(e) for e in g.edges] != [list(e) for e in obj["edges"]]:
            raise InvalidInstanceError("edge list does not match the declared topology")
        return g


def cyclic_graph(n: int) -> Graph:
    """Ring 0-1-...-(n-1)-0."""
    if n < 3:
        raise InvalidInstanceError(f"cyclic graph needs n >= 3, got {n}")
    edges = sorted(tuple(sorted((k, (k + 1) % n))) for k in range(n))
    return Graph(n, tuple(edges), Topology.CYCLIC)


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise InvalidInstanceError(f"complete graph needs n >= 2, got {n}")
    return Graph(n, tuple(combinations(range(n), 2)), Topology.COMPLETE)


def make_graph(topology: str | Topology, n: int) -> Graph:
    topology = Topology(topology)
    if topology is Topology.CYCLIC:
        return cyclic_graph(n)
    return complete_graph(n)
