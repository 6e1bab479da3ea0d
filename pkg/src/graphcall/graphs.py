"""Session graph: construction, mutation, accessors, and the shared result types.

Node ids are non-negative integers.  Natural-language entities are mapped to
ids by the caller; the graph itself is task-agnostic.  One graph lives per
session and is accessed single-threaded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


NodeId = int


class ErrorKind(str, enum.Enum):
    NO_SUCH_NODE = "NoSuchNode"
    NO_PATH = "NoPath"
    NOT_BIPARTITE = "NotBipartite"
    NOT_A_DAG = "NotADag"
    DIRECTED_INPUT = "GraphIsDirectedButUndirectedRequired"
    INVALID_ARGUMENT = "InvalidArgument"
    TIMEOUT = "Timeout"


class GraphError(Exception):
    """Structured failure with an optional machine-checkable witness.

    The witness (an odd cycle, a directed cycle, ...) is meant to be fed back
    to the caller so a wrong graph construction can be repaired.
    """

    def __init__(self, kind: ErrorKind, message: str, witness: object = None):
        if not message:
            raise ValueError("GraphError message must be non-empty")
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.witness = witness

    def to_payload(self) -> dict:
        payload: dict = {"kind": self.kind.value, "message": self.message}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


@dataclass
class NodeReport:
    """Outcome of add_nodes/add_node."""

    added: list[NodeId]
    already_present: list[NodeId]

    def to_payload(self) -> dict:
        return {"added": self.added, "already_present": self.already_present}


@dataclass
class EdgeReport:
    """Outcome of add_edges/add_edge; created_nodes lists auto-added endpoints."""

    added: list[list[NodeId]]
    replaced: list[list[NodeId]]
    created_nodes: list[NodeId]

    def to_payload(self) -> dict:
        return {
            "added": self.added,
            "replaced": self.replaced,
            "created_nodes": self.created_nodes,
        }


@dataclass
class RemovalReport:
    removed_node: NodeId | None = None
    removed_edges: list[list[NodeId]] = field(default_factory=list)

    def to_payload(self) -> dict:
        payload: dict = {"removed_edges": self.removed_edges}
        if self.removed_node is not None:
            payload["removed_node"] = self.removed_node
        return payload


@dataclass
class PathResult:
    path: list[NodeId]
    length: float


@dataclass
class FlowPlan:
    value: float
    edge_flows: dict[tuple[NodeId, NodeId], float]

    def flows_payload(self) -> list[list]:
        return [[u, v, _num(f)] for (u, v), f in sorted(self.edge_flows.items())]


@dataclass
class Matching:
    pairs: set[tuple[NodeId, NodeId]]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def pairs_payload(self) -> list[list[NodeId]]:
        return [list(p) for p in sorted(self.pairs)]


def _num(x: float) -> int | float:
    """Render integral floats as ints so JSON output stays clean."""
    if isinstance(x, bool):
        return x
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def _check_node_id(n) -> NodeId:
    if isinstance(n, bool) or not isinstance(n, int):
        raise GraphError(ErrorKind.INVALID_ARGUMENT, f"node id must be an integer, got {n!r}")
    if n < 0:
        raise GraphError(ErrorKind.INVALID_ARGUMENT, f"node id must be non-negative, got {n}")
    return n


class Graph:
    """Mutable graph with directed/weighted flags.

    Undirected edges are stored once under a canonical (min, max) key; in an
    unweighted graph every stored weight is 1.  Re-adding an edge overwrites
    its weight, never duplicates it.
    """

    def __init__(self, directed: bool = False, weighted: bool = False):
        self.directed = bool(directed)
        self.weighted = bool(weighted)
        self._nodes: set[NodeId] = set()
        self._edges: dict[tuple[NodeId, NodeId], float] = {}
        self._out: dict[NodeId, dict[NodeId, float]] = {}
        self._in: dict[NodeId, dict[NodeId, float]] = {}

    # -- construction & mutation -------------------------------------------

    def _key(self, u: NodeId, v: NodeId) -> tuple[NodeId, NodeId]:
        if self.directed or u <= v:
            return (u, v)
        return (v, u)

    def add_node(self, node: NodeId) -> NodeReport:
        return self.add_nodes([node])

    def add_nodes(self, nodes: list[NodeId]) -> NodeReport:
        added: list[NodeId] = []
        present: list[NodeId] = []
        for n in nodes:
            _check_node_id(n)
            if n in self._nodes:
                if n not in present:
                    present.append(n)
            elif n in added:
                present.append(n)
            else:
                added.append(n)
        for n in added:
            self._nodes.add(n)
            self._out[n] = {}
            self._in[n] = {}
        return NodeReport(added=added, already_present=present)

    def add_edge(self, u: NodeId, v: NodeId, weight: float | None = None) -> EdgeReport:
        return self.add_edges([(u, v)], None if weight is None else [weight])

    def add_edges(self, edges: list, weights: list[float] | None = None) -> EdgeReport:
        if weights is not None and len(weights) != len(edges):
            raise GraphError(
                ErrorKind.INVALID_ARGUMENT,
                f"got {len(edges)} edges but {len(weights)} weights; the lists must have equal length",
            )
        cleaned: list[tuple[NodeId, NodeId, float]] = []
        for i, e in enumerate(edges):
            if not isinstance(e, (list, tuple)) or len(e) != 2:
                raise GraphError(ErrorKind.INVALID_ARGUMENT, f"edge {e!r} is not a [u, v] pair")
            u, v = _check_node_id(e[0]), _check_node_id(e[1])
            w = 1.0 if weights is None else weights[i]
            if isinstance(w, bool) or not isinstance(w, (int, float)):
                raise GraphError(ErrorKind.INVALID_ARGUMENT, f"weight {w!r} is not a number")
            if w < 0:
                raise GraphError(ErrorKind.INVALID_ARGUMENT, f"weight {w} is negative; weights must be non-negative")
            if not self.weighted and w != 1:
                raise GraphError(
                    ErrorKind.INVALID_ARGUMENT,
                    "this graph is unweighted; re-initialize with weighted=true to use edge weights",
                )
            cleaned.append((u, v, float(w)))

        added: list[list[NodeId]] = []
        replaced: list[list[NodeId]] = []
        created: list[NodeId] = []
        for u, v, w in cleaned:
            for n in (u, v):
                if n not in self._nodes:
                    self._nodes.add(n)
                    self._out[n] = {}
                    self._in[n] = {}
                    created.append(n)
            key = self._key(u, v)
            if key in self._edges:
                replaced.append([u, v])
            else:
                added.append([u, v])
            self._edges[key] = w
            self._out[u][v] = w
            self._in[v][u] = w
            if not self.directed:
                self._out[v][u] = w
                self._in[u][v] = w
        return EdgeReport(added=added, replaced=replaced, created_nodes=sorted(set(created)))

    def delete_node(self, node: NodeId) -> RemovalReport:
        if node not in self._nodes:
            raise GraphError(ErrorKind.NO_SUCH_NODE, f"node {node} is not in the graph")
        removed = [list(k) for k in self._edges if node in k]
        for key in removed:
            del self._edges[tuple(key)]
        for other in list(self._out.get(node, {})):
            self._in[other].pop(node, None)
            if not self.directed:
                self._out[other].pop(node, None)
        for other in list(self._in.get(node, {})):
            self._out[other].pop(node, None)
        self._out.pop(node, None)
        self._in.pop(node, None)
        self._nodes.discard(node)
        return RemovalReport(removed_node=node, removed_edges=sorted(removed))

    def delete_edge(self, u: NodeId, v: NodeId) -> RemovalReport:
        for n in (u, v):
            if n not in self._nodes:
                raise GraphError(ErrorKind.NO_SUCH_NODE, f"node {n} is not in the graph")
        key = self._key(u, v)
        if key not in self._edges:
            raise GraphError(ErrorKind.INVALID_ARGUMENT, f"there is no edge between node {u} and node {v}")
        del self._edges[key]
        self._out[u].pop(v, None)
        self._in[v].pop(u, None)
        if not self.directed:
            self._out[v].pop(u, None)
            self._in[u].pop(v, None)
        return RemovalReport(removed_edges=[[u, v]])

    def set_edge_weight(self, u: NodeId, v: NodeId, weight: float) -> None:
        if not self.weighted and weight != 1:
            raise GraphError(
                ErrorKind.INVALID_ARGUMENT,
                "this graph is unweighted; re-initialize with weighted=true to use edge weights",
            )
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise GraphError(ErrorKind.INVALID_ARGUMENT, f"weight {weight!r} is not a number")
        if weight < 0:
            raise GraphError(ErrorKind.INVALID_ARGUMENT, f"weight {weight} is negative; weights must be non-negative")
        key = self._key(u, v)
        if key not in self._edges:
            raise GraphError(ErrorKind.INVALID_ARGUMENT, f"there is no edge between node {u} and node {v}")
        w = float(weight)
        self._edges[key] = w
        self._out[u][v] = w
        self._in[v][u] = w
        if not self.directed:
            self._out[v][u] = w
            self._in[u][v] = w

    # -- accessors ----------------------------------------------------------

    @property
    def nodes(self) -> set[NodeId]:
        return set(self._nodes)

    def get_nodes(self) -> list[NodeId]:
        return sorted(self._nodes)

    def get_edges(self) -> list[list]:
        if self.weighted:
            return [[u, v, _num(w)] for (u, v), w in sorted(self._edges.items())]
        return [[u, v] for (u, v) in sorted(self._edges)]

    def edge_items(self) -> list[tuple[tuple[NodeId, NodeId], float]]:
        return sorted(self._edges.items())

    def node_count(self) -> int:
        return len(self._nodes)

    def edge_count(self) -> int:
        return len(self._edges)

    def has_node(self, node: NodeId) -> bool:
        return node in self._nodes

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return self._key(u, v) in self._edges

    def neighbors(self, node: NodeId) -> list[NodeId]:
        """Adjacent nodes; out-neighbors in a directed graph."""
        if node not in self._nodes:
            raise GraphError(ErrorKind.NO_SUCH_NODE, f"node {node} is not in the graph")
        return sorted(self._out[node])

    def in_neighbors(self, node: NodeId) -> list[NodeId]:
        if node not in self._nodes:
            raise GraphError(ErrorKind.NO_SUCH_NODE, f"node {node} is not in the graph")
        return sorted(self._in[node])

    def degree(self, node: NodeId) -> int:
        """Neighbor count; in a directed graph, in-degree plus out-degree."""
        if node not in self._nodes:
            raise GraphError(ErrorKind.NO_SUCH_NODE, f"node {node} is not in the graph")
        if self.directed:
            return len(self._out[node]) + len(self._in[node])
        return len(self._out[node])

    def get_edge_weight(self, u: NodeId, v: NodeId) -> float:
        key = self._key(u, v)
        if key not in self._edges:
            raise GraphError(ErrorKind.INVALID_ARGUMENT, f"there is no edge between node {u} and node {v}")
        return self._edges[key]

    def weight(self, u: NodeId, v: NodeId) -> float:
        """Weight of the traversable arc u->v (assumes it exists)."""
        return self._out[u][v]

    def out_adjacency(self, node: NodeId) -> dict[NodeId, float]:
        return self._out.get(node, {})

    def in_adjacency(self, node: NodeId) -> dict[NodeId, float]:
        return self._in.get(node, {})

    # -- conversion & snapshots ---------------------------------------------

    def to_undirected(self) -> "Graph":
        g = Graph(directed=False, weighted=self.weighted)
        g.add_nodes(self.get_nodes())
        for (u, v), w in self.edge_items():
            g.add_edges([(u, v)], [w] if self.weighted else None)
        return g

    def copy(self) -> "Graph":
        g = Graph(directed=self.directed, weighted=self.weighted)
        g.add_nodes(self.get_nodes())
        for (u, v), w in self.edge_items():
            g.add_edges([(u, v)], [w] if self.weighted else None)
        return g

    def snapshot(self) -> dict:
        return {
            "directed": self.directed,
            "weighted": self.weighted,
            "nodes": self.get_nodes(),
            "edges": [{"u": u, "v": v, "weight": _num(w)} for (u, v), w in self.edge_items()],
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.directed == other.directed
            and self.weighted == other.weighted
            and self._nodes == other._nodes
            and self._edges == other._edges
        )

    def __repr__(self) -> str:
        kind = ("directed" if self.directed else "undirected") + (" weighted" if self.weighted else "")
        return f"<Graph {kind}: {self.node_count()} nodes, {self.edge_count()} edges>"


def init_graph(directed: bool = False, weighted: bool = False) -> Graph:
    return Graph(directed=directed, weighted=weighted)
