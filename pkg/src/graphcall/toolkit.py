"""JSON tool catalog and the function manager that validates and dispatches
every call coming back from the model.

Nothing in here ever raises at a caller: malformed names, malformed argument
payloads, and graph errors all come back as error ToolResults whose text is
written to be actionable by the model on its next turn.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import algorithms, scenario
from .graphs import ErrorKind, Graph, GraphError, _num

GRAPH_SESSION = "graph"
DISASTER_SESSION = "disaster"
SESSION_KINDS = (GRAPH_SESSION, DISASTER_SESSION)

INIT_TOOL = "GraphLibrary_init"


@dataclass(frozen=True)
class ToolParam:
    name: str
    type: str
    description: str
    required: bool = True
    items: str | None = None  # element type for arrays

    def schema(self) -> dict:
        out: dict = {"type": self.type, "description": self.description}
        if self.type == "array" and self.items:
            out["items"] = {"type": self.items}
        return out


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    params: tuple[ToolParam, ...] = ()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "parameters": {
                "type": "object",
                "properties": {p.name: p.schema() for p in self.params},
                "required": [p.name for p in self.params if p.required],
            },
        }


@dataclass
class ToolCall:
    name: str
    arguments: object = None  # dict, JSON-encoded string, or junk
    id: str | None = None


@dataclass
class ToolResult:
    call_name: str
    status: str  # "ok" | "error"
    payload: object = None
    error: dict | None = None
    notices: list[str] = field(default_factory=list)
    graph_mutated: bool = False

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def render(self) -> str:
        """The exact text appended to the transcript as the tool reply."""
        base = "GraphLibrary constructor" if self.call_name == INIT_TOOL else self.call_name
        if self.ok:
            text = f"{base} was called"
            if self.payload is not None:
                text += f" and resulted in {json.dumps(self.payload)}"
        else:
            text = f"{base} was called and resulted in an error: {self.error['message']}"
            if "witness" in self.error:
                text += f" Witness: {json.dumps(self.error['witness'])}."
        if self.notices:
            text += " (" + "; ".join(self.notices) + ")"
        return text


class SessionState:
    """Per-session mutable state: at most one live graph plus, for disaster
    sessions, the scenario world."""

    def __init__(self, kind: str = GRAPH_SESSION, world: "scenario.World | None" = None,
                 hamilton_time_budget: float | None = 30.0):
        if kind not in SESSION_KINDS:
            raise ValueError(f"unknown session kind {kind!r}")
        self.kind = kind
        self.graph: Graph | None = None
        self.world = world if world is not None else (scenario.default_world() if kind == DISASTER_SESSION else None)
        self.hamilton_time_budget = hamilton_time_budget

    def graph_snapshot(self) -> dict:
        if self.graph is None:
            return {"directed": None, "weighted": None, "nodes": [], "edges": []}
        return self.graph.snapshot()


# -- catalog ----------------------------------------------------------------

def _p(name, type_, desc, required=True, items=None):
    return ToolParam(name, type_, desc, required, items)


_NODE = "a node id (non-negative integer)"

GRAPH_TOOL_SPECS: tuple[ToolSpec, ...] = (
    ToolSpec(
        INIT_TOOL,
        "Create a new empty graph for this session. Call this before any other graph function.",
        (
            _p("directed", "boolean", "whether edges are one-way (default false)", required=False),
            _p("weighted", "boolean", "whether edges carry numeric weights (default false)", required=False),
        ),
    ),
    ToolSpec("add_nodes", "Add a list of nodes to the graph.",
             (_p("nodes", "array", "node ids to add", items="integer"),)),
    ToolSpec("add_node", "Add a single node to the graph.",
             (_p("node", "integer", _NODE),)),
    ToolSpec(
        "add_edges",
        "Add a list of edges; each edge is a [u, v] pair. Weights are optional and "
        "must align with the edges list.",
        (
            _p("edges", "array", "list of [u, v] node-id pairs", items="array"),
            _p("weights", "array", "edge weights, same length as edges", required=False, items="number"),
        ),
    ),
    ToolSpec(
        "add_edge",
        "Add a single edge between two nodes, with an optional weight.",
        (
            _p("u", "integer", _NODE),
            _p("v", "integer", _NODE),
            _p("weight", "number", "edge weight (weighted graphs only)", required=False),
        ),
    ),
    ToolSpec("delete_node", "Remove a node and all of its incident edges.",
             (_p("node", "integer", _NODE),)),
    ToolSpec("delete_edge", "Remove the edge between two nodes.",
             (_p("u", "integer", _NODE), _p("v", "integer", _NODE))),
    ToolSpec("get_nodes", "List all node ids in the graph."),
    ToolSpec("get_edges", "List all edges (with weights when the graph is weighted)."),
    ToolSpec("node_count", "Number of nodes in the graph."),
    ToolSpec("edge_count", "Number of edges in the graph."),
    ToolSpec("has_node", "Whether a node is in the graph.",
             (_p("node", "integer", _NODE),)),
    ToolSpec("has_edge", "Whether an edge exists between two nodes.",
             (_p("u", "integer", _NODE), _p("v", "integer", _NODE))),
    ToolSpec("neighbors", "Nodes adjacent to the given node (successors in a directed graph).",
             (_p("node", "integer", _NODE),)),
    ToolSpec("degree", "Degree of a node (in-degree plus out-degree when directed).",
             (_p("node", "integer", _NODE),)),
    ToolSpec("get_edge_weight", "Weight of the edge between two nodes.",
             (_p("u", "integer", _NODE), _p("v", "integer", _NODE))),
    ToolSpec("set_edge_weight", "Overwrite the weight of an existing edge.",
             (_p("u", "integer", _NODE), _p("v", "integer", _NODE),
              _p("weight", "number", "new edge weight"))),
    ToolSpec(
        "find_shortest_path",
        "Shortest path between two nodes as a node list (fewest hops when the graph "
        "is unweighted, minimum total weight otherwise).",
        (_p("start", "integer", "id of the start node"), _p("end", "integer", "id of the end node")),
    ),
    ToolSpec(
        "find_shortest_distance",
        "Length of the shortest path between two nodes (hop count when unweighted, "
        "total weight otherwise).",
        (_p("start", "integer", "id of the start node"), _p("end", "integer", "id of the end node")),
    ),
    ToolSpec("check_connectivity", "Whether a path exists between two nodes.",
             (_p("u", "integer", _NODE), _p("v", "integer", _NODE))),
    ToolSpec("detect_cycle", "Whether the graph contains a cycle; includes a witness cycle when one exists."),
    ToolSpec("topological_sort",
             "A topological ordering of a directed acyclic graph (every edge's source comes "
             "before its target)."),
    ToolSpec("connected_components", "Groups of nodes that are connected to each other."),
    ToolSpec(
        "max_flow",
        "Maximum flow from a source node to a sink node, treating edge weights as "
        "capacities; returns the flow value and a per-edge routing plan.",
        (_p("source", "integer", "id of the source node"), _p("sink", "integer", "id of the sink node")),
    ),
    ToolSpec("max_bipartite_matching",
             "Largest set of edges with no shared endpoints in a bipartite graph."),
    ToolSpec("is_bipartite",
             "Whether the graph's nodes split into two sides with edges only across sides."),
    ToolSpec("find_hamilton_path",
             "A path visiting every node exactly once, if one exists (null otherwise)."),
    ToolSpec(
        "gnn_layers",
        "Run message-passing layers: at each layer every node's embedding becomes the "
        "sum of its neighbors' previous embeddings.",
        (
            _p("embeddings", "object", "map from node id to its embedding vector, e.g. {\"0\": [1, 2]}"),
            _p("layers", "integer", "number of layers to apply"),
        ),
    ),
    ToolSpec("to_undirected", "Replace the session graph with its undirected version."),
)

SCENARIO_TOOL_SPECS: tuple[ToolSpec, ...] = (
    ToolSpec("get_environment_data",
             "Current environment state: entities, locations, relationships, and constraints."),
    ToolSpec("get_environment_map_data",
             "Terrain data: pairwise traversable links between locations and their distances."),
    ToolSpec(
        "apply_event",
        "Record a world event (fire_expanded, debris_cleared, survivor_rescued, robot_moved) "
        "and update the environment state.",
        (
            _p("kind", "string", "event kind"),
            _p("location", "string", "location label, e.g. \"L2\""),
            _p("details", "object", "extra event data, e.g. {\"from\": \"L5\"} for robot_moved", required=False),
        ),
    ),
)


def tool_catalog(session_kind: str = GRAPH_SESSION) -> list[ToolSpec]:
    if session_kind not in SESSION_KINDS:
        raise ValueError(f"unknown session kind {session_kind!r}")
    specs = list(GRAPH_TOOL_SPECS)
    if session_kind == DISASTER_SESSION:
        specs.extend(SCENARIO_TOOL_SPECS)
    return specs


_SPEC_INDEX = {spec.name: spec for spec in (*GRAPH_TOOL_SPECS, *SCENARIO_TOOL_SPECS)}
_SCENARIO_NAMES = {spec.name for spec in SCENARIO_TOOL_SPECS}
_MUTATING = {INIT_TOOL, "add_nodes", "add_node", "add_edges", "add_edge",
             "delete_node", "delete_edge", "set_edge_weight", "to_undirected"}


# -- validation ----------------------------------------------------------------

_TYPE_CHECKS = {
    "string": lambda v: isinstance(v, str),
    "integer": lambda v: isinstance(v, int) and not isinstance(v, bool)
    or isinstance(v, float) and v.is_integer(),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "boolean": lambda v: isinstance(v, bool),
    "array": lambda v: isinstance(v, list),
    "object": lambda v: isinstance(v, dict),
}


def parse_arguments(raw: object) -> tuple[dict | None, str | None]:
    """Accept both JSON objects and JSON-encoded strings, as models emit both."""
    if raw is None or raw == "":
        return {}, None
    if isinstance(raw, dict):
        return raw, None
    if isinstance(raw, str):
        try:
            parsed = json.loads(raw)
        except (json.JSONDecodeError, RecursionError):
            return None, "unparseable arguments (not valid JSON)"
        if not isinstance(parsed, dict):
            return None, f"arguments must be a JSON object, got {type(parsed).__name__}"
        return parsed, None
    return None, f"arguments must be a JSON object, got {type(raw).__name__}"


def validate_arguments(spec: ToolSpec, call: ToolCall) -> tuple[dict | None, list[str]]:
    """Returns (parsed args, violations); violations name every problem found."""
    args, parse_error = parse_arguments(call.arguments)
    if parse_error:
        return None, [parse_error]
    violations: list[str] = []
    known = {p.name for p in spec.params}
    for p in spec.params:
        if p.name not in args:
            if p.required:
                violations.append(f"missing required parameter '{p.name}' ({p.type})")
            continue
        value = args[p.name]
        if not _TYPE_CHECKS[p.type](value):
            violations.append(
                f"parameter '{p.name}' must be of type {p.type}, got {type(value).__name__}"
            )
        elif p.type == "array" and p.items in ("integer", "number"):
            for item in value:
                if not _TYPE_CHECKS[p.items](item):
                    violations.append(f"parameter '{p.name}' must contain only {p.items} items")
                    break
    for name in args:
        if name not in known:
            violations.append(f"unexpected parameter '{name}'")
    return args, violations


# -- dispatch --------------------------------------------------------------------


def _int(v) -> int:
    return int(v)


def dispatch(state: SessionState, call: ToolCall) -> ToolResult:
    """Execute one tool call against the session; never raises."""
    available = tool_catalog(state.kind)
    names = [s.name for s in available]
    if call.name not in names:
        return ToolResult(
            call_name=call.name or "<unnamed>",
            status="error",
            error={
                "kind": ErrorKind.INVALID_ARGUMENT.value,
                "message": f"unknown function '{call.name}'; available functions are "
                + ", ".join(names),
            },
        )
    spec = _SPEC_INDEX[call.name]
    args, violations = validate_arguments(spec, call)
    if violations:
        return ToolResult(
            call_name=call.name,
            status="error",
            error={
                "kind": ErrorKind.INVALID_ARGUMENT.value,
                "message": "invalid arguments: " + "; ".join(violations)
                + ". Expected schema: " + json.dumps(spec.to_json()["parameters"]),
            },
        )
    if call.name not in _SCENARIO_NAMES and call.name != INIT_TOOL and state.graph is None:
        return ToolResult(
            call_name=call.name,
            status="error",
            error={
                "kind": ErrorKind.INVALID_ARGUMENT.value,
                "message": f"no graph has been initialized yet; call {INIT_TOOL} first, "
                "choosing directed/weighted to match the problem",
            },
        )
    try:
        return _execute(state, call.name, args)
    except GraphError as exc:
        return ToolResult(call_name=call.name, status="error", error=exc.to_payload())
    except scenario.ScenarioError as exc:
        return ToolResult(
            call_name=call.name,
            status="error",
            error={"kind": ErrorKind.INVALID_ARGUMENT.value, "message": str(exc)},
        )
    except Exception as exc:  # noqa: BLE001 - errors must flow back into the loop
        return ToolResult(
            call_name=call.name,
            status="error",
            error={"kind": ErrorKind.INVALID_ARGUMENT.value,
                   "message": f"{type(exc).__name__}: {exc}"},
        )


def _execute(state: SessionState, name: str, args: dict) -> ToolResult:
    notices: list[str] = []
    payload: object = None
    g = state.graph

    if name == INIT_TOOL:
        if state.graph is not None:
            notices.append("the previous graph was discarded")
        state.graph = Graph(directed=bool(args.get("directed", False)),
                            weighted=bool(args.get("weighted", False)))
    elif name == "add_nodes":
        report = g.add_nodes([_int(n) for n in args["nodes"]])
        if report.already_present:
            notices.append(f"nodes already present: {report.already_present}")
    elif name == "add_node":
        report = g.add_nodes([_int(args["node"])])
        if report.already_present:
            notices.append(f"nodes already present: {report.already_present}")
    elif name == "add_edges":
        edges = args["edges"]
        weights = args.get("weights")
        report = g.add_edges(edges, weights)
        if report.created_nodes:
            notices.append(f"auto-created missing nodes {report.created_nodes}")
        if report.replaced:
            notices.append(f"overwrote existing edges {report.replaced}")
    elif name == "add_edge":
        report = g.add_edges([[_int(args["u"]), _int(args["v"])]],
                             None if args.get("weight") is None else [args["weight"]])
        if report.created_nodes:
            notices.append(f"auto-created missing nodes {report.created_nodes}")
        if report.replaced:
            notices.append(f"overwrote existing edges {report.replaced}")
    elif name == "delete_node":
        g.delete_node(_int(args["node"]))
    elif name == "delete_edge":
        g.delete_edge(_int(args["u"]), _int(args["v"]))
    elif name == "set_edge_weight":
        g.set_edge_weight(_int(args["u"]), _int(args["v"]), args["weight"])
    elif name == "to_undirected":
        if g.directed:
            state.graph = g.to_undirected()
        else:
            notices.append("the graph is already undirected")
    elif name == "get_nodes":
        payload = g.get_nodes()
    elif name == "get_edges":
        payload = g.get_edges()
    elif name == "node_count":
        payload = g.node_count()
    elif name == "edge_count":
        payload = g.edge_count()
    elif name == "has_node":
        payload = g.has_node(_int(args["node"]))
    elif name == "has_edge":
        payload = g.has_edge(_int(args["u"]), _int(args["v"]))
    elif name == "neighbors":
        payload = g.neighbors(_int(args["node"]))
    elif name == "degree":
        payload = g.degree(_int(args["node"]))
    elif name == "get_edge_weight":
        payload = _num(g.get_edge_weight(_int(args["u"]), _int(args["v"])))
    elif name == "find_shortest_path":
        payload = algorithms.find_shortest_path(g, _int(args["start"]), _int(args["end"])).path
    elif name == "find_shortest_distance":
        payload = _num(algorithms.find_shortest_distance(g, _int(args["start"]), _int(args["end"])))
    elif name == "check_connectivity":
        payload = algorithms.check_connectivity(g, _int(args["u"]), _int(args["v"]))
    elif name == "detect_cycle":
        has_cycle, witness = algorithms.detect_cycle(g)
        payload = {"has_cycle": has_cycle, "witness": witness}
    elif name == "topological_sort":
        payload = algorithms.topological_sort(g)
    elif name == "connected_components":
        components = algorithms.connected_components(g, notices)
        payload = [sorted(c) for c in components]
    elif name == "max_flow":
        plan = algorithms.max_flow(g, _int(args["source"]), _int(args["sink"]))
        payload = {"value": _num(plan.value), "flows": plan.flows_payload()}
    elif name == "max_bipartite_matching":
        matching = algorithms.max_bipartite_matching(g, notices)
        payload = {"pairs": matching.pairs_payload(), "size": matching.size}
    elif name == "is_bipartite":
        ok, detail = algorithms.is_bipartite(g, notices)
        if ok:
            payload = {"bipartite": True, "parts": [detail[0], detail[1]]}
        else:
            payload = {"bipartite": False, "odd_cycle": detail}
    elif name == "find_hamilton_path":
        ham_path = algorithms.find_hamilton_path(g, state.hamilton_time_budget, notices)
        payload = ham_path
        if ham_path is None:
            notices.append("no Hamilton path exists in this graph")
    elif name == "gnn_layers":
        raw = args["embeddings"]
        try:
            table = {int(k): list(v) for k, v in raw.items()}
        except (TypeError, ValueError):
            raise GraphError(ErrorKind.INVALID_ARGUMENT,
                             "embeddings must map node ids to numeric vectors") from None
        result = algorithms.gnn_layers(g, table, _int(args["layers"]), notices)
        payload = {str(n): result[n] for n in sorted(result)}
    elif name == "get_environment_data":
        payload = state.world.get_environment_data()
    elif name == "get_environment_map_data":
        payload = state.world.get_environment_map_data()
    elif name == "apply_event":
        event = scenario.WorldEvent(kind=args["kind"], location=args["location"],
                                    details=args.get("details") or {})
        payload = state.world.apply_event(event)
    else:  # pragma: no cover - catalog and dispatch table kept in sync
        raise GraphError(ErrorKind.INVALID_ARGUMENT, f"no handler for '{name}'")

    return ToolResult(
        call_name=name,
        status="ok",
        payload=payload,
        notices=notices,
        graph_mutated=name in _MUTATING,
    )
