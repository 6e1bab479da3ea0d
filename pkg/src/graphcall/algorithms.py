"""Graph operations backing the function catalog.

Everything here is deterministic: ties are always broken by ascending node
id, so identical call sequences produce identical results.  Operations that
only make sense on undirected graphs accept a directed one, convert it
internally, and report the conversion through the optional ``notices`` sink.
"""

from __future__ import annotations

import heapq
import math
import time

from .graphs import ErrorKind, FlowPlan, Graph, GraphError, Matching, NodeId, PathResult

_EPS = 1e-9


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=_EPS)


def _require_nodes(g: Graph, *nodes: NodeId) -> None:
    for n in nodes:
        if not g.has_node(n):
            raise GraphError(ErrorKind.NO_SUCH_NODE, f"node {n} is not in the graph")


def _note(notices: list[str] | None, text: str) -> None:
    if notices is not None:
        notices.append(text)


def _as_undirected(g: Graph, operation: str, notices: list[str] | None) -> Graph:
    if not g.directed:
        return g
    _note(notices, f"{operation} requires an undirected graph; the directed input was converted internally")
    return g.to_undirected()


# -- reachability & shortest paths -------------------------------------------


def check_connectivity(g: Graph, u: NodeId, v: NodeId) -> bool:
    _require_nodes(g, u, v)
    if u == v:
        return True
    seen = {u}
    frontier = [u]
    while frontier:
        nxt: list[NodeId] = []
        for a in frontier:
            for b in g.out_adjacency(a):
                if b == v:
                    return True
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return False


def _dijkstra(g: Graph, source: NodeId, reverse: bool = False) -> dict[NodeId, float]:
    dist = {source: 0.0}
    heap = [(0.0, source)]
    adjacency = g.in_adjacency if reverse else g.out_adjacency
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, math.inf):
            continue
        for v, w in adjacency(u).items():
            nd = d + w
            if nd < dist.get(v, math.inf) - _EPS:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def find_shortest_path(g: Graph, start: NodeId, end: NodeId) -> PathResult:
    """Minimum-weight path (minimum hops when unweighted).

    Among equally short paths the lexicographically smallest node sequence is
    returned, found by walking tight edges in ascending-id order.
    """
    _require_nodes(g, start, end)
    dist_from = _dijkstra(g, start)
    if end not in dist_from:
        raise GraphError(ErrorKind.NO_PATH, f"no path exists between node {start} and node {end}")
    total = dist_from[end]
    dist_to = _dijkstra(g, end, reverse=True)

    # Depth-first over tight edges, smallest neighbor first; the first
    # complete simple path is the lexicographic minimum among optimal paths.
    path = [start]
    on_path = {start}
    acc = [0.0]

    def extend(u: NodeId) -> bool:
        if u == end:
            return True
        for v, w in sorted(g.out_adjacency(u).items()):
            if v in on_path:
                continue
            if not _close(acc[-1] + w + dist_to.get(v, math.inf), total):
                continue
            path.append(v)
            on_path.add(v)
            acc.append(acc[-1] + w)
            if extend(v):
                return True
            path.pop()
            on_path.discard(v)
            acc.pop()
        return False

    if not extend(start):  # pragma: no cover - unreachable once dist_from[end] exists
        raise GraphError(ErrorKind.NO_PATH, f"no path exists between node {start} and node {end}")
    return PathResult(path=path, length=total)


def find_shortest_distance(g: Graph, start: NodeId, end: NodeId) -> float:
    return find_shortest_path(g, start, end).length


# -- cycles & orderings -------------------------------------------------------


def detect_cycle(g: Graph) -> tuple[bool, list[NodeId] | None]:
    """Return (has_cycle, witness); the witness closes on its first node."""
    for (u, v), _ in g.edge_items():
        if u == v:
            return True, [u, u]
    if g.directed:
        return _directed_cycle(g)
    return _undirected_cycle(g)


def _directed_cycle(g: Graph) -> tuple[bool, list[NodeId] | None]:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in g.get_nodes()}
    parent: dict[NodeId, NodeId] = {}
    for root in g.get_nodes():
        if color[root] != WHITE:
            continue
        stack: list[tuple[NodeId, int]] = [(root, 0)]
        color[root] = GRAY
        while stack:
            node, idx = stack[-1]
            succs = g.neighbors(node)
            if idx < len(succs):
                stack[-1] = (node, idx + 1)
                nxt = succs[idx]
                if color[nxt] == GRAY:
                    cycle = [nxt, node]
                    cur = node
                    while cur != nxt:
                        cur = parent[cur]
                        cycle.append(cur)
                    cycle.reverse()  # now starts and ends at nxt
                    return True, cycle
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    parent[nxt] = node
                    stack.append((nxt, 0))
            else:
                color[node] = BLACK
                stack.pop()
    return False, None


def _undirected_cycle(g: Graph) -> tuple[bool, list[NodeId] | None]:
    visited: set[NodeId] = set()
    parent: dict[NodeId, NodeId | None] = {}
    for root in g.get_nodes():
        if root in visited:
            continue
        visited.add(root)
        parent[root] = None
        stack = [root]
        while stack:
            node = stack.pop()
            for nxt in g.neighbors(node):
                if nxt == parent[node]:
                    continue
                if nxt in visited:
                    # Back edge: walk both endpoints up to their meeting point.
                    left = [node]
                    while parent[left[-1]] is not None:
                        left.append(parent[left[-1]])
                    anc = set(left)
                    right = [nxt]
                    while right[-1] not in anc:
                        right.append(parent[right[-1]])
                    meet = right[-1]
                    cycle = left[: left.index(meet) + 1]
                    cycle.reverse()
                    cycle.extend(right[:-1])
                    cycle.append(cycle[0])
                    return True, cycle
                visited.add(nxt)
                parent[nxt] = node
                stack.append(nxt)
    return False, None


def topological_sort(g: Graph) -> list[NodeId]:
    """Kahn's algorithm with a min-heap, so the smallest ready id goes first."""
    if not g.directed:
        raise GraphError(
            ErrorKind.INVALID_ARGUMENT,
            "topological sort needs a directed graph; re-initialize with directed=true "
            "and re-add the ordering constraints as directed edges",
        )
    indegree = {n: len(g.in_adjacency(n)) for n in g.get_nodes()}
    ready = [n for n in g.get_nodes() if indegree[n] == 0]
    heapq.heapify(ready)
    order: list[NodeId] = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for m in g.neighbors(n):
            indegree[m] -= 1
            if indegree[m] == 0:
                heapq.heappush(ready, m)
    if len(order) < g.node_count():
        _, witness = _directed_cycle(g)
        raise GraphError(ErrorKind.NOT_A_DAG, "the graph contains a cycle, so no topological ordering exists", witness)
    return order


# -- flow ---------------------------------------------------------------------


class _Arc:
    __slots__ = ("to", "residual", "partner")

    def __init__(self, to: NodeId, residual: float):
        self.to = to
        self.residual = residual
        self.partner: "_Arc" | None = None


def max_flow(g: Graph, source: NodeId, sink: NodeId) -> FlowPlan:
    """Shortest-augmenting-path max flow; exact on integer capacities.

    Undirected edges carry capacity in both directions; the plan reports the
    net flow of every edge, oriented the way the flow actually runs.
    """
    _require_nodes(g, source, sink)
    if source == sink:
        raise GraphError(ErrorKind.INVALID_ARGUMENT, "source and sink must be different nodes")

    arcs: dict[tuple[NodeId, NodeId], _Arc] = {}
    adjacency: dict[NodeId, list[NodeId]] = {n: [] for n in g.get_nodes()}

    def ensure(u: NodeId, v: NodeId) -> _Arc:
        if (u, v) not in arcs:
            fwd, bwd = _Arc(v, 0.0), _Arc(u, 0.0)
            fwd.partner, bwd.partner = bwd, fwd
            arcs[(u, v)], arcs[(v, u)] = fwd, bwd
            adjacency[u].append(v)
            adjacency[v].append(u)
        return arcs[(u, v)]

    for (u, v), cap in g.edge_items():
        if u == v:
            continue
        ensure(u, v).residual += cap
        if not g.directed:
            ensure(v, u).residual += cap
    for nbrs in adjacency.values():
        nbrs.sort()

    value = 0.0
    while True:
        # BFS for the shortest augmenting path, smallest ids first.
        prev: dict[NodeId, NodeId] = {source: source}
        frontier = [source]
        while frontier and sink not in prev:
            nxt: list[NodeId] = []
            for a in frontier:
                for b in adjacency[a]:
                    if b not in prev and arcs[(a, b)].residual > _EPS:
                        prev[b] = a
                        nxt.append(b)
            frontier = nxt
        if sink not in prev:
            break
        bottleneck = math.inf
        node = sink
        while node != source:
            bottleneck = min(bottleneck, arcs[(prev[node], node)].residual)
            node = prev[node]
        node = sink
        while node != source:
            arc = arcs[(prev[node], node)]
            arc.residual -= bottleneck
            arc.partner.residual += bottleneck
            node = prev[node]
        value += bottleneck

    edge_flows: dict[tuple[NodeId, NodeId], float] = {}
    for (u, v), cap in g.edge_items():
        if u == v:
            edge_flows[(u, v)] = 0.0
            continue
        if g.directed:
            flow = cap - arcs[(u, v)].residual
            edge_flows[(u, v)] = max(0.0, flow)
        else:
            net = (arcs[(v, u)].residual - arcs[(u, v)].residual) / 2.0
            if net >= 0:
                edge_flows[(u, v)] = net
            else:
                edge_flows[(v, u)] = -net
    return FlowPlan(value=value, edge_flows=edge_flows)


# -- bipartiteness & matching --------------------------------------------------


def is_bipartite(g: Graph, notices: list[str] | None = None) -> tuple[bool, object]:
    """Two-color the graph; returns (True, (part0, part1)) or (False, odd_cycle)."""
    ug = _as_undirected(g, "bipartiteness checking", notices)
    for (u, v), _ in ug.edge_items():
        if u == v:
            return False, [u, u]
    color: dict[NodeId, int] = {}
    parent: dict[NodeId, NodeId | None] = {}
    for root in ug.get_nodes():
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        frontier = [root]
        while frontier:
            nxt_frontier: list[NodeId] = []
            for a in frontier:
                for b in ug.neighbors(a):
                    if b not in color:
                        color[b] = 1 - color[a]
                        parent[b] = a
                        nxt_frontier.append(b)
                    elif color[b] == color[a]:
                        return False, _odd_cycle(parent, a, b)
            frontier = nxt_frontier
    part0 = sorted(n for n in color if color[n] == 0)
    part1 = sorted(n for n in color if color[n] == 1)
    return True, (part0, part1)


def _odd_cycle(parent: dict[NodeId, NodeId | None], a: NodeId, b: NodeId) -> list[NodeId]:
    left = [a]
    while parent[left[-1]] is not None:
        left.append(parent[left[-1]])
    ancestors = set(left)
    right = [b]
    while right[-1] not in ancestors:
        right.append(parent[right[-1]])
    meet = right[-1]
    # meet..a along tree edges, the offending edge a-b, then b back up to meet.
    cycle = list(reversed(left[: left.index(meet) + 1]))
    cycle.extend(right[:-1])
    cycle.append(cycle[0])
    return cycle


def max_bipartite_matching(g: Graph, notices: list[str] | None = None) -> Matching:
    ug = _as_undirected(g, "bipartite matching", notices)
    ok, detail = is_bipartite(ug)
    if not ok:
        raise GraphError(
            ErrorKind.NOT_BIPARTITE,
            "the graph is not bipartite (it contains an odd cycle); "
            "rebuild it with edges only between the two sides",
            detail,
        )
    part0, _ = detail
    left = set(part0)
    match_of: dict[NodeId, NodeId] = {}

    def try_augment(u: NodeId, seen: set[NodeId]) -> bool:
        for v in ug.neighbors(u):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_of or try_augment(match_of[v], seen):
                match_of[v] = u
                return True
        return False

    for u in sorted(left):
        try_augment(u, set())
    pairs = {(u, v) if u <= v else (v, u) for v, u in match_of.items()}
    return Matching(pairs=pairs)


# -- Hamilton path -------------------------------------------------------------


def find_hamilton_path(
    g: Graph,
    time_budget: float | None = None,
    notices: list[str] | None = None,
) -> list[NodeId] | None:
    """Plain backtracking search for a path visiting every node exactly once.

    Start nodes and neighbor expansion both go in ascending id order, so the
    result is deterministic.  The search is exponential by nature; an optional
    wall-clock budget aborts with a Timeout error instead of hanging.
    """
    ug = _as_undirected(g, "Hamilton path search", notices)
    nodes = ug.get_nodes()
    n = len(nodes)
    if n == 0:
        return []
    if n == 1:
        return [nodes[0]]
    # Degree checks: isolated nodes are unreachable, and more than two
    # degree-one nodes cannot all be path endpoints.
    degrees = {u: len([v for v in ug.neighbors(u) if v != u]) for u in nodes}
    if any(d == 0 for d in degrees.values()):
        return None
    if sum(1 for d in degrees.values() if d == 1) > 2:
        return None

    deadline = None if time_budget is None else time.monotonic() + time_budget

    def search(path: list[NodeId], visited: set[NodeId]) -> list[NodeId] | None:
        if deadline is not None and time.monotonic() > deadline:
            raise GraphError(
                ErrorKind.TIMEOUT,
                f"Hamilton path search exceeded its {time_budget} s budget; "
                "the backtracking search is exponential on large graphs",
            )
        if len(path) == n:
            return list(path)
        for nxt in ug.neighbors(path[-1]):
            if nxt in visited:
                continue
            path.append(nxt)
            visited.add(nxt)
            found = search(path, visited)
            if found is not None:
                return found
            path.pop()
            visited.discard(nxt)
        return None

    for start in nodes:
        found = search([start], {start})
        if found is not None:
            return found
    return None


# -- message passing & components ----------------------------------------------


def gnn_layers(
    g: Graph,
    embeddings: dict[NodeId, list],
    layers: int,
    notices: list[str] | None = None,
) -> dict[NodeId, list]:
    """Synchronous neighbor-sum updates: each layer replaces every embedding
    with the sum of its neighbors' previous embeddings (the node itself is
    excluded unless it has a self-loop)."""
    if isinstance(layers, bool) or not isinstance(layers, int) or layers < 0:
        raise GraphError(ErrorKind.INVALID_ARGUMENT, f"layer count must be a non-negative integer, got {layers!r}")
    nodes = g.get_nodes()
    missing = [n for n in nodes if n not in embeddings]
    if missing:
        raise GraphError(ErrorKind.INVALID_ARGUMENT, f"missing embeddings for nodes {missing}")
    dims = {len(embeddings[n]) for n in nodes}
    if len(dims) > 1:
        raise GraphError(ErrorKind.INVALID_ARGUMENT, f"embeddings must share one dimension, got sizes {sorted(dims)}")
    dim = dims.pop() if dims else 0
    ug = _as_undirected(g, "message passing", notices)
    current = {n: list(embeddings[n]) for n in nodes}
    for _ in range(layers):
        nxt = {}
        for n in nodes:
            total = [0] * dim
            for m in ug.neighbors(n):
                vec = current[m]
                for i in range(dim):
                    total[i] += vec[i]
            nxt[n] = total
        current = nxt
    return current


def connected_components(g: Graph, notices: list[str] | None = None) -> list[set[NodeId]]:
    """Components of the (underlying) undirected graph, ordered by smallest member."""
    ug = _as_undirected(g, "connected components", notices)
    seen: set[NodeId] = set()
    components: list[set[NodeId]] = []
    for root in ug.get_nodes():
        if root in seen:
            continue
        comp = {root}
        frontier = [root]
        seen.add(root)
        while frontier:
            nxt: list[NodeId] = []
            for a in frontier:
                for b in ug.neighbors(a):
                    if b not in seen:
                        seen.add(b)
                        comp.add(b)
                        nxt.append(b)
            frontier = nxt
        components.append(comp)
    return components
