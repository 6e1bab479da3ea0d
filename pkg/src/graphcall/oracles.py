"""Independent reference implementations used by generators, verifiers, and
property tests.

Two layers, both deliberately sharing no code with the algorithms module:

* ``oracle_*``: exhaustive desk-scale truth (path enumeration, cut
  enumeration, permutation search) with hard size caps so they can never
  silently dominate a test run.
* ``ref_*``: naive polynomial second implementations (Bellman-Ford,
  union-find, depth-first augmentation) used where generated instances are
  too large for exhaustion.
"""

from __future__ import annotations

import itertools
import math

from .graphs import Graph, NodeId


class OracleSizeError(Exception):
    """Raised when an instance exceeds an oracle's hard size cap."""


def _cap(g: Graph, limit: int, what: str = "nodes") -> None:
    count = g.node_count() if what == "nodes" else g.edge_count()
    if count > limit:
        raise OracleSizeError(f"oracle limited to {limit} {what}, got {count}")


def _undirected_adj(g: Graph) -> dict[NodeId, set[NodeId]]:
    adj: dict[NodeId, set[NodeId]] = {n: set() for n in g.get_nodes()}
    for (u, v), _ in g.edge_items():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _directed_adj(g: Graph) -> dict[NodeId, set[NodeId]]:
    adj: dict[NodeId, set[NodeId]] = {n: set() for n in g.get_nodes()}
    for (u, v), _ in g.edge_items():
        adj[u].add(v)
        if not g.directed:
            adj[v].add(u)
    return adj


# -- exhaustive oracles ---------------------------------------------------------


def oracle_reachable(g: Graph, u: NodeId, v: NodeId) -> bool:
    """Frontier expansion until fixpoint."""
    _cap(g, 64)
    adj = _directed_adj(g)
    reached = {u}
    while True:
        grown = set(reached)
        for a in reached:
            grown |= adj[a]
        if grown == reached:
            return v in reached
        reached = grown


def oracle_shortest(g: Graph, u: NodeId, v: NodeId) -> float | None:
    """Minimum over every simple path from u to v (None when there is none)."""
    _cap(g, 12)
    weights: dict[tuple[NodeId, NodeId], float] = {}
    for (a, b), w in g.edge_items():
        weights[(a, b)] = w
        if not g.directed:
            weights[(b, a)] = w
    adj = _directed_adj(g)
    best: list[float] = [math.inf]

    def walk(node: NodeId, dist: float, seen: set[NodeId]) -> None:
        if node == v:
            best[0] = min(best[0], dist)
            return
        if dist >= best[0]:
            return
        for nxt in sorted(adj[node]):
            if nxt in seen:
                continue
            walk(nxt, dist + weights[(node, nxt)], seen | {nxt})

    walk(u, 0.0, {u})
    return None if math.isinf(best[0]) else best[0]


def oracle_cycle(g: Graph) -> bool:
    """Exhaustive simple-path search for a closed walk."""
    _cap(g, 12)
    for (a, b), _ in g.edge_items():
        if a == b:
            return True
    adj = _directed_adj(g)
    min_len = 2 if g.directed else 3

    def walk(start: NodeId, node: NodeId, seen: set[NodeId], hops: int, came_from: NodeId | None) -> bool:
        for nxt in adj[node]:
            if nxt == start and hops + 1 >= min_len:
                if g.directed or nxt != came_from or hops + 1 > 2:
                    return True
            if nxt not in seen:
                if walk(start, nxt, seen | {nxt}, hops + 1, node):
                    return True
        return False

    for start in g.get_nodes():
        if walk(start, start, {start}, 0, None):
            return True
    return False


def oracle_topo_valid(g: Graph, ordering: list[NodeId]) -> tuple[bool, str]:
    """Direct constraint check of a proposed topological ordering."""
    nodes = g.get_nodes()
    if sorted(ordering) != nodes:
        return False, f"ordering is not a permutation of the {len(nodes)} nodes"
    position = {n: i for i, n in enumerate(ordering)}
    for (u, v), _ in g.edge_items():
        if position[u] >= position[v]:
            return False, f"constraint violated: node {u} must come before node {v}"
    return True, "all constraints satisfied"


def oracle_maxflow_value(g: Graph, s: NodeId, t: NodeId) -> float:
    """Minimum capacity over every enumerated s-t cut (max-flow equals min-cut)."""
    _cap(g, 10)
    others = [n for n in g.get_nodes() if n not in (s, t)]
    best = math.inf
    for mask in range(1 << len(others)):
        side = {s} | {others[i] for i in range(len(others)) if mask >> i & 1}
        cut = 0.0
        for (u, v), c in g.edge_items():
            if u == v:
                continue
            if g.directed:
                if u in side and v not in side:
                    cut += c
            elif (u in side) != (v in side):
                cut += c
        best = min(best, cut)
    return best


def oracle_max_matching(g: Graph) -> int:
    """Cardinality of the largest matching, by enumerating matchings."""
    _cap(g, 20, "edges")
    edges = [(u, v) for (u, v), _ in g.edge_items() if u != v]

    def best(i: int, used: set[NodeId]) -> int:
        if i == len(edges):
            return 0
        # Bound: even pairing every remaining edge cannot beat the rest.
        remaining = len(edges) - i
        result = best(i + 1, used)
        if result >= remaining:
            return result
        u, v = edges[i]
        if u not in used and v not in used:
            result = max(result, 1 + best(i + 1, used | {u, v}))
        return result

    return best(0, set())


def oracle_hamilton_exists(g: Graph) -> bool:
    """Permutation enumeration (undirected view), reversal symmetry halved."""
    _cap(g, 9)
    nodes = g.get_nodes()
    n = len(nodes)
    if n <= 1:
        return True
    adj = _undirected_adj(g)
    for perm in itertools.permutations(nodes):
        if perm[0] > perm[-1]:
            continue
        ok = True
        prev = perm[0]
        for nxt in perm[1:]:
            if nxt not in adj[prev]:
                ok = False
                break
            prev = nxt
        if ok:
            return True
    return False


def oracle_gnn(g: Graph, embeddings: dict[NodeId, list], layers: int) -> dict[NodeId, list]:
    """Literal layer-by-layer neighbor-sum loop over the edge list."""
    adj = _undirected_adj(g)
    nodes = g.get_nodes()
    dim = len(next(iter(embeddings.values()))) if embeddings else 0
    table = {n: list(embeddings[n]) for n in nodes}
    for _ in range(layers):
        updated: dict[NodeId, list] = {}
        for n in nodes:
            acc = [0] * dim
            for m in adj[n]:
                for i in range(dim):
                    acc[i] += table[m][i]
            updated[n] = acc
        table = updated
    return table


def oracle_components(g: Graph) -> list[set[NodeId]]:
    """Union-find over the edge list."""
    parent = {n: n for n in g.get_nodes()}

    def find(x: NodeId) -> NodeId:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v), _ in g.edge_items():
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[NodeId, set[NodeId]] = {}
    for n in g.get_nodes():
        groups.setdefault(find(n), set()).add(n)
    return sorted(groups.values(), key=min)


# -- polynomial references (for instances beyond the exhaustive caps) ------------


def ref_shortest(g: Graph, u: NodeId, v: NodeId) -> tuple[float, list[NodeId]] | None:
    """Bellman-Ford relaxation with predecessor reconstruction."""
    arcs: list[tuple[NodeId, NodeId, float]] = []
    for (a, b), w in g.edge_items():
        arcs.append((a, b, w))
        if not g.directed:
            arcs.append((b, a, w))
    dist: dict[NodeId, float] = {n: math.inf for n in g.get_nodes()}
    pred: dict[NodeId, NodeId] = {}
    dist[u] = 0.0
    for _ in range(max(0, g.node_count() - 1)):
        changed = False
        for a, b, w in arcs:
            if dist[a] + w < dist[b] - 1e-12:
                dist[b] = dist[a] + w
                pred[b] = a
                changed = True
        if not changed:
            break
    if math.isinf(dist[v]):
        return None
    path = [v]
    while path[-1] != u:
        path.append(pred[path[-1]])
    path.reverse()
    return dist[v], path


def ref_cycle(g: Graph) -> bool:
    """Undirected: union-find edge counting; directed: in-degree elimination."""
    if any(u == v for (u, v), _ in g.edge_items()):
        return True
    if not g.directed:
        parent = {n: n for n in g.get_nodes()}

        def find(x: NodeId) -> NodeId:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (u, v), _ in g.edge_items():
            ru, rv = find(u), find(v)
            if ru == rv:
                return True
            parent[ru] = rv
        return False
    indegree = {n: 0 for n in g.get_nodes()}
    out: dict[NodeId, list[NodeId]] = {n: [] for n in g.get_nodes()}
    for (u, v), _ in g.edge_items():
        indegree[v] += 1
        out[u].append(v)
    queue = [n for n, d in indegree.items() if d == 0]
    removed = 0
    while queue:
        n = queue.pop()
        removed += 1
        for m in out[n]:
            indegree[m] -= 1
            if indegree[m] == 0:
                queue.append(m)
    return removed < g.node_count()


def ref_maxflow(g: Graph, s: NodeId, t: NodeId) -> tuple[float, dict[NodeId, dict[NodeId, float]]]:
    """Depth-first augmenting paths over a residual map; returns (value, residual)."""
    residual: dict[NodeId, dict[NodeId, float]] = {n: {} for n in g.get_nodes()}
    for (u, v), c in g.edge_items():
        if u == v:
            continue
        residual[u][v] = residual[u].get(v, 0.0) + c
        residual[v].setdefault(u, 0.0)
        if not g.directed:
            residual[v][u] += c

    def augment(node: NodeId, limit: float, seen: set[NodeId]) -> float:
        if node == t:
            return limit
        seen.add(node)
        for nxt, r in sorted(residual[node].items()):
            if r <= 1e-12 or nxt in seen:
                continue
            pushed = augment(nxt, min(limit, r), seen)
            if pushed > 0:
                residual[node][nxt] -= pushed
                residual[nxt][node] = residual[nxt].get(node, 0.0) + pushed
                return pushed
        return 0.0

    total = 0.0
    while True:
        pushed = augment(s, math.inf, set())
        if pushed <= 0:
            return total, residual
        total += pushed


def ref_maxflow_value(g: Graph, s: NodeId, t: NodeId) -> float:
    return ref_maxflow(g, s, t)[0]


def ref_bipartite_matching(
    left: list[NodeId], right: list[NodeId], edges: list[tuple[NodeId, NodeId]]
) -> tuple[int, list[tuple[NodeId, NodeId]]]:
    """Maximum matching by reduction to unit-capacity flow; returns (size, pairs)."""
    if not left or not right or not edges:
        return 0, []
    flow_g = Graph(directed=True, weighted=True)
    source = max(left + right) + 1
    sink = source + 1
    flow_g.add_nodes(list(left) + list(right) + [source, sink])
    for u in left:
        flow_g.add_edge(source, u, 1)
    for v in right:
        flow_g.add_edge(v, sink, 1)
    left_set = set(left)
    oriented = []
    for u, v in edges:
        a, b = (u, v) if u in left_set else (v, u)
        oriented.append((a, b))
        flow_g.add_edge(a, b, 1)
    value, residual = ref_maxflow(flow_g, source, sink)
    pairs = sorted({(a, b) for a, b in oriented if residual[a].get(b, 1.0) < 0.5})
    return int(value), pairs


def ref_hamilton_valid(g: Graph, path: list[NodeId]) -> tuple[bool, str]:
    """Polynomial validity check of a claimed Hamilton path."""
    nodes = g.get_nodes()
    if sorted(path) != nodes:
        return False, "path does not visit every node exactly once"
    adj = _undirected_adj(g)
    for a, b in zip(path, path[1:]):
        if b not in adj[a]:
            return False, f"nodes {a} and {b} are consecutive in the path but share no edge"
    return True, "valid Hamilton path"
