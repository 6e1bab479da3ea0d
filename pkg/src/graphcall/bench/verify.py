"""Solution-set-aware grading.

For tasks with many correct solutions (topological order, shortest path,
Hamilton path, matching) any valid optimal answer passes; the ground truth
is only used for quantities with a single right value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .problems import (
    BIPARTITE_MATCHING,
    CONNECTIVITY,
    CYCLE,
    GNN,
    HAMILTON_PATH,
    MAXIMUM_FLOW,
    NLGraphProblem,
    SHORTEST_PATH,
    TOPOLOGICAL_SORT,
)


@dataclass
class Verdict:
    correct: bool
    reason: str
    wall_time: float = 0.0
    termination: str = "final_answer"


def _close(a: float, b: float) -> bool:
    return math.isclose(float(a), float(b), rel_tol=1e-9, abs_tol=1e-9)


def verify(problem: NLGraphProblem, answer: object | None, *, wall_time: float = 0.0,
           termination: str = "final_answer") -> Verdict:
    if answer is None:
        return Verdict(False, "no answer extracted", wall_time, termination)
    correct, reason = _grade(problem, answer)
    if correct and not reason:
        reason = "correct"
    return Verdict(correct, reason, wall_time, termination)


def _grade(problem: NLGraphProblem, answer: object) -> tuple[bool, str]:
    task = problem.task
    inst = problem.instance
    truth = problem.ground_truth
    if task == CONNECTIVITY:
        if not isinstance(answer, bool):
            return False, f"expected a yes/no answer, got {answer!r}"
        expected = truth["connected"]
        return answer == expected, "" if answer == expected else (
            f"answered {_yn(answer)} but the nodes are{'' if expected else ' not'} connected")
    if task == CYCLE:
        if not isinstance(answer, bool):
            return False, f"expected a yes/no answer, got {answer!r}"
        expected = truth["has_cycle"]
        return answer == expected, "" if answer == expected else (
            f"answered {_yn(answer)} but the graph has{' a' if expected else ' no'} cycle")
    if task == TOPOLOGICAL_SORT:
        return _grade_topological(inst, answer)
    if task == SHORTEST_PATH:
        return _grade_shortest(inst, truth, answer)
    if task == MAXIMUM_FLOW:
        return _grade_flow(inst, truth, answer)
    if task == BIPARTITE_MATCHING:
        return _grade_matching(inst, truth, answer)
    if task == HAMILTON_PATH:
        return _grade_hamilton(inst, answer)
    if task == GNN:
        return _grade_gnn(inst, truth, answer)
    return False, f"unknown task {task!r}"


def _yn(value: bool) -> str:
    return "yes" if value else "no"


def _grade_topological(inst, answer) -> tuple[bool, str]:
    if not isinstance(answer, list):
        return False, f"expected a node ordering, got {answer!r}"
    if sorted(answer) != list(range(inst.n)):
        return False, f"ordering is not a permutation of the {inst.n} nodes"
    position = {node: i for i, node in enumerate(answer)}
    for u, v in inst.edges:
        if position[u] >= position[v]:
            return False, f"constraint violated: node {u} must be visited before node {v}"
    return True, ""


def _edge_weight_map(inst) -> dict[tuple[int, int], float]:
    weights = {}
    for i, (u, v) in enumerate(inst.edges):
        w = 1.0 if inst.weights is None else float(inst.weights[i])
        weights[(u, v)] = w
        if not inst.directed:
            weights[(v, u)] = w
    return weights


def _grade_shortest(inst, truth, answer) -> tuple[bool, str]:
    if not isinstance(answer, dict):
        return False, f"expected a path and/or length, got {answer!r}"
    path = answer.get("path")
    length = answer.get("length")
    optimum = truth["length"]
    if path is not None:
        if not isinstance(path, list) or len(path) < 1:
            return False, "path is not a node list"
        if path[0] != inst.params["start"] or path[-1] != inst.params["end"]:
            return False, "path does not run between the queried nodes"
        if len(set(path)) != len(path):
            return False, "path repeats a node"
        weights = _edge_weight_map(inst)
        total = 0.0
        for a, b in zip(path, path[1:]):
            if (a, b) not in weights:
                return False, f"path uses a non-existent edge between node {a} and node {b}"
            total += weights[(a, b)]
        if not _close(total, optimum):
            return False, f"path has length {_fmt(total)} but the shortest is {_fmt(optimum)}"
        if length is not None and not _close(length, total):
            return False, f"stated length {_fmt(length)} disagrees with the path's length {_fmt(total)}"
        return True, ""
    if length is None:
        return False, "neither a path nor a length was given"
    if not _close(length, optimum):
        return False, f"stated length {_fmt(length)} but the shortest is {_fmt(optimum)}"
    return True, ""


def _fmt(x) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else str(x)


def _grade_flow(inst, truth, answer) -> tuple[bool, str]:
    if not isinstance(answer, dict) or "value" not in answer:
        return False, f"expected a flow value, got {answer!r}"
    value = answer["value"]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        return False, f"flow value {value!r} is not a number"
    optimum = truth["value"]
    if not _close(value, optimum):
        return False, f"flow value {_fmt(value)} is not the maximum {_fmt(optimum)}"
    flows = answer.get("flows")
    if flows is None:
        return True, ""
    capacities = {}
    for i, (u, v) in enumerate(inst.edges):
        capacities[(u, v)] = float(inst.weights[i])
    net = {node: 0.0 for node in range(inst.n)}
    for item in flows:
        if not isinstance(item, (list, tuple)) or len(item) != 3:
            return False, f"flow entry {item!r} is not a [u, v, flow] triple"
        u, v, f = item
        if (u, v) not in capacities:
            return False, f"plan routes flow over a non-existent edge ({u}, {v})"
        if f < -1e-9 or f > capacities[(u, v)] + 1e-9:
            return False, f"flow {_fmt(f)} on edge ({u}, {v}) violates its capacity {_fmt(capacities[(u, v)])}"
        net[u] += f
        net[v] -= f
    s, t = inst.params["source"], inst.params["sink"]
    for node, balance in net.items():
        if node in (s, t):
            continue
        if not _close(balance, 0.0):
            return False, f"flow is not conserved at node {node}"
    if not _close(net[s], value):
        return False, f"plan ships {_fmt(net[s])} out of the source, not the claimed {_fmt(value)}"
    return True, ""


def _grade_matching(inst, truth, answer) -> tuple[bool, str]:
    if not isinstance(answer, list):
        return False, f"expected a list of matched pairs, got {answer!r}"
    edge_set = {(u, v) for u, v in inst.edges} | {(v, u) for u, v in inst.edges}
    used: set[int] = set()
    for pair in answer:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            return False, f"matching entry {pair!r} is not a pair"
        u, v = pair
        if (u, v) not in edge_set:
            return False, f"pair ({u}, {v}) is not an edge of the graph"
        if u in used or v in used:
            return False, f"pair ({u}, {v}) reuses an already matched node"
        used.update((u, v))
    if len(answer) != truth["size"]:
        return False, (f"matching of size {len(answer)} is not maximum "
                       f"(the maximum is {truth['size']})")
    return True, ""


def _grade_hamilton(inst, answer) -> tuple[bool, str]:
    if not isinstance(answer, list):
        return False, f"expected a node path, got {answer!r}"
    if sorted(answer) != list(range(inst.n)):
        return False, "path does not visit every node exactly once"
    edge_set = {(u, v) for u, v in inst.edges} | {(v, u) for u, v in inst.edges}
    for a, b in zip(answer, answer[1:]):
        if (a, b) not in edge_set:
            return False, f"consecutive nodes {a} and {b} share no edge"
    return True, ""


def _grade_gnn(inst, truth, answer) -> tuple[bool, str]:
    if not isinstance(answer, dict):
        return False, f"expected per-node embeddings, got {answer!r}"
    expected = {int(k): list(v) for k, v in truth["embeddings"].items()}
    normalized = {}
    for k, v in answer.items():
        try:
            normalized[int(k)] = list(v)
        except (TypeError, ValueError):
            return False, f"embedding entry {k!r}: {v!r} is malformed"
    if set(normalized) != set(expected):
        return False, "embeddings do not cover exactly the graph's nodes"
    for node in sorted(expected):
        if normalized[node] != expected[node]:
            return False, (f"embedding of node {node} is {normalized[node]}, "
                           f"expected {expected[node]}")
    return True, ""


# -- provably wrong answers (mutation suite & the always-wrong solver) -----------


def canonical_answer(problem: NLGraphProblem) -> object:
    """The ground truth shaped exactly like an extracted answer."""
    task, truth = problem.task, problem.ground_truth
    if task == CONNECTIVITY:
        return truth["connected"]
    if task == CYCLE:
        return truth["has_cycle"]
    if task == TOPOLOGICAL_SORT:
        return list(truth["order"])
    if task == SHORTEST_PATH:
        return {"path": list(truth["path"]), "length": truth["length"]}
    if task == MAXIMUM_FLOW:
        return {"value": truth["value"], "flows": None}
    if task == BIPARTITE_MATCHING:
        return [list(p) for p in truth["pairs"]]
    if task == HAMILTON_PATH:
        return list(truth["path"])
    if task == GNN:
        return {int(k): list(v) for k, v in truth["embeddings"].items()}
    raise ValueError(f"unknown task {task!r}")


def mutated_answer(problem: NLGraphProblem) -> object:
    """A perturbed answer guaranteed to be wrong for this instance."""
    task, truth = problem.task, problem.ground_truth
    if task in (CONNECTIVITY, CYCLE):
        return not canonical_answer(problem)
    if task == TOPOLOGICAL_SORT:
        order = list(truth["order"])
        u, v = problem.instance.edges[0]
        i, j = order.index(u), order.index(v)
        order[i], order[j] = order[j], order[i]
        return order
    if task == SHORTEST_PATH:
        return {"path": None, "length": truth["length"] + 1}
    if task == MAXIMUM_FLOW:
        return {"value": truth["value"] - 1, "flows": None}
    if task == BIPARTITE_MATCHING:
        return [list(p) for p in truth["pairs"][:-1]]
    if task == HAMILTON_PATH:
        return list(truth["path"][:-1])
    if task == GNN:
        table = {int(k): list(v) for k, v in truth["embeddings"].items()}
        first = min(table)
        table[first] = [table[first][0] + 1] + table[first][1:]
        return table
    raise ValueError(f"unknown task {task!r}")
