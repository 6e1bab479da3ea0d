"""Natural-language rendering of benchmark instances, plus the inverse
parser used by the importer and the round-trip tests.

The topological-sort question ships in two variants: the original phrasing,
which reads dangerously close to a Hamilton-path request, and a revised
phrasing that names the topological order explicitly.
"""

from __future__ import annotations

import re

from .problems import (
    BIPARTITE_MATCHING,
    CONNECTIVITY,
    CYCLE,
    GNN,
    HAMILTON_PATH,
    Instance,
    MAXIMUM_FLOW,
    SHORTEST_PATH,
    TOPOLOGICAL_SORT,
)

VARIANT_ORIGINAL = "original"
VARIANT_REVISED = "revised"
PROMPT_VARIANTS = (VARIANT_ORIGINAL, VARIANT_REVISED)

TOPO_QUESTION_ORIGINAL = "Can all the nodes be visited? Give the solution."
TOPO_QUESTION_REVISED = (
    "Can all the nodes be visited in a valid topological order that satisfies these constraints?"
)

_UNDIRECTED_HEADER = (
    "In an undirected graph, (i,j) means that node i and node j are connected "
    "with an undirected edge."
)


def _pair_list(edges: list[list[int]]) -> str:
    return " ".join(f"({u},{v})" for u, v in edges)


def render_instance_prompt(problem, variant: str = VARIANT_ORIGINAL) -> str:
    if variant not in PROMPT_VARIANTS:
        raise ValueError(f"unknown prompt variant {variant!r}")
    inst = problem.instance
    task = problem.task
    n = inst.n
    last = n - 1
    if task == CONNECTIVITY:
        return (
            f"Determine if there is a path between two nodes in the graph. {_UNDIRECTED_HEADER} "
            f"The nodes are numbered from 0 to {last}, and the edges are: {_pair_list(inst.edges)}\n"
            f"Q: Is there a path between node {inst.params['u']} and node {inst.params['v']}?"
        )
    if task == CYCLE:
        return (
            f"Determine whether or not there is a cycle in an undirected graph. {_UNDIRECTED_HEADER} "
            f"The nodes are numbered from 0 to {last}, and the edges are: {_pair_list(inst.edges)}\n"
            f"Q: Is there a cycle in this graph?"
        )
    if task == TOPOLOGICAL_SORT:
        constraints = " ".join(
            f"node {u} should be visited before node {v}." for u, v in inst.edges
        )
        question = TOPO_QUESTION_ORIGINAL if variant == VARIANT_ORIGINAL else TOPO_QUESTION_REVISED
        return (
            f"In a directed graph with {n} nodes numbered from 0 to {last}: {constraints}\n"
            f"Q: {question}"
        )
    if task == SHORTEST_PATH:
        edges = ", ".join(
            f"an edge between node {u} and node {v} with weight {w}"
            for (u, v), w in zip(inst.edges, inst.weights)
        )
        return (
            f"In an undirected graph, the nodes are numbered from 0 to {last}, and the "
            f"edges are: {edges}.\n"
            f"Q: Give the shortest path from node {inst.params['start']} to node "
            f"{inst.params['end']} along with the path length."
        )
    if task == MAXIMUM_FLOW:
        edges = ", ".join(
            f"an edge from node {u} to node {v} with capacity {w}"
            for (u, v), w in zip(inst.edges, inst.weights)
        )
        return (
            f"In a directed graph, the nodes are numbered from 0 to {last}, and the "
            f"edges are: {edges}.\n"
            f"Q: What is the maximum flow from node {inst.params['source']} to node "
            f"{inst.params['sink']}?"
        )
    if task == BIPARTITE_MATCHING:
        applicants = inst.params["applicants"]
        jobs = inst.params["jobs"]
        interests = " ".join(
            f"Applicant {u} is interested in job {v}." for u, v in inst.edges
        )
        return (
            f"There are {len(applicants)} job applicants numbered from 0 to "
            f"{applicants[-1]}, and {len(jobs)} jobs numbered from {jobs[0]} to "
            f"{jobs[-1]}. Each applicant is interested in some of the jobs. {interests}\n"
            f"Q: Find an assignment of jobs to applicants in such a way that the maximum "
            f"number of applicants find a job they are interested in."
        )
    if task == HAMILTON_PATH:
        return (
            f"{_UNDIRECTED_HEADER} The nodes are numbered from 0 to {last}, and the "
            f"edges are: {_pair_list(inst.edges)}\n"
            f"Q: Is there a path in this graph that visits every node exactly once? "
            f"If yes, give the path."
        )
    if task == GNN:
        embeddings = inst.params["embeddings"]
        layers = inst.params["layers"]
        emb_lines = " ".join(
            f"node {k}: [{embeddings[str(k)][0]},{embeddings[str(k)][1]}]" for k in range(n)
        )
        return (
            f"{_UNDIRECTED_HEADER} The nodes are numbered from 0 to {last}, and the "
            f"edges are: {_pair_list(inst.edges)}\n"
            f"Embeddings: {emb_lines}\n"
            f"In each layer of a simple graph convolution, every node's embedding is "
            f"updated to be the sum of the embeddings of its neighbors.\n"
            f"Q: What is the embedding of each node after {layers} layers of simple "
            f"graph convolution?"
        )
    raise ValueError(f"unknown task {task!r}")


# -- parsing -----------------------------------------------------------------


def _parse_pairs(text: str) -> list[list[int]]:
    return [[int(a), int(b)] for a, b in re.findall(r"\((\d+),(\d+)\)", text)]


def _node_range(text: str) -> int:
    match = re.search(r"numbered from 0 to (\d+)", text)
    if not match:
        raise ValueError("prompt does not state the node range")
    return int(match.group(1)) + 1


def parse_prompt(task: str, text: str) -> Instance:
    """Inverse of render_instance_prompt for this package's own templates."""
    if task == CONNECTIVITY:
        n = _node_range(text)
        edges = _parse_pairs(text)
        q = re.search(r"between node (\d+) and node (\d+)\?", text)
        if not q:
            raise ValueError("missing connectivity question")
        return Instance(directed=False, weighted=False, n=n, edges=edges,
                        params={"u": int(q.group(1)), "v": int(q.group(2))})
    if task == CYCLE:
        return Instance(directed=False, weighted=False, n=_node_range(text),
                        edges=_parse_pairs(text))
    if task == TOPOLOGICAL_SORT:
        n = _node_range(text)
        edges = [[int(u), int(v)] for u, v in
                 re.findall(r"node (\d+) should be visited before node (\d+)", text)]
        return Instance(directed=True, weighted=False, n=n, edges=edges)
    if task == SHORTEST_PATH:
        n = _node_range(text)
        found = re.findall(r"an edge between node (\d+) and node (\d+) with weight (\d+)", text)
        q = re.search(r"from node (\d+) to node (\d+) along", text)
        if not q:
            raise ValueError("missing shortest-path question")
        return Instance(
            directed=False, weighted=True, n=n,
            edges=[[int(u), int(v)] for u, v, _ in found],
            weights=[int(w) for _, _, w in found],
            params={"start": int(q.group(1)), "end": int(q.group(2))},
        )
    if task == MAXIMUM_FLOW:
        n = _node_range(text)
        found = re.findall(r"an edge from node (\d+) to node (\d+) with capacity (\d+)", text)
        q = re.search(r"maximum flow from node (\d+) to node (\d+)\?", text)
        if not q:
            raise ValueError("missing max-flow question")
        return Instance(
            directed=True, weighted=True, n=n,
            edges=[[int(u), int(v)] for u, v, _ in found],
            weights=[int(w) for _, _, w in found],
            params={"source": int(q.group(1)), "sink": int(q.group(2))},
        )
    if task == BIPARTITE_MATCHING:
        header = re.search(
            r"There are (\d+) job applicants numbered from 0 to (\d+), and (\d+) jobs "
            r"numbered from (\d+) to (\d+)", text)
        if not header:
            raise ValueError("missing bipartite header")
        a = int(header.group(1))
        total = a + int(header.group(3))
        edges = [[int(u), int(v)] for u, v in
                 re.findall(r"Applicant (\d+) is interested in job (\d+)", text)]
        return Instance(directed=False, weighted=False, n=total, edges=edges,
                        params={"applicants": list(range(a)), "jobs": list(range(a, total))})
    if task == HAMILTON_PATH:
        return Instance(directed=False, weighted=False, n=_node_range(text),
                        edges=_parse_pairs(text))
    if task == GNN:
        n = _node_range(text)
        edges = _parse_pairs(text)
        embeddings = {
            k: [int(x), int(y)]
            for k, x, y in re.findall(r"node (\d+): \[(-?\d+),(-?\d+)\]", text)
        }
        layers = re.search(r"after (\d+) layers", text)
        if not layers or len(embeddings) != n:
            raise ValueError("missing embeddings or layer count")
        return Instance(directed=False, weighted=False, n=n, edges=edges,
                        params={"embeddings": embeddings, "layers": int(layers.group(1))})
    raise ValueError(f"unknown task {task!r}")
