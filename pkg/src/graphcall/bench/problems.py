"""Benchmark problem generation: eight graph-reasoning task families across
three difficulty tiers, each instance carrying an independently computed
ground truth.

Generation is a pure function of (task, difficulty, seed).  Ground truths
come from the oracles module, never from the algorithms the benchmark is
meant to grade.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .. import oracles
from ..graphs import Graph

FORMAT_TAG = "graphcall-problems/v1"

CONNECTIVITY = "connectivity"
CYCLE = "cycle"
TOPOLOGICAL_SORT = "topological_sort"
SHORTEST_PATH = "shortest_path"
MAXIMUM_FLOW = "maximum_flow"
BIPARTITE_MATCHING = "bipartite_matching"
HAMILTON_PATH = "hamilton_path"
GNN = "gnn"

TASKS = (
    CONNECTIVITY,
    CYCLE,
    TOPOLOGICAL_SORT,
    SHORTEST_PATH,
    MAXIMUM_FLOW,
    BIPARTITE_MATCHING,
    HAMILTON_PATH,
    GNN,
)

EASY, MEDIUM, HARD = "easy", "medium", "hard"
DIFFICULTIES = (EASY, MEDIUM, HARD)

SIZE_BANDS = {EASY: (5, 10), MEDIUM: (11, 20), HARD: (21, 35)}
WEIGHT_RANGES = {EASY: (1, 5), MEDIUM: (1, 8), HARD: (1, 10)}
GNN_LAYERS = {EASY: 1, MEDIUM: 2, HARD: 2}


@dataclass
class Instance:
    """The structured problem behind a prompt: a graph plus task parameters."""

    directed: bool
    weighted: bool
    n: int
    edges: list[list[int]]
    weights: list[int] | None = None
    params: dict = field(default_factory=dict)

    def to_graph(self) -> Graph:
        g = Graph(directed=self.directed, weighted=self.weighted)
        g.add_nodes(list(range(self.n)))
        if self.edges:
            g.add_edges(self.edges, self.weights)
        return g

    def to_json(self) -> dict:
        return {
            "directed": self.directed,
            "weighted": self.weighted,
            "n": self.n,
            "edges": self.edges,
            "weights": self.weights,
            "params": self.params,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        return cls(
            directed=data["directed"],
            weighted=data["weighted"],
            n=data["n"],
            edges=[list(e) for e in data["edges"]],
            weights=None if data.get("weights") is None else list(data["weights"]),
            params=data.get("params", {}),
        )


@dataclass
class NLGraphProblem:
    id: str
    task: str
    difficulty: str
    seed: int
    prompt: str
    instance: Instance
    ground_truth: dict

    def to_json(self) -> dict:
        return {
            "format": FORMAT_TAG,
            "id": self.id,
            "task": self.task,
            "difficulty": self.difficulty,
            "seed": self.seed,
            "prompt": self.prompt,
            "instance": self.instance.to_json(),
            "ground_truth": self.ground_truth,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NLGraphProblem":
        if data.get("format") != FORMAT_TAG:
            raise ValueError(f"unsupported problem format {data.get('format')!r}; expected {FORMAT_TAG}")
        return cls(
            id=data["id"],
            task=data["task"],
            difficulty=data["difficulty"],
            seed=data["seed"],
            prompt=data["prompt"],
            instance=Instance.from_json(data["instance"]),
            ground_truth=data["ground_truth"],
        )


def _rng(task: str, difficulty: str, seed: int) -> random.Random:
    return random.Random(f"{task}:{difficulty}:{seed}")


def _pick_size(rng: random.Random, difficulty: str) -> int:
    low, high = SIZE_BANDS[difficulty]
    return rng.randint(low, high)


def _sample_pairs(rng: random.Random, n: int, count: int, exclude: set | None = None) -> list[list[int]]:
    """Sample distinct unordered pairs without self-loops."""
    exclude = exclude or set()
    chosen: set[tuple[int, int]] = set()
    limit = n * (n - 1) // 2
    count = min(count, limit - len(exclude))
    while len(chosen) < count:
        u, v = rng.sample(range(n), 2)
        key = (min(u, v), max(u, v))
        if key not in exclude and key not in chosen:
            chosen.add(key)
    return [list(p) for p in sorted(chosen)]


def _spanning_tree(rng: random.Random, nodes: list[int]) -> list[list[int]]:
    order = list(nodes)
    rng.shuffle(order)
    return [[order[i], rng.choice(order[:i])] for i in range(1, len(order))]


def generate_problem(task: str, difficulty: str, seed: int) -> "NLGraphProblem":
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    if difficulty not in DIFFICULTIES:
        raise ValueError(f"unknown difficulty {difficulty!r}; expected one of {', '.join(DIFFICULTIES)}")
    rng = _rng(task, difficulty, seed)
    builder = _BUILDERS[task]
    instance, ground_truth = builder(rng, difficulty, seed)
    from .prompts import render_instance_prompt  # local import: prompts import this module

    problem = NLGraphProblem(
        id=f"{task}-{difficulty}-{seed}",
        task=task,
        difficulty=difficulty,
        seed=seed,
        prompt="",
        instance=instance,
        ground_truth=ground_truth,
    )
    problem.prompt = render_instance_prompt(problem)
    return problem


# -- per-task builders --------------------------------------------------------


def _build_connectivity(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    if seed % 2 == 0:
        # Two internally wired halves with no bridge, so some pairs disconnect.
        half = rng.randint(2, n - 2)
        part_a, part_b = list(range(half)), list(range(half, n))
        edges = []
        for part in (part_a, part_b):
            if len(part) > 1:
                edges.extend(_spanning_tree(rng, part))
        u = rng.choice(part_a)
        v = rng.choice(part_b)
    else:
        edges = _spanning_tree(rng, list(range(n)))
        edges.extend(_sample_pairs(rng, n, rng.randint(0, n // 2),
                                   exclude={(min(a, b), max(a, b)) for a, b in edges}))
        u, v = rng.sample(range(n), 2)
    edges = sorted([min(e), max(e)] for e in edges)
    instance = Instance(directed=False, weighted=False, n=n, edges=edges, params={"u": u, "v": v})
    truth = oracles.oracle_reachable(instance.to_graph(), u, v)
    return instance, {"connected": truth}


def _build_cycle(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    edges = _spanning_tree(rng, list(range(n)))
    if seed % 2 == 1:
        # A tree plus any extra edge owns a cycle.
        edges.extend(_sample_pairs(rng, n, rng.randint(1, 3),
                                   exclude={(min(a, b), max(a, b)) for a, b in edges}))
    else:
        edges = edges[: rng.randint(max(1, n - 4), n - 1)]
    edges = sorted([min(e), max(e)] for e in edges)
    instance = Instance(directed=False, weighted=False, n=n, edges=edges)
    return instance, {"has_cycle": oracles.ref_cycle(instance.to_graph())}


def _build_topological_sort(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    order = list(range(n))
    rng.shuffle(order)
    position = {node: i for i, node in enumerate(order)}
    wanted = max(1, int(1.5 * n))
    pairs = _sample_pairs(rng, n, wanted)
    edges = sorted(
        [a, b] if position[a] < position[b] else [b, a]
        for a, b in pairs
    )
    instance = Instance(directed=True, weighted=False, n=n, edges=edges)
    valid, _ = oracles.oracle_topo_valid(instance.to_graph(), order)
    assert valid
    return instance, {"order": order}


def _build_shortest_path(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    lo, hi = WEIGHT_RANGES[difficulty]
    edges = _spanning_tree(rng, list(range(n)))
    edges.extend(_sample_pairs(rng, n, rng.randint(1, n // 2),
                               exclude={(min(a, b), max(a, b)) for a, b in edges}))
    edges = sorted([min(e), max(e)] for e in edges)
    weights = [rng.randint(lo, hi) for _ in edges]
    u, v = rng.sample(range(n), 2)
    instance = Instance(directed=False, weighted=True, n=n, edges=edges, weights=weights,
                        params={"start": u, "end": v})
    result = oracles.ref_shortest(instance.to_graph(), u, v)
    assert result is not None
    length, path = result
    return instance, {"length": length, "path": path}


def _build_maximum_flow(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    lo, hi = WEIGHT_RANGES[difficulty]
    s, t = rng.sample(range(n), 2)
    # A guaranteed s->t chain through a few waypoints, then random arcs on top.
    waypoints = [x for x in range(n) if x not in (s, t)]
    rng.shuffle(waypoints)
    chain = [s] + waypoints[: rng.randint(1, max(1, n // 3))] + [t]
    arcs = {(a, b) for a, b in zip(chain, chain[1:])}
    for _ in range(int(1.5 * n)):
        a, b = rng.sample(range(n), 2)
        arcs.add((a, b))
    edges = sorted([a, b] for a, b in arcs)
    weights = [rng.randint(lo, hi) for _ in edges]
    instance = Instance(directed=True, weighted=True, n=n, edges=edges, weights=weights,
                        params={"source": s, "sink": t})
    value = oracles.ref_maxflow_value(instance.to_graph(), s, t)
    return instance, {"value": value}


def _build_bipartite_matching(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    a = max(2, n // 2)
    applicants = list(range(a))
    jobs = list(range(a, n))
    edges = []
    for u in applicants:
        for v in jobs:
            if rng.random() < 2.5 / max(1, len(jobs)):
                edges.append([u, v])
    if not edges:
        edges.append([rng.choice(applicants), rng.choice(jobs)])
    edges.sort()
    instance = Instance(directed=False, weighted=False, n=n, edges=edges,
                        params={"applicants": applicants, "jobs": jobs})
    size, pairs = oracles.ref_bipartite_matching(applicants, jobs, [tuple(e) for e in edges])
    return instance, {"size": size, "pairs": [list(p) for p in pairs]}


def _build_hamilton_path(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    planted = list(range(n))
    rng.shuffle(planted)
    edges = {(min(a, b), max(a, b)) for a, b in zip(planted, planted[1:])}
    extra = _sample_pairs(rng, n, rng.randint(0, max(1, n // 3)), exclude=edges)
    edges.update((a, b) for a, b in extra)
    instance = Instance(directed=False, weighted=False, n=n, edges=sorted([a, b] for a, b in edges))
    ok, _ = oracles.ref_hamilton_valid(instance.to_graph(), planted)
    assert ok
    return instance, {"path": planted}


def _build_gnn(rng: random.Random, difficulty: str, seed: int):
    n = _pick_size(rng, difficulty)
    edges = _spanning_tree(rng, list(range(n)))
    edges.extend(_sample_pairs(rng, n, rng.randint(0, n // 3),
                               exclude={(min(a, b), max(a, b)) for a, b in edges}))
    edges = sorted([min(e), max(e)] for e in edges)
    layers = GNN_LAYERS[difficulty]
    embeddings = {node: [rng.randint(0, 9), rng.randint(0, 9)] for node in range(n)}
    instance = Instance(directed=False, weighted=False, n=n, edges=edges,
                        params={"embeddings": {str(k): v for k, v in embeddings.items()},
                                "layers": layers})
    table = oracles.oracle_gnn(instance.to_graph(), embeddings, layers)
    return instance, {"embeddings": {str(k): table[k] for k in sorted(table)}}


_BUILDERS = {
    CONNECTIVITY: _build_connectivity,
    CYCLE: _build_cycle,
    TOPOLOGICAL_SORT: _build_topological_sort,
    SHORTEST_PATH: _build_shortest_path,
    MAXIMUM_FLOW: _build_maximum_flow,
    BIPARTITE_MATCHING: _build_bipartite_matching,
    HAMILTON_PATH: _build_hamilton_path,
    GNN: _build_gnn,
}


# -- dataset files ------------------------------------------------------------


def save_problems(problems: list[NLGraphProblem], root: str | Path) -> None:
    root = Path(root)
    for p in problems:
        directory = root / p.task / p.difficulty
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f"{p.id}.json").write_text(json.dumps(p.to_json(), indent=2) + "\n",
                                                encoding="utf-8")


def load_problems(root: str | Path) -> list[NLGraphProblem]:
    problems = []
    for path in sorted(Path(root).glob("*/*/*.json")):
        problems.append(NLGraphProblem.from_json(json.loads(path.read_text(encoding="utf-8"))))
    return problems


def load_external_problems(root: str | Path) -> tuple[list[NLGraphProblem], list[str]]:
    """Thin importer for text datasets laid out as <task>/<difficulty>/<id>.txt.

    Prompts are parsed back into structured instances with this package's own
    prompt grammar; files that do not parse are skipped and reported.
    """
    from .prompts import parse_prompt

    problems: list[NLGraphProblem] = []
    skipped: list[str] = []
    for path in sorted(Path(root).glob("*/*/*.txt")):
        if path.name.endswith(".answer.txt"):
            continue
        task = path.parent.parent.name
        difficulty = path.parent.name
        text = path.read_text(encoding="utf-8")
        try:
            instance = parse_prompt(task, text)
            truth = _ground_truth_for(task, instance)
        except Exception as exc:  # noqa: BLE001 - collect and report, never crash the import
            skipped.append(f"{path}: {exc}")
            continue
        problems.append(NLGraphProblem(
            id=path.stem,
            task=task,
            difficulty=difficulty if difficulty in DIFFICULTIES else EASY,
            seed=-1,
            prompt=text,
            instance=instance,
            ground_truth=truth,
        ))
    return problems, skipped


def _ground_truth_for(task: str, instance: Instance) -> dict:
    g = instance.to_graph()
    p = instance.params
    if task == CONNECTIVITY:
        return {"connected": oracles.oracle_reachable(g, p["u"], p["v"])}
    if task == CYCLE:
        return {"has_cycle": oracles.ref_cycle(g)}
    if task == TOPOLOGICAL_SORT:
        indeg = {node: 0 for node in g.get_nodes()}
        for (u, v), _ in g.edge_items():
            indeg[v] += 1
        order = []
        ready = sorted(node for node, d in indeg.items() if d == 0)
        while ready:
            node = ready.pop(0)
            order.append(node)
            for (a, b), _ in g.edge_items():
                if a == node:
                    indeg[b] -= 1
                    if indeg[b] == 0:
                        ready.append(b)
            ready.sort()
        if len(order) != g.node_count():
            raise ValueError("constraints contain a cycle; no valid ordering exists")
        return {"order": order}
    if task == SHORTEST_PATH:
        result = oracles.ref_shortest(g, p["start"], p["end"])
        if result is None:
            raise ValueError("no path between the queried nodes")
        length, path = result
        return {"length": length, "path": path}
    if task == MAXIMUM_FLOW:
        return {"value": oracles.ref_maxflow_value(g, p["source"], p["sink"])}
    if task == BIPARTITE_MATCHING:
        size, pairs = oracles.ref_bipartite_matching(
            p["applicants"], p["jobs"], [tuple(e) for e in instance.edges])
        return {"size": size, "pairs": [list(x) for x in pairs]}
    if task == HAMILTON_PATH:
        raise ValueError("imported Hamilton instances need a known path; not supported")
    if task == GNN:
        embeddings = {int(k): v for k, v in p["embeddings"].items()}
        table = oracles.oracle_gnn(g, embeddings, p["layers"])
        return {"embeddings": {str(k): table[k] for k in sorted(table)}}
    raise ValueError(f"unknown task {task!r}")
