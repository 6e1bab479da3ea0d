from __future__ import annotations

import json

import pytest

from graphcall import bench, oracles
from graphcall.bench import (
    TOPO_QUESTION_REVISED,
    canonical_answer,
    extract_answer,
    generate_problem,
    mutated_answer,
    parse_prompt,
    render_instance_prompt,
    verify,
)
from graphcall.bench.problems import SIZE_BANDS, load_external_problems, load_problems, save_problems


# -- generation ------------------------------------------------------------------


@pytest.mark.parametrize("task", bench.TASKS)
@pytest.mark.parametrize("difficulty", bench.DIFFICULTIES)
def test_generation_band_and_determinism(task, difficulty):
    problem = generate_problem(task, difficulty, 42)
    low, high = SIZE_BANDS[difficulty]
    assert low <= problem.instance.n <= high
    again = generate_problem(task, difficulty, 42)
    assert problem.to_json() == again.to_json()
    different = generate_problem(task, difficulty, 43)
    assert different.to_json() != problem.to_json()


def test_connectivity_ground_truth_from_bfs():
    problem = generate_problem("connectivity", "easy", 4)
    g = problem.instance.to_graph()
    p = problem.instance.params
    assert problem.ground_truth["connected"] == oracles.oracle_reachable(g, p["u"], p["v"])


def test_connectivity_mixes_outcomes():
    outcomes = {generate_problem("connectivity", "easy", s).ground_truth["connected"]
                for s in range(12)}
    assert outcomes == {True, False}


def test_cycle_mixes_outcomes():
    outcomes = {generate_problem("cycle", "easy", s).ground_truth["has_cycle"]
                for s in range(12)}
    assert outcomes == {True, False}


def test_gnn_ground_truth_matches_hand_oracle():
    problem = generate_problem("gnn", "easy", 9)
    inst = problem.instance
    table = oracles.oracle_gnn(inst.to_graph(),
                               {int(k): v for k, v in inst.params["embeddings"].items()},
                               inst.params["layers"])
    assert problem.ground_truth["embeddings"] == {str(k): table[k] for k in sorted(table)}


def test_generation_rejects_unknown_names():
    with pytest.raises(ValueError):
        generate_problem("sudoku", "easy", 1)
    with pytest.raises(ValueError):
        generate_problem("cycle", "impossible", 1)


def test_problem_json_round_trip():
    problem = generate_problem("maximum_flow", "medium", 17)
    again = bench.NLGraphProblem.from_json(json.loads(json.dumps(problem.to_json())))
    assert again.to_json() == problem.to_json()


# -- prompts --------------------------------------------------------------------------


@pytest.mark.parametrize("task", bench.TASKS)
def test_prompt_parse_render_round_trip(task):
    for seed in range(3):
        problem = generate_problem(task, "easy", seed)
        rendered = problem.prompt
        reparsed = parse_prompt(task, rendered)
        problem.instance = reparsed
        assert render_instance_prompt(problem) == rendered


def test_topological_prompt_variants():
    problem = generate_problem("topological_sort", "easy", 3)
    original = render_instance_prompt(problem, "original")
    assert original.endswith("Can all the nodes be visited? Give the solution.")
    revised = render_instance_prompt(problem, "revised")
    assert revised.endswith(TOPO_QUESTION_REVISED)
    assert revised.endswith(
        "Can all the nodes be visited in a valid topological order that satisfies these constraints?"
    )


def test_shortest_path_prompt_mentions_length():
    problem = generate_problem("shortest_path", "easy", 3)
    assert "along with the path length" in problem.prompt
    assert f"node {problem.instance.params['start']}" in problem.prompt


def test_empty_edge_prompt_still_renders():
    problem = generate_problem("connectivity", "easy", 0)
    problem.instance.edges = []
    text = render_instance_prompt(problem)
    assert "the edges are:" in text
    assert "Q: Is there a path" in text


# -- extraction -------------------------------------------------------------------------


def test_extract_prefers_answer_line():
    value, _ = extract_answer("cycle", "I think there is no cycle... wait.\nANSWER: yes")
    assert value is True
    value, _ = extract_answer("connectivity", "Yes yes yes.\nANSWER: no")
    assert value is False


def test_extract_social_network_closing_text():
    text = ("The shortest path between Tom (node 0) and Lily (node 4) is: Tom -> Katy -> "
            "Steve -> Lily.\nTherefore, it would take 3 message passings for Tom to send "
            "a message to Lily through Katy and Steve. The problem is solved.")
    value, _ = extract_answer("shortest_path", text)
    assert value["length"] == 3


def test_extract_bracketed_paths_and_pairs():
    value, _ = extract_answer("topological_sort", "A valid order is [0, 2, 1, 3].")
    assert value == [0, 2, 1, 3]
    value, _ = extract_answer("hamilton_path", "ANSWER: [3, 1, 0, 2]")
    assert value == [3, 1, 0, 2]
    value, _ = extract_answer("bipartite_matching", "Match (0, 5) and (1, 6).")
    assert value == [[0, 5], [1, 6]]


def test_extract_flow_and_gnn():
    value, _ = extract_answer("maximum_flow", "The maximum flow is 12.")
    assert value == {"value": 12.0, "flows": None}
    value, _ = extract_answer("maximum_flow", 'ANSWER: {"value": 7, "flows": [[0, 1, 7]]}')
    assert value == {"value": 7, "flows": [[0, 1, 7]]}
    value, _ = extract_answer("gnn", "node 0: [1, 2] node 1: [0, 4]")
    assert value == {0: [1, 2], 1: [0, 4]}
    value, _ = extract_answer("gnn", 'ANSWER: {"0": [1, 2], "1": [0, 4]}')
    assert value == {0: [1, 2], 1: [0, 4]}


def test_extract_failure_is_data():
    value, reason = extract_answer("cycle", "The mitochondria is the powerhouse of the cell.")
    assert value is None
    assert "no answer found" in reason
    value, reason = extract_answer("gnn", None)
    assert value is None


# -- verification ---------------------------------------------------------------------------


@pytest.mark.parametrize("task", bench.TASKS)
@pytest.mark.parametrize("difficulty", bench.DIFFICULTIES)
def test_ground_truth_verifies_and_mutations_fail(task, difficulty):
    for seed in range(5):
        problem = generate_problem(task, difficulty, seed)
        good = verify(problem, canonical_answer(problem))
        assert good.correct, f"{problem.id}: {good.reason}"
        bad = verify(problem, mutated_answer(problem))
        assert not bad.correct, problem.id
        assert bad.reason


def test_verify_topological_names_violation():
    problem = generate_problem("topological_sort", "easy", 2)
    order = list(problem.ground_truth["order"])
    u, v = problem.instance.edges[0]
    i, j = order.index(u), order.index(v)
    order[i], order[j] = order[j], order[i]
    verdict = verify(problem, order)
    assert not verdict.correct
    assert "constraint violated" in verdict.reason


def test_verify_accepts_any_optimal_shortest_path():
    problem = generate_problem("shortest_path", "easy", 1)
    truth_path = problem.ground_truth["path"]
    verdict = verify(problem, {"path": truth_path, "length": None})
    assert verdict.correct
    verdict = verify(problem, {"path": None, "length": problem.ground_truth["length"]})
    assert verdict.correct


def test_verify_matching_not_maximum_reason():
    problem = generate_problem("bipartite_matching", "easy", 3)
    pairs = [list(p) for p in problem.ground_truth["pairs"]][:-1]
    verdict = verify(problem, pairs)
    assert not verdict.correct
    assert "not maximum" in verdict.reason


def test_verify_flow_plan_feasibility():
    problem = generate_problem("maximum_flow", "easy", 5)
    value = problem.ground_truth["value"]
    bogus_plan = {"value": value, "flows": [[999, 1000, 1]]}
    verdict = verify(problem, bogus_plan)
    assert not verdict.correct and "non-existent edge" in verdict.reason


def test_verify_none_answer():
    problem = generate_problem("cycle", "easy", 0)
    verdict = verify(problem, None)
    assert not verdict.correct and verdict.reason


# -- dataset io -------------------------------------------------------------------------------


def test_save_load_round_trip(tmp_path):
    problems = [generate_problem("cycle", "easy", s) for s in range(3)]
    save_problems(problems, tmp_path)
    loaded = load_problems(tmp_path)
    assert [p.to_json() for p in loaded] == [p.to_json() for p in problems]


def test_external_text_import(tmp_path):
    problem = generate_problem("connectivity", "easy", 8)
    target = tmp_path / "connectivity" / "easy"
    target.mkdir(parents=True)
    (target / "p0.txt").write_text(problem.prompt, encoding="utf-8")
    (tmp_path / "cycle").mkdir()
    (tmp_path / "cycle" / "easy").mkdir()
    (tmp_path / "cycle" / "easy" / "junk.txt").write_text("not a prompt", encoding="utf-8")
    problems, skipped = load_external_problems(tmp_path)
    assert len(problems) == 1
    assert problems[0].ground_truth == problem.ground_truth
    assert len(skipped) == 1 and "junk" in skipped[0]
