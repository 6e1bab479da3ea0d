from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from graphcall import toolkit
from graphcall.toolkit import (
    DISASTER_SESSION,
    GRAPH_SESSION,
    INIT_TOOL,
    SessionState,
    ToolCall,
    dispatch,
    tool_catalog,
    validate_arguments,
)


def fresh_state(kind: str = GRAPH_SESSION) -> SessionState:
    return SessionState(kind=kind)


def init_state() -> SessionState:
    state = fresh_state()
    dispatch(state, ToolCall(INIT_TOOL, {"directed": False, "weighted": False}))
    return state


# -- catalog ------------------------------------------------------------------


def test_catalog_has_29_graph_tools():
    specs = tool_catalog(GRAPH_SESSION)
    assert len(specs) == 29
    assert len({s.name for s in specs}) == 29
    assert specs[0].name == INIT_TOOL


def test_disaster_catalog_is_superset():
    graph_names = {s.name for s in tool_catalog(GRAPH_SESSION)}
    disaster_names = {s.name for s in tool_catalog(DISASTER_SESSION)}
    assert graph_names < disaster_names
    assert {"get_environment_data", "get_environment_map_data", "apply_event"} <= disaster_names


def test_find_shortest_distance_spec_shape():
    spec = next(s for s in tool_catalog(GRAPH_SESSION) if s.name == "find_shortest_distance")
    data = spec.to_json()
    assert set(data) == {"name", "description", "parameters"}
    params = data["parameters"]
    assert params["type"] == "object"
    assert params["properties"]["start"]["type"] == "integer"
    assert params["properties"]["end"]["type"] == "integer"
    assert params["required"] == ["start", "end"]


def test_specs_round_trip_through_json():
    for spec in tool_catalog(DISASTER_SESSION):
        data = spec.to_json()
        assert json.loads(json.dumps(data)) == data


def test_catalog_rejects_unknown_kind():
    with pytest.raises(ValueError):
        tool_catalog("starship")


# -- validation ----------------------------------------------------------------


def spec_named(name: str):
    return next(s for s in tool_catalog(DISASTER_SESSION) if s.name == name)


def test_validate_ok_dict_and_string_payloads():
    spec = spec_named("find_shortest_path")
    _, violations = validate_arguments(spec, ToolCall("find_shortest_path", {"start": 0, "end": 4}))
    assert violations == []
    _, violations = validate_arguments(spec, ToolCall("find_shortest_path", '{"start": 0, "end": 4}'))
    assert violations == []


def test_validate_reports_type_mismatch_and_missing():
    spec = spec_named("find_shortest_path")
    _, violations = validate_arguments(spec, ToolCall("find_shortest_path", {"start": "zero"}))
    assert len(violations) == 2
    assert any("start" in v and "integer" in v for v in violations)
    assert any("missing required parameter 'end'" in v for v in violations)


def test_validate_unparseable_arguments():
    spec = spec_named("find_shortest_path")
    _, violations = validate_arguments(spec, ToolCall("find_shortest_path", "{start:"))
    assert violations == ["unparseable arguments (not valid JSON)"]


def test_validate_flags_unexpected_parameter():
    spec = spec_named("node_count")
    _, violations = validate_arguments(spec, ToolCall("node_count", {"bogus": 1}))
    assert violations == ["unexpected parameter 'bogus'"]


# -- dispatch ---------------------------------------------------------------------


def test_dispatch_init_renders_constructor_text():
    state = fresh_state()
    result = dispatch(state, ToolCall(INIT_TOOL, {"directed": True, "weighted": False}))
    assert result.ok
    assert result.render() == "GraphLibrary constructor was called"
    assert state.graph is not None and state.graph.directed


def test_dispatch_unknown_tool_lists_catalog():
    result = dispatch(fresh_state(), ToolCall("unknown_tool", {}))
    assert not result.ok
    assert "unknown function 'unknown_tool'" in result.error["message"]
    assert "find_shortest_path" in result.error["message"]


def test_dispatch_before_init_instructs_initialization():
    result = dispatch(fresh_state(), ToolCall("find_shortest_path", {"start": 1, "end": 4}))
    assert not result.ok
    assert INIT_TOOL in result.error["message"]


def test_dispatch_no_path_error_text(disconnected_graph):
    state = init_state()
    dispatch(state, ToolCall("add_nodes", {"nodes": [1, 2, 3, 4, 5, 6, 7]}))
    dispatch(state, ToolCall("add_edges", {"edges": [[1, 3], [2, 3], [4, 5]]}))
    result = dispatch(state, ToolCall("find_shortest_path", {"start": 1, "end": 4}))
    assert not result.ok
    assert "no path exists between node 1 and node 4" in result.render()


def test_dispatch_result_text_patterns():
    state = init_state()
    added = dispatch(state, ToolCall("add_nodes", {"nodes": [0, 1, 2]}))
    assert added.render() == "add_nodes was called"
    dispatch(state, ToolCall("add_edges", {"edges": [[0, 1], [1, 2]]}))
    path = dispatch(state, ToolCall("find_shortest_path", {"start": 0, "end": 2}))
    assert path.render() == "find_shortest_path was called and resulted in [0, 1, 2]"
    count = dispatch(state, ToolCall("node_count", {}))
    assert count.render() == "node_count was called and resulted in 3"


def test_dispatch_string_arguments_like_wire_traffic():
    state = init_state()
    result = dispatch(state, ToolCall("add_nodes", '{"nodes": [0, 1, 2, 3, 4]}'))
    assert result.ok
    assert state.graph.node_count() == 5


def test_dispatch_accessors_and_mutators():
    state = init_state()
    dispatch(state, ToolCall("add_edge", {"u": 0, "v": 1}))
    assert dispatch(state, ToolCall("has_edge", {"u": 1, "v": 0})).payload is True
    assert dispatch(state, ToolCall("neighbors", {"node": 0})).payload == [1]
    assert dispatch(state, ToolCall("degree", {"node": 0})).payload == 1
    assert dispatch(state, ToolCall("get_edges", {})).payload == [[0, 1]]
    result = dispatch(state, ToolCall("delete_edge", {"u": 0, "v": 1}))
    assert result.ok and result.graph_mutated
    assert dispatch(state, ToolCall("edge_count", {})).payload == 0


def test_dispatch_graph_payloads():
    state = fresh_state()
    dispatch(state, ToolCall(INIT_TOOL, {"directed": True, "weighted": True}))
    dispatch(state, ToolCall("add_edges", {"edges": [[0, 1], [1, 2], [0, 2]],
                                           "weights": [2, 2, 5]}))
    flow = dispatch(state, ToolCall("max_flow", {"source": 0, "sink": 2}))
    assert flow.payload == {"value": 7, "flows": [[0, 1, 2], [0, 2, 5], [1, 2, 2]]}
    topo = dispatch(state, ToolCall("topological_sort", {}))
    assert topo.payload == [0, 1, 2]
    cycle = dispatch(state, ToolCall("detect_cycle", {}))
    assert cycle.payload == {"has_cycle": False, "witness": None}


def test_dispatch_is_bipartite_payloads():
    state = init_state()
    dispatch(state, ToolCall("add_edges", {"edges": [[0, 2], [1, 2]]}))
    ok = dispatch(state, ToolCall("is_bipartite", {}))
    assert ok.payload == {"bipartite": True, "parts": [[0, 1], [2]]}
    dispatch(state, ToolCall("add_edges", {"edges": [[0, 1]]}))
    bad = dispatch(state, ToolCall("is_bipartite", {}))
    assert bad.payload["bipartite"] is False
    assert bad.payload["odd_cycle"][0] == bad.payload["odd_cycle"][-1]


def test_dispatch_gnn_layers():
    state = init_state()
    dispatch(state, ToolCall("add_edges", {"edges": [[0, 1]]}))
    result = dispatch(state, ToolCall("gnn_layers", {"embeddings": {"0": [1, 2], "1": [3, 4]},
                                                     "layers": 1}))
    assert result.payload == {"0": [3, 4], "1": [1, 2]}


def test_dispatch_to_undirected_replaces_graph():
    state = fresh_state()
    dispatch(state, ToolCall(INIT_TOOL, {"directed": True}))
    dispatch(state, ToolCall("add_edges", {"edges": [[1, 0]]}))
    result = dispatch(state, ToolCall("to_undirected", {}))
    assert result.ok and result.graph_mutated
    assert not state.graph.directed
    assert state.graph.has_edge(0, 1)


def test_dispatch_scenario_tools_only_in_disaster_sessions():
    graph_result = dispatch(fresh_state(), ToolCall("get_environment_data", {}))
    assert not graph_result.ok
    state = fresh_state(DISASTER_SESSION)
    env = dispatch(state, ToolCall("get_environment_data", {}))
    assert env.ok
    assert env.payload["locations"] == [f"L{i}" for i in range(1, 10)]


def test_dispatch_reinit_notices_discard():
    state = init_state()
    result = dispatch(state, ToolCall(INIT_TOOL, {}))
    assert result.ok
    assert result.notices == ["the previous graph was discarded"]
    assert "(the previous graph was discarded)" in result.render()


def test_dispatch_graph_mutated_flag_drives_snapshots():
    state = init_state()
    mutating = dispatch(state, ToolCall("add_nodes", {"nodes": [0]}))
    reading = dispatch(state, ToolCall("get_nodes", {}))
    assert mutating.graph_mutated and not reading.graph_mutated


def test_ok_payload_serialization_deterministic():
    def run() -> list[str]:
        state = init_state()
        dispatch(state, ToolCall("add_edges", {"edges": [[0, 1], [1, 2], [2, 3], [0, 3]]}))
        outputs = []
        for name, args in [("connected_components", {}), ("detect_cycle", {}),
                           ("find_hamilton_path", {}), ("get_edges", {})]:
            outputs.append(dispatch(state, ToolCall(name, args)).render())
        return outputs

    assert run() == run()


@given(st.text(max_size=200))
@settings(max_examples=120, deadline=None)
def test_dispatch_never_raises_on_junk_arguments(junk):
    state = SessionState(kind=GRAPH_SESSION)
    dispatch(state, ToolCall(INIT_TOOL, {}))
    for name in ("add_nodes", "find_shortest_path", "gnn_layers", INIT_TOOL, "max_flow"):
        result = dispatch(state, ToolCall(name, junk))
        assert result.status in ("ok", "error")


@given(st.recursive(
    st.none() | st.booleans() | st.integers() | st.floats(allow_nan=False) | st.text(max_size=20),
    lambda children: st.lists(children, max_size=4) | st.dictionaries(st.text(max_size=8), children, max_size=4),
    max_leaves=12,
))
@settings(max_examples=120, deadline=None)
def test_dispatch_never_raises_on_junk_structures(junk):
    state = SessionState(kind=GRAPH_SESSION)
    dispatch(state, ToolCall(INIT_TOOL, {}))
    result = dispatch(state, ToolCall("add_edges", junk))
    assert result.status in ("ok", "error")


CATALOG_COVERAGE_CALLS = [
    (INIT_TOOL, {"directed": False, "weighted": True}),
    ("add_nodes", {"nodes": [0, 1, 2, 3]}),
    ("add_edges", {"edges": [[0, 1], [1, 2]], "weights": [2, 3]}),
    ("add_edge", {"u": 2, "v": 3, "weight": 1}),
    ("add_node", {"node": 9}),
    ("delete_node", {"node": 9}),
    ("set_edge_weight", {"u": 0, "v": 1, "weight": 4}),
    ("get_nodes", {}),
    ("get_edges", {}),
    ("node_count", {}),
    ("edge_count", {}),
    ("has_node", {"node": 0}),
    ("has_edge", {"u": 0, "v": 1}),
    ("neighbors", {"node": 1}),
    ("degree", {"node": 1}),
    ("get_edge_weight", {"u": 0, "v": 1}),
    ("find_shortest_path", {"start": 0, "end": 3}),
    ("find_shortest_distance", {"start": 0, "end": 3}),
    ("check_connectivity", {"u": 0, "v": 3}),
    ("detect_cycle", {}),
    ("connected_components", {}),
    ("max_flow", {"source": 0, "sink": 3}),
    ("max_bipartite_matching", {}),
    ("is_bipartite", {}),
    ("find_hamilton_path", {}),
    ("gnn_layers", {"embeddings": {"0": [1, 0], "1": [0, 1], "2": [2, 2], "3": [1, 1]},
                    "layers": 2}),
    ("to_undirected", {}),
    ("delete_edge", {"u": 2, "v": 3}),
    ("get_environment_data", {}),
    ("get_environment_map_data", {}),
    ("apply_event", {"kind": "fire_expanded", "location": "L2"}),
]


def test_every_catalog_entry_dispatches_ok_and_deterministically():
    """A well-typed call exists for each of the 32 tools; all succeed, and
    the rendered outputs are identical across runs (topological_sort needs
    its own directed graph)."""
    names_called = {name for name, _ in CATALOG_COVERAGE_CALLS} | {"topological_sort"}
    assert names_called == {s.name for s in tool_catalog(DISASTER_SESSION)}

    def run() -> list[str]:
        state = SessionState(kind=DISASTER_SESSION)
        outputs = []
        for name, args in CATALOG_COVERAGE_CALLS:
            result = dispatch(state, ToolCall(name, dict(args)))
            assert result.ok, f"{name}: {result.error}"
            outputs.append(result.render())
        directed = SessionState(kind=DISASTER_SESSION)
        dispatch(directed, ToolCall(INIT_TOOL, {"directed": True}))
        dispatch(directed, ToolCall("add_edges", {"edges": [[0, 1], [0, 2], [1, 3]]}))
        topo = dispatch(directed, ToolCall("topological_sort", {}))
        assert topo.ok
        outputs.append(topo.render())
        return outputs

    first = run()
    assert first == run()
