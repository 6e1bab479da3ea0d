from __future__ import annotations

import pytest

from graphcall.graphs import ErrorKind, Graph, GraphError, init_graph


def test_init_graph_flags():
    g = init_graph(directed=True, weighted=False)
    assert g.directed and not g.weighted
    g2 = init_graph(directed=False, weighted=True)
    assert not g2.directed and g2.weighted


def test_init_graph_is_empty():
    g = init_graph(True, True)
    assert g.node_count() == 0
    assert g.edge_count() == 0
    assert g.get_nodes() == []
    assert g.get_edges() == []


def test_add_nodes_reports_new_and_duplicates():
    g = Graph()
    report = g.add_nodes([0, 1, 2, 3, 4])
    assert g.node_count() == 5
    assert report.added == [0, 1, 2, 3, 4]
    assert report.already_present == []

    report = g.add_nodes([0, 0, 5])
    assert g.node_count() == 6
    assert report.added == [5]
    assert report.already_present == [0]


def test_add_nodes_empty_list_is_noop():
    g = Graph()
    report = g.add_nodes([])
    assert report.added == [] and report.already_present == []
    assert g.node_count() == 0


def test_add_nodes_duplicate_within_call():
    g = Graph()
    report = g.add_nodes([0, 0, 1])
    assert g.node_count() == 2
    assert report.already_present == [0]


def test_add_nodes_rejects_negative_and_non_integer():
    g = Graph()
    with pytest.raises(GraphError) as err:
        g.add_nodes([-1])
    assert err.value.kind is ErrorKind.INVALID_ARGUMENT
    with pytest.raises(GraphError):
        g.add_nodes([True])
    with pytest.raises(GraphError):
        g.add_nodes(["x"])


def test_add_edges_default_weight_one():
    g = Graph()
    g.add_nodes([0, 1, 2, 3, 4])
    report = g.add_edges([[0, 1], [0, 2], [1, 3], [3, 4]])
    assert g.edge_count() == 4
    assert report.added == [[0, 1], [0, 2], [1, 3], [3, 4]]
    assert all(g.get_edge_weight(u, v) == 1 for u, v in [(0, 1), (0, 2), (1, 3), (3, 4)])


def test_add_edges_with_weights():
    g = Graph(weighted=True)
    g.add_nodes(list(range(10)))
    g.add_edges([[8, 3], [3, 5], [5, 2], [2, 9], [2, 1], [1, 6], [6, 4], [4, 7], [5, 9]],
                [15, 3, 6, 12, 12, 5, 9, 4, 9])
    assert g.edge_count() == 9
    assert g.get_edge_weight(8, 3) == 15
    assert g.get_edge_weight(3, 8) == 15  # undirected symmetry


def test_add_edges_auto_creates_endpoints():
    g = Graph()
    report = g.add_edges([[7, 8]])
    assert g.has_node(7) and g.has_node(8)
    assert report.created_nodes == [7, 8]


def test_add_edges_weight_length_mismatch():
    g = Graph(weighted=True)
    with pytest.raises(GraphError) as err:
        g.add_edges([[0, 1], [1, 2]], [1.0])
    assert err.value.kind is ErrorKind.INVALID_ARGUMENT


def test_add_edges_negative_weight():
    g = Graph(weighted=True)
    with pytest.raises(GraphError):
        g.add_edges([[0, 1]], [-2])


def test_add_edges_weights_on_unweighted_graph():
    g = Graph(weighted=False)
    with pytest.raises(GraphError) as err:
        g.add_edges([[0, 1]], [3])
    assert "unweighted" in err.value.message
    g.add_edges([[0, 1]], [1])  # weight 1 keeps the invariant


def test_readding_edge_overwrites_weight():
    g = Graph(weighted=True)
    g.add_edges([[0, 1]], [2])
    report = g.add_edges([[1, 0]], [7])
    assert g.edge_count() == 1
    assert report.replaced == [[1, 0]]
    assert g.get_edge_weight(0, 1) == 7


def test_undirected_edge_is_single_entry():
    g = Graph()
    g.add_edges([[2, 1]])
    assert g.has_edge(1, 2) and g.has_edge(2, 1)
    assert g.get_edges() == [[1, 2]]


def test_directed_edges_are_ordered():
    g = Graph(directed=True)
    g.add_edges([[1, 2]])
    assert g.has_edge(1, 2)
    assert not g.has_edge(2, 1)
    assert g.neighbors(1) == [2]
    assert g.neighbors(2) == []
    assert g.in_neighbors(2) == [1]


def test_delete_node_removes_incident_edges(rescue_graph):
    report = rescue_graph.delete_node(2)
    assert report.removed_node == 2
    assert len(report.removed_edges) == 3
    assert not rescue_graph.has_node(2)
    assert all(2 not in (u, v) for u, v, _ in rescue_graph.get_edges())


def test_delete_isolated_node():
    g = Graph()
    g.add_nodes([0, 1])
    g.add_edges([[0, 1]])
    g.add_nodes([9])
    before_edges = g.edge_count()
    g.delete_node(9)
    assert g.node_count() == 2
    assert g.edge_count() == before_edges


def test_delete_missing_node(rescue_graph):
    with pytest.raises(GraphError) as err:
        rescue_graph.delete_node(99)
    assert err.value.kind is ErrorKind.NO_SUCH_NODE


def test_delete_edge():
    g = Graph()
    g.add_edges([[0, 1], [1, 2]])
    g.delete_edge(1, 0)
    assert g.edge_count() == 1
    with pytest.raises(GraphError):
        g.delete_edge(0, 1)
    with pytest.raises(GraphError) as err:
        g.delete_edge(0, 42)
    assert err.value.kind is ErrorKind.NO_SUCH_NODE


def test_set_edge_weight():
    g = Graph(weighted=True)
    g.add_edges([[0, 1]], [2])
    g.set_edge_weight(0, 1, 9)
    assert g.get_edge_weight(1, 0) == 9
    with pytest.raises(GraphError):
        g.set_edge_weight(0, 2, 1)


def test_degree_and_neighbors(rescue_graph):
    assert rescue_graph.neighbors(2) == [1, 5, 9]
    assert rescue_graph.degree(2) == 3
    directed = Graph(directed=True)
    directed.add_edges([[0, 1], [2, 0]])
    assert directed.degree(0) == 2
    assert directed.neighbors(0) == [1]


def test_to_undirected_preserves_edges():
    g = Graph(directed=True, weighted=True)
    g.add_edges([[0, 1], [2, 1]], [3, 4])
    u = g.to_undirected()
    assert not u.directed and u.weighted
    assert u.get_edges() == [[0, 1, 3], [1, 2, 4]]
    assert g.directed  # original untouched


def test_snapshot_shape(rescue_graph):
    snap = rescue_graph.snapshot()
    assert snap["directed"] is False and snap["weighted"] is True
    assert snap["nodes"] == list(range(10))
    assert len(snap["edges"]) == 9
    assert snap["edges"][0] == {"u": 1, "v": 2, "weight": 12}


def test_self_loop_allowed():
    g = Graph()
    g.add_edges([[3, 3]])
    assert g.has_edge(3, 3)
    assert g.neighbors(3) == [3]


def test_graph_equality_and_copy(rescue_graph):
    clone = rescue_graph.copy()
    assert clone == rescue_graph
    clone.delete_node(2)
    assert clone != rescue_graph


def test_graph_error_requires_message():
    with pytest.raises(ValueError):
        GraphError(ErrorKind.NO_PATH, "")
