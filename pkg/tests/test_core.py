from fractions import Fraction
import itertools

from hypothesis import given, settings as hypothesis_settings, strategies as st
import pytest

from reebli.core import EdgePoint, NodeClass, NodePoint, ReebGraph, \
    classify_node, function_preserving_isomorphic, normalize_superpositions, \
    perturb_ties, suppress_regular, validate
from reebli.errors import PointError, SizeLimitError, UnknownNodeError, \
    ValidationError
from reebli.settings import Settings

from .strategies import graphs, trees


def test_values_are_rational(segment):
    assert segment.value("b") == Fraction(4)
    assert isinstance(segment.value("a"), Fraction)


def test_edges_are_oriented_upward():
    graph = ReebGraph({"a": 3, "b": 1}, [("a", "b")])
    assert graph.edge(0) == ("b", "a")
    assert graph.up_edges("b") == [0]
    assert graph.down_edges("a") == [0]


def test_unknown_node_in_edge():
    with pytest.raises(UnknownNodeError):
        ReebGraph({"a": 0}, [("a", "b")])


def test_from_records_collects_all_problems():
    with pytest.raises(ValidationError) as info:
        ReebGraph.from_records([("a", 0), ("a", 1), ("b", 2)],
                               [("a", "c"), ("b", "d")])
    assert info.value.report.kinds() == {"duplicate-node", "unknown-node"}
    assert len(info.value.report.violations) == 3


def test_valid_graphs(segment, loop, y_graph, x_tree):
    for graph in (segment, loop, y_graph):
        assert validate(graph).ok
    assert validate(x_tree, strict=False).ok


@pytest.mark.parametrize("values, edges, kind", [
    ({"a": 0}, [("a", "a")], "self-loop"),
    ({"a": 0, "b": 1, "c": 2, "d": 3}, [("a", "b"), ("c", "d")],
     "disconnected"),
    ({"a": 0, "b": 0}, [("a", "b")], "flat-edge"),
    ({"a": 0, "b": 1, "c": 1}, [("a", "b"), ("a", "c")], "value-collision"),
])
def test_validation_violations(values, edges, kind):
    report = validate(ReebGraph(values, edges))
    assert not report
    assert kind in report.kinds()


def test_empty_graph_is_invalid():
    assert validate(ReebGraph({}, [])).kinds() == {"empty"}


def test_ties_allowed_when_not_strict():
    graph = ReebGraph({"a": 0, "b": 1, "c": 1}, [("a", "b"), ("a", "c")])
    assert validate(graph, strict=False).ok


def test_superposition_with_different_values():
    graph = ReebGraph({"a": 0, "b": 1, "j": 2, "s": 3, "c": 4},
                      [("a", "j"), ("b", "j"), ("j", "s"), ("s", "c")],
                      [("j", "s")])
    assert "superposition" in validate(graph).kinds()


def test_node_classes(y_graph, loop):
    assert y_graph.node_class("m") == NodeClass.MINIMUM
    assert y_graph.node_class("s") == NodeClass.SPLIT
    assert y_graph.node_class("p") == NodeClass.MAXIMUM
    assert loop.node_class("j") == NodeClass.JOIN
    assert ReebGraph({"a": 0, "b": 1, "c": 2},
                     [("a", "b"), ("b", "c")]).node_class("b") == NodeClass.REGULAR
    with pytest.raises(UnknownNodeError):
        classify_node(loop, "z")


def test_degenerate_crossing_is_normalized():
    graph = ReebGraph({"a": 0, "b": 1, "x": 2, "c": 3, "d": 4},
                      [("a", "x"), ("b", "x"), ("x", "c"), ("x", "d")])
    assert graph.node_class("x") == NodeClass.DEGENERATE
    normalized = normalize_superpositions(graph)
    assert normalized.superpositions == (("x", "x+"),)
    assert normalized.node_class("x") == NodeClass.JOIN
    assert normalized.node_class("x+") == NodeClass.SPLIT
    assert normalized.value("x+") == 2
    assert validate(normalized).ok


def test_degenerate_peak_becomes_join_and_maximum():
    graph = ReebGraph({"a": 0, "b": 1, "t": 2}, [("a", "t"), ("b", "t")])
    normalized = normalize_superpositions(graph)
    assert normalized.node_class("t") == NodeClass.JOIN
    assert normalized.node_class("t+") == NodeClass.MAXIMUM


def test_normalization_is_idempotent(x_tree):
    assert normalize_superpositions(x_tree) is x_tree


def test_superposed_points_are_identified(x_tree):
    assert x_tree.same_point(NodePoint("join"), NodePoint("split"))
    assert x_tree.points_at(4) == [NodePoint("join")]


def test_point_on_edge(segment):
    assert segment.point_on_edge(0, 0) == NodePoint("a")
    assert segment.point_on_edge(0, 1) == EdgePoint(0, Fraction(1))
    with pytest.raises(PointError):
        segment.point_on_edge(0, 5)
    with pytest.raises(PointError):
        segment.check_point(EdgePoint(0, Fraction(4)))


def test_reaches_up(y_graph):
    assert y_graph.reaches_up(NodePoint("m"), NodePoint("p"))
    assert y_graph.reaches_up(EdgePoint(0, Fraction(1)), EdgePoint(2, Fraction(3)))
    assert not y_graph.reaches_up(NodePoint("p"), NodePoint("q"))
    assert not y_graph.reaches_up(NodePoint("q"), NodePoint("m"))


def test_monotone_route(y_graph):
    route = y_graph.monotone_route(NodePoint("m"), EdgePoint(1, Fraction(4)))
    assert [step.edge for step in route] == [0, 1]
    assert route[-1].high == 4


def test_suppress_regular():
    graph = ReebGraph({"a": 0, "b": 1, "c": 2}, [("a", "b"), ("b", "c")])
    suppressed = suppress_regular(graph)
    assert suppressed.nodes == ("a", "c")
    assert suppressed.edges == {0: ("a", "c")}


def test_isomorphism_ignores_ids_and_subdivisions(segment, loop):
    subdivided = ReebGraph({0: 0, 1: 2, 2: 4}, [(0, 1), (1, 2)])
    assert function_preserving_isomorphic(segment, subdivided)
    assert function_preserving_isomorphic(
        loop, loop.relabeled({"m": "x", "s": "y"}))
    assert not function_preserving_isomorphic(
        segment, ReebGraph({"a": 0, "b": 5}, [("a", "b")]))


def test_isomorphism_size_limit(loop):
    with pytest.raises(SizeLimitError):
        function_preserving_isomorphic(loop, loop, Settings(isomorphism_limit=2))


def test_perturb_ties():
    graph = ReebGraph({"a": 0, "b": 0, "c": 1}, [("a", "c"), ("b", "c")])
    perturbed = perturb_ties(graph)
    assert perturbed.value("a") == 0
    assert perturbed.value("b") == Fraction(1, 6)
    assert validate(perturbed).ok


def test_perturb_without_ties_is_identity(segment):
    assert perturb_ties(segment) is segment


def test_betti_number(segment, loop):
    assert segment.betti_number() == 0
    assert loop.betti_number() == 1
    assert segment.is_tree()
    assert not loop.is_tree()


@given(graphs())
def test_degree_sums(graph):
    up = sum(graph.up_degree(node) for node in graph.nodes)
    down = sum(graph.down_degree(node) for node in graph.nodes)
    assert up == down == len(graph.edges)


@given(graphs())
def test_normalized_graphs_have_no_degenerate_nodes(graph):
    assert validate(graph).ok
    assert NodeClass.DEGENERATE not in {graph.node_class(node)
                                        for node in graph.nodes}


@hypothesis_settings(max_examples=30)
@given(trees())
def test_isomorphic_to_relabeled_copy(tree):
    mapping = {node: f"n{node}" for node in tree.nodes}
    assert function_preserving_isomorphic(tree, tree.relabeled(mapping))


@hypothesis_settings(max_examples=30)
@given(graphs(), st.data())
def test_isomorphism_is_an_equivalence(graph, data):
    nodes = list(graph.nodes)
    first = graph.relabeled(dict(zip(nodes, data.draw(st.permutations(nodes)))))
    second = first.relabeled(dict(zip(nodes, data.draw(st.permutations(nodes)))))
    for a, b in itertools.product((graph, first, second), repeat=2):
        assert function_preserving_isomorphic(a, b)
    raised = ReebGraph({node: value + 1 for node, value in graph.values.items()},
                       graph.edges, graph.superpositions)
    assert not function_preserving_isomorphic(graph, raised)
