from fractions import Fraction

from hypothesis import given
import numpy as np
import pytest

from reebli.core import ReebGraph
from reebli.errors import LabelingError, NotATreeError, SizeLimitError, \
    ValidationError
from reebli.interleave import Labeling
from reebli.merge import MergeTree, align_roots, common_sentinel, \
    induced_matrix, leaf_labeling, merge_labeled_distance, min_over_labelings, \
    with_root_value
from reebli.settings import Settings

from .strategies import labeled_merge_tree_pairs


def _tree(values, edges, root="r"):
    return MergeTree(ReebGraph(values, edges), root)


@pytest.fixture
def shifted_tree():
    return _tree({"a": Fraction(3, 2), "b": Fraction(5, 2), "j": 4, "r": 100},
                 [("a", "j"), ("b", "j"), ("j", "r")])


def test_structure(merge_tree):
    assert merge_tree.root == "r"
    assert merge_tree.leaves == ["a", "b"]
    assert merge_tree.parent("a") == "j"
    assert merge_tree.parent("r") is None
    assert merge_tree.depth("a") == 2
    assert merge_tree.ancestors("b") == ["b", "j", "r"]
    assert merge_tree.lca("a", "b") == "j"
    assert merge_tree.lca("a", "j") == "j"
    assert merge_tree.merge_value("a", "b") == 5


def test_root_defaults_to_maximum(merge_tree):
    assert MergeTree(merge_tree.graph).root == "r"


def test_rejects_two_upward_edges():
    graph = ReebGraph({"a": 0, "s": 1, "p": 2, "q": 3},
                      [("a", "s"), ("s", "p"), ("s", "q")])
    with pytest.raises(ValidationError):
        MergeTree(graph, "q")


def test_rejects_cycles(loop):
    with pytest.raises(NotATreeError):
        MergeTree(loop)


def test_induced_matrix(merge_tree, merge_labeling):
    matrix = induced_matrix(merge_tree, merge_labeling)
    assert matrix.labels == (1, 2)
    assert matrix.entries.tolist() == [[1, 5], [5, 2]]
    assert matrix[1, 2] == 5
    assert matrix.is_symmetric()


def test_induced_matrix_needs_all_leaves(merge_tree):
    with pytest.raises(LabelingError):
        induced_matrix(merge_tree, Labeling(merge_tree.graph, {1: "a"}))


def test_distance(merge_tree, merge_labeling, shifted_tree):
    labeling = Labeling(shifted_tree.graph, {1: "a", 2: "b"})
    assert merge_labeled_distance(merge_tree, merge_labeling, shifted_tree,
                                  labeling) == 1
    assert merge_labeled_distance(merge_tree, merge_labeling, merge_tree,
                                  merge_labeling) == 0


def test_distance_needs_same_labels(merge_tree, merge_labeling):
    with pytest.raises(LabelingError):
        merge_labeled_distance(merge_tree, merge_labeling, merge_tree,
                               Labeling(merge_tree.graph, {1: "a", 3: "b"}))


def test_single_leaf_trees():
    first = _tree({"p": 2, "r": 50}, [("p", "r")])
    second = _tree({"q": 7, "r": 50}, [("q", "r")])
    distance = merge_labeled_distance(first, leaf_labeling(first), second,
                                      leaf_labeling(second))
    assert distance == 5


def test_sentinels(merge_tree, shifted_tree):
    assert common_sentinel(merge_tree, shifted_tree) == 5 + 4 + 1
    first, second = align_roots(merge_tree, shifted_tree)
    assert first.graph.value("r") == second.graph.value("r") == 10
    assert with_root_value(merge_tree, 20).graph.value("a") == 1


def test_min_over_labelings(merge_tree):
    shifted = _tree({"x": 2, "y": 3, "k": 6, "r": 100},
                    [("x", "k"), ("y", "k"), ("k", "r")])
    first, second = align_roots(merge_tree, shifted)
    assert min_over_labelings(first, second) == 1
    assert min_over_labelings(first, first) == 0


def test_min_over_labelings_with_different_leaf_counts(merge_tree):
    single = _tree({"p": 1, "r": 100}, [("p", "r")])
    first, second = align_roots(merge_tree, single)
    # Both leaves pair with p: max(|2 - 1|, |5 - 1|).
    assert min_over_labelings(first, second) == 4


def test_min_over_labelings_limit(merge_tree):
    with pytest.raises(SizeLimitError):
        min_over_labelings(merge_tree, merge_tree, Settings(max_leaves=1))


def test_leaf_labeling_order(merge_tree):
    labeling = leaf_labeling(merge_tree, ["b", "a"])
    assert labeling.items() == [(1, "b"), (2, "a")]


@given(labeled_merge_tree_pairs())
def test_distance_is_a_metric_on_the_pairs(pair):
    (t1, l1), (t2, l2) = pair
    forward = merge_labeled_distance(t1, l1, t2, l2)
    assert forward == merge_labeled_distance(t2, l2, t1, l1)
    assert forward >= 0
    assert merge_labeled_distance(t1, l1, t1, l1) == 0


@given(labeled_merge_tree_pairs(), labeled_merge_tree_pairs())
def test_triangle_inequality(first, second):
    (t1, l1), (t2, l2) = first
    (t3, l3), _ = second
    if l3.labels != l1.labels:
        return
    d12 = merge_labeled_distance(t1, l1, t2, l2)
    d23 = merge_labeled_distance(t2, l2, t3, l3)
    d13 = merge_labeled_distance(t1, l1, t3, l3)
    assert d13 <= d12 + d23


@given(labeled_merge_tree_pairs())
def test_matrices_are_symmetric(pair):
    for tree, labeling in pair:
        matrix = induced_matrix(tree, labeling)
        assert matrix.is_symmetric()
        assert np.all(np.diag(matrix.entries.astype(float))
                      <= matrix.entries.astype(float).min(axis=0))
