"""Hypothesis strategies for graphs, trees and labelings."""
from fractions import Fraction

from hypothesis import strategies as st

from reebli.core import ReebGraph, normalize_superpositions
from reebli.interleave import Labeling
from reebli.merge import MergeTree


@st.composite
def trees(draw, min_nodes=2, max_nodes=7):
    """Normalized trees with distinct integer node values."""
    size = draw(st.integers(min_nodes, max_nodes))
    values = draw(st.permutations(range(size)))
    edges = [(node, draw(st.integers(0, node - 1))) for node in range(1, size)]
    graph = ReebGraph({node: values[node] for node in range(size)}, edges)
    return normalize_superpositions(graph)


@st.composite
def graphs(draw, max_nodes=7, max_betti=3):
    """Normalized connected graphs with distinct node values and up to
    *max_betti* independent cycles."""
    size = draw(st.integers(2, max_nodes))
    values = draw(st.permutations(range(size)))
    edges = [(node, draw(st.integers(0, node - 1))) for node in range(1, size)]
    extra = draw(st.lists(
        st.tuples(st.integers(0, size - 1), st.integers(0, size - 1))
        .filter(lambda pair: pair[0] != pair[1]),
        max_size=max_betti))
    graph = ReebGraph({node: values[node] for node in range(size)},
                      edges + extra)
    return normalize_superpositions(graph)


epsilons = st.fractions(min_value=Fraction(1, 4), max_value=3,
                        max_denominator=4)


def _merge_tree(draw, leaves):
    used = set()

    def fresh(value):
        while value in used:
            value += 1
        used.add(value)
        return value

    values = {}
    edges = []
    tops = []
    for index in range(leaves):
        node = f"l{index}"
        values[node] = fresh(draw(st.integers(0, 20)))
        tops.append(node)
    joins = 0
    while len(tops) > 1:
        first = tops.pop(draw(st.integers(0, len(tops) - 1)))
        second = tops.pop(draw(st.integers(0, len(tops) - 1)))
        node = f"j{joins}"
        joins += 1
        values[node] = fresh(max(values[first], values[second])
                             + draw(st.integers(1, 6)))
        edges += [(first, node), (second, node)]
        tops.append(node)
    return values, edges, tops[0]


def _labeled_merge_trees(draw, count, max_leaves):
    leaves = draw(st.integers(1, max_leaves))
    drawn = [_merge_tree(draw, leaves) for _ in range(count)]
    sentinel = max(max(values.values()) for values, _, _ in drawn) + 100
    result = []
    for values, edges, top in drawn:
        values = dict(values, r=sentinel)
        tree = MergeTree(ReebGraph(values, edges + [(top, "r")]), "r")
        assignment = {index + 1: f"l{index}" for index in range(leaves)}
        assignment[leaves + 1] = "r"
        result.append((tree, Labeling(tree.graph, assignment)))
    return result


@st.composite
def labeled_merge_tree_pairs(draw, max_leaves=3):
    """
    Two merge trees with the same number of leaves and a shared root
    sentinel. Label i marks the i-th leaf of both trees; the last label marks
    the roots.
    """
    return _labeled_merge_trees(draw, 2, max_leaves)


@st.composite
def labeled_merge_tree_triples(draw, max_leaves=3):
    """Three merge trees labeled like :func:`labeled_merge_tree_pairs`."""
    return _labeled_merge_trees(draw, 3, max_leaves)
