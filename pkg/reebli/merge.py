"""
Labeled merge trees and their interleaving distance, computed as the max-norm
distance of induced (cophenetic) matrices.

The root of a merge tree stands for infinity. It is stored with a finite
sentinel value; two trees that are compared should share the sentinel, see
:func:`common_sentinel` and :func:`with_root_value`.
"""
from dataclasses import dataclass
import logging

import numpy as np

from reebli import tools
from reebli.core import ReebGraph, ValidationReport
from reebli.errors import LabelingError, NotATreeError, SizeLimitError, \
    UnknownNodeError
from reebli.interleave import Labeling
from reebli.settings import resolve


class MergeTree:
    """
    A Reeb graph that is a tree with a unique maximum, the *root*, in which
    every other node has exactly one upward edge.

    :raises NotATreeError: if *graph* has a cycle or is disconnected.
    :raises ValidationError: if the root is not the unique maximum or a
        non-root node has more than one upward edge.
    """

    def __init__(self, graph, root=None):
        if not graph.is_tree():
            raise NotATreeError(f"{graph!r} is not a tree")
        if root is None:
            root = max(graph.nodes, key=lambda node: (graph.value(node),
                                                      tools.node_key(node)))
        report = ValidationReport()
        if root not in graph:
            raise UnknownNodeError(root)
        if graph.up_degree(root) != 0:
            report.add("merge-tree", root, "the root must be a maximum")
        for node in graph.nodes:
            if node == root:
                continue
            if graph.value(node) >= graph.value(root):
                report.add("merge-tree", node,
                           "the root must have the unique largest value")
            if graph.up_degree(node) != 1:
                report.add("merge-tree", node,
                           f"node {node!r} has {graph.up_degree(node)} upward "
                           f"edges instead of one")
        report.raise_if_invalid()
        self.graph = graph
        self.root = root
        self._parent = {root: None}
        for node in graph.nodes:
            if node != root:
                self._parent[node] = graph.upper(graph.up_edges(node)[0])
        self._depth = {}
        for node in graph.nodes:
            self._depth[node] = self._compute_depth(node)

    def _compute_depth(self, node):
        chain = []
        while node not in self._depth and node is not None:
            chain.append(node)
            node = self._parent[node]
        depth = -1 if node is None else self._depth[node]
        for member in reversed(chain):
            depth += 1
            self._depth[member] = depth
        return self._depth[chain[0]] if chain else depth

    def __repr__(self):
        return f"MergeTree(root={self.root!r}, nodes={len(self.graph.nodes)})"

    def parent(self, node):
        self.graph.value(node)
        return self._parent[node]

    def depth(self, node):
        self.graph.value(node)
        return self._depth[node]

    @property
    def leaves(self):
        """Nodes without downward edges, except the root."""
        return [node for node in self.graph.nodes
                if node != self.root and self.graph.down_degree(node) == 0]

    def ancestors(self, node):
        """*node* and all nodes above it, from bottom to top."""
        self.graph.value(node)
        result = []
        while node is not None:
            result.append(node)
            node = self._parent[node]
        return result

    def lca(self, u, v):
        """Lowest common ancestor of *u* and *v*."""
        self.graph.value(u)
        self.graph.value(v)
        while self._depth[u] > self._depth[v]:
            u = self._parent[u]
        while self._depth[v] > self._depth[u]:
            v = self._parent[v]
        while u != v:
            u, v = self._parent[u], self._parent[v]
        return u

    def merge_value(self, u, v):
        return self.graph.value(self.lca(u, v))


def lca(tree, u, v):
    return tree.lca(u, v)


def common_sentinel(*trees):
    """
    Root value that is large enough for all *trees*: the largest non-root
    value plus the spread of all non-root values plus one.
    """
    values = [tree.graph.value(node) for tree in trees
              for node in tree.graph.nodes if node != tree.root]
    if not values:
        return tools.to_rational(1)
    return max(values) + (max(values) - min(values)) + 1


def with_root_value(tree, value):
    """Copy of *tree* whose root has the given value."""
    values = dict(tree.graph.values)
    values[tree.root] = tools.to_rational(value)
    return MergeTree(ReebGraph(values, tree.graph.edges), tree.root)


def align_roots(t1, t2):
    sentinel = common_sentinel(t1, t2)
    return with_root_value(t1, sentinel), with_root_value(t2, sentinel)


@dataclass(frozen=True, eq=False)
class InducedMatrix:
    """
    Matrix of merge values ``f(lca(l(i), l(j)))`` indexed by the sorted
    labels. *entries* is a numpy object array of fractions.
    """
    labels: tuple
    entries: np.ndarray

    def __getitem__(self, pair):
        i, j = pair
        return self.entries[self.labels.index(i), self.labels.index(j)]

    def is_symmetric(self):
        return bool((self.entries == self.entries.T).all())


def _check_leaf_surjective(tree, labeling):
    missing = set(tree.leaves) - labeling.nodes
    if missing:
        raise LabelingError(
            f"the labeling misses the leaves "
            f"{sorted(missing, key=tools.node_key)}")


def induced_matrix(tree, labeling):
    """
    Induced matrix of a labeled merge tree.

    :raises LabelingError: if a non-root leaf has no label.
    """
    _check_leaf_surjective(tree, labeling)
    labels = labeling.labels
    entries = np.empty((len(labels), len(labels)), dtype=object)
    for i, first in enumerate(labels):
        for j, second in enumerate(labels):
            entries[i, j] = tree.merge_value(labeling[first], labeling[second])
    return InducedMatrix(labels, entries)


def merge_labeled_distance(t1, l1, t2, l2):
    """
    Labeled interleaving distance of two labeled merge trees.

    :raises LabelingError: if the label sets differ or a labeling misses a
        leaf.
    """
    if l1.labels != l2.labels:
        raise LabelingError(f"label sets differ: {list(l1.labels)} and "
                            f"{list(l2.labels)}")
    m1 = induced_matrix(t1, l1)
    m2 = induced_matrix(t2, l2)
    if not l1.labels:
        return tools.to_rational(0)
    return np.abs(m1.entries - m2.entries).max()


def _merge_table(tree, leaves):
    return {a: {b: tree.merge_value(a, b) for b in leaves} for a in leaves}


def min_over_labelings(t1, t2, settings=None):
    """
    Minimum of :func:`merge_labeled_distance` over all common labelings that
    label every leaf of both trees.

    Adding labels never decreases the distance, so it suffices to enumerate
    minimal relations between the two leaf sets: every leaf of *t1* is paired
    with a leaf of *t2*, and the leaves of *t2* left over are paired with a
    leaf of *t1*. Branches are pruned as soon as their partial maximum
    reaches the best complete value.

    :raises SizeLimitError: if a tree has more leaves than
        :attr:`Settings.max_leaves <reebli.settings.Settings>`.
    """
    limit = resolve(settings).max_leaves
    leaves1, leaves2 = t1.leaves, t2.leaves
    for tree, leaves in ((t1, leaves1), (t2, leaves2)):
        if len(leaves) > limit:
            raise SizeLimitError(f"{tree!r} has {len(leaves)} leaves; the "
                                 f"labeling enumeration is limited to {limit}")
    if not leaves1 or not leaves2:
        raise LabelingError("both merge trees need at least one leaf")
    table1 = _merge_table(t1, leaves1)
    table2 = _merge_table(t2, leaves2)
    pairs = []
    best = [None]

    def added_cost(a, b):
        cost = abs(table1[a][a] - table2[b][b])
        for other_a, other_b in pairs:
            cost = max(cost, abs(table1[a][other_a] - table2[b][other_b]))
        return cost

    def cover_rest(remaining, current):
        if best[0] is not None and current >= best[0]:
            return
        if not remaining:
            best[0] = current
            return
        b = remaining[0]
        for a in leaves1:
            cost = max(current, added_cost(a, b))
            pairs.append((a, b))
            cover_rest(remaining[1:], cost)
            pairs.pop()

    def assign(index, current):
        if best[0] is not None and current >= best[0]:
            return
        if index == len(leaves1):
            covered = {b for _, b in pairs}
            cover_rest([b for b in leaves2 if b not in covered], current)
            return
        a = leaves1[index]
        for b in leaves2:
            cost = max(current, added_cost(a, b))
            pairs.append((a, b))
            assign(index + 1, cost)
            pairs.pop()

    assign(0, tools.to_rational(0))
    logging.info(f"Minimum labeled distance over labelings of {t1!r} and "
                 f"{t2!r}: {tools.format_rational(best[0])}.")
    return best[0]


def leaf_labeling(tree, order=None):
    """
    Label the leaves of *tree* with 1, 2, ... in the given order (node order
    by default).
    """
    leaves = tree.leaves if order is None else list(order)
    return Labeling(tree.graph, {index + 1: leaf
                                 for index, leaf in enumerate(leaves)})
