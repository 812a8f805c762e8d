"""
The Reeb graph data model: graphs with exact rational node values, points on
their geometric realization, validation, node classification, the
normalization of degenerate nodes and a function-preserving isomorphism test.

A Reeb graph is stored as an undirected multigraph. The orientation of an edge
is derived from the values of its end points; the only edges whose end points
share a value are the zero-length edges of *superposition pairs*, which
replace a degenerate node by a join part sitting below a split part.
"""
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import logging
from types import MappingProxyType

import networkx as nx

from reebli import tools
from reebli.errors import PointError, SizeLimitError, UnknownNodeError, \
    ValidationError
from reebli.settings import resolve


class NodeClass:
    """
    Classes of nodes. The class of a node only depends on its up-degree and
    down-degree, see :meth:`from_degrees`.
    """

    MINIMUM = "minimum"
    """Up-degree 1, down-degree 0."""
    MAXIMUM = "maximum"
    """Up-degree 0, down-degree 1."""
    JOIN = "join"
    """Up-degree 1, down-degree at least 2."""
    SPLIT = "split"
    """Up-degree at least 2, down-degree 1."""
    REGULAR = "regular"
    """Up-degree 1, down-degree 1."""
    DEGENERATE = "degenerate"
    """
    Any other combination. Degenerate nodes are replaced by superposition
    pairs in :func:`normalize_superpositions`.
    """

    UP_MOVERS = frozenset({MAXIMUM, SPLIT})
    """Classes whose nodes move up by epsilon when smoothed."""
    DOWN_MOVERS = frozenset({MINIMUM, JOIN})
    """Classes whose nodes move down by epsilon when smoothed."""

    @classmethod
    def from_degrees(cls, up, down):
        if (up, down) == (0, 1):
            return cls.MAXIMUM
        if (up, down) == (1, 0):
            return cls.MINIMUM
        if (up, down) == (1, 1):
            return cls.REGULAR
        if up > 1 and down == 1:
            return cls.SPLIT
        if up == 1 and down > 1:
            return cls.JOIN
        return cls.DEGENERATE

    @classmethod
    def direction(cls, node_class):
        """
        Return +1 for classes moving up under smoothing, -1 for classes moving
        down, and 0 for regular and degenerate nodes.
        """
        if node_class in cls.UP_MOVERS:
            return 1
        if node_class in cls.DOWN_MOVERS:
            return -1
        return 0


@dataclass(frozen=True)
class NodePoint:
    """The point of the geometric realization sitting at a node."""
    node: object

    def __str__(self):
        return f"node {self.node}"


@dataclass(frozen=True)
class EdgePoint:
    """
    A point in the interior of an edge, identified by the edge key and its
    value, which lies strictly between the values of the end points.
    """
    edge: int
    value: Fraction

    def __str__(self):
        return f"edge {self.edge} at {tools.format_rational(self.value)}"


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: object
    message: str


@dataclass
class ValidationReport:
    """
    Result of :func:`validate`. A report is truthy iff it lists no
    violations.
    """
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, kind, subject, message):
        self.violations.append(Violation(kind, subject, message))

    def kinds(self):
        return {violation.kind for violation in self.violations}

    def raise_if_invalid(self):
        if not self.ok:
            raise ValidationError(self)


class ReebGraph:
    """
    Finite multigraph with rational node values.

    :param values: mapping from node ids (integers or strings) to values.
        Values are converted with :func:`reebli.tools.to_rational`.
    :param edges: either an iterable of node pairs, whose keys are their
        positions, or a mapping from integer edge keys to node pairs.
    :param superpositions: pairs ``(join_part, split_part)`` of nodes that
        replace a degenerate node. The two nodes share their value and are
        connected by one zero-length edge, oriented from the join part to the
        split part.

    Graphs are not validated on construction (use :func:`validate`), but they
    must only reference known nodes. They are never modified after
    construction; all operations return new graphs.
    """

    def __init__(self, values, edges, superpositions=()):
        self._values = {node: tools.to_rational(value)
                        for node, value in values.items()}
        self._superpositions = tuple(tuple(pair) for pair in superpositions)
        self._partner = {}
        for join_part, split_part in self._superpositions:
            for node in (join_part, split_part):
                if node not in self._values:
                    raise UnknownNodeError(node)
            self._partner[join_part] = split_part
            self._partner[split_part] = join_part
        pair_set = frozenset(self._superpositions)
        self._pair_set = pair_set

        items = edges.items() if isinstance(edges, Mapping) else enumerate(edges)
        self._edges = {}
        for key, (u, v) in items:
            for node in (u, v):
                if node not in self._values:
                    raise UnknownNodeError(node)
            self._edges[int(key)] = self._orient(u, v, pair_set)

        self._nodes = tuple(sorted(self._values, key=tools.node_key))
        self._up = {node: [] for node in self._nodes}
        self._down = {node: [] for node in self._nodes}
        for key in sorted(self._edges):
            lower, upper = self._edges[key]
            self._up[lower].append(key)
            self._down[upper].append(key)

        graph = nx.MultiGraph()
        for node in self._nodes:
            graph.add_node(node, value=self._values[node])
        for key, (lower, upper) in sorted(self._edges.items()):
            graph.add_edge(lower, upper, key=key)
        self._graph = nx.freeze(graph)
        self._upward = None
        self._reachable = {}

    def _orient(self, u, v, pair_set):
        if self._values[u] < self._values[v]:
            return (u, v)
        if self._values[v] < self._values[u]:
            return (v, u)
        if (v, u) in pair_set:
            return (v, u)
        return (u, v)

    @classmethod
    def from_records(cls, nodes, edges, superpositions=()):
        """
        Build a graph from raw records and report structural problems that
        cannot be represented in a :class:`ReebGraph`, namely duplicate node
        ids and edges referencing unknown nodes.

        :param nodes: iterable of ``(node_id, value)`` pairs.
        :raises ValidationError: if a node id repeats or an edge or
            superposition mentions an unknown node.
        """
        report = ValidationReport()
        values = {}
        for node, value in nodes:
            if node in values:
                report.add("duplicate-node", node,
                           f"node id {node!r} is used more than once")
                continue
            values[node] = value
        edges = list(edges)
        superpositions = list(superpositions)
        for index, (u, v) in enumerate(edges):
            for node in (u, v):
                if node not in values:
                    report.add("unknown-node", (u, v),
                               f"edge {index} references unknown node {node!r}")
        for pair in superpositions:
            for node in pair:
                if node not in values:
                    report.add("unknown-node", tuple(pair),
                               f"superposition references unknown node {node!r}")
        report.raise_if_invalid()
        return cls(values, edges, superpositions)

    def __repr__(self):
        return (f"ReebGraph(nodes={len(self._nodes)}, edges={len(self._edges)}, "
                f"superpositions={len(self._superpositions)})")

    def __contains__(self, node):
        return node in self._values

    def __len__(self):
        return len(self._nodes)

    @property
    def nodes(self):
        """Node ids in deterministic order."""
        return self._nodes

    @property
    def values(self):
        return MappingProxyType(self._values)

    @property
    def edges(self):
        """Mapping from edge keys to ``(lower, upper)`` node pairs."""
        return MappingProxyType(self._edges)

    @property
    def superpositions(self):
        return self._superpositions

    @property
    def nx_graph(self):
        """The underlying frozen :class:`networkx.MultiGraph`."""
        return self._graph

    def value(self, node):
        try:
            return self._values[node]
        except KeyError:
            raise UnknownNodeError(node) from None

    def _require(self, node):
        if node not in self._values:
            raise UnknownNodeError(node)

    def edge(self, key):
        try:
            return self._edges[key]
        except KeyError:
            raise PointError(f"unknown edge {key!r}") from None

    def lower(self, key):
        return self.edge(key)[0]

    def upper(self, key):
        return self.edge(key)[1]

    def is_flat(self, key):
        lower, upper = self.edge(key)
        return self._values[lower] == self._values[upper]

    def other_end(self, key, node):
        lower, upper = self.edge(key)
        return upper if node == lower else lower

    def up_edges(self, node):
        self._require(node)
        return tuple(self._up[node])

    def down_edges(self, node):
        self._require(node)
        return tuple(self._down[node])

    def up_degree(self, node):
        return len(self.up_edges(node))

    def down_degree(self, node):
        return len(self.down_edges(node))

    def edges_between(self, u, v):
        return [key for key, ends in self._edges.items()
                if ends == (u, v) or ends == (v, u)]

    def incident_edges(self, node):
        self._require(node)
        seen = []
        for key in self._up[node] + self._down[node]:
            if key not in seen:
                seen.append(key)
        return seen

    def partner(self, node):
        """The other member of the superposition pair of *node*, or None."""
        self._require(node)
        return self._partner.get(node)

    def node_class(self, node):
        return NodeClass.from_degrees(self.up_degree(node),
                                      self.down_degree(node))

    def critical_nodes(self):
        return [node for node in self._nodes
                if NodeClass.direction(self.node_class(node)) != 0]

    @property
    def min_value(self):
        return min(self._values.values())

    @property
    def max_value(self):
        return max(self._values.values())

    @property
    def upward(self):
        """
        Directed graph with one arc per edge, from its lower to its upper end
        point. Monotone paths of the Reeb graph are the directed paths.
        """
        if self._upward is None:
            upward = nx.DiGraph()
            upward.add_nodes_from(self._nodes)
            for lower, upper in self._edges.values():
                if lower != upper:
                    upward.add_edge(lower, upper)
            self._upward = nx.freeze(upward)
        return self._upward

    def is_connected(self):
        return bool(self._nodes) and nx.is_connected(self._graph)

    def betti_number(self):
        """First Betti number, |E| - |V| + number of components."""
        if not self._nodes:
            return 0
        components = nx.number_connected_components(self._graph)
        return len(self._edges) - len(self._nodes) + components

    def is_tree(self):
        return self.is_connected() and len(self._edges) == len(self._nodes) - 1

    # Points of the geometric realization.

    def check_point(self, point):
        """
        Return *point* if it lies on this graph.

        :raises UnknownNodeError: for node points of unknown nodes.
        :raises PointError: for edge points off the graph.
        """
        if isinstance(point, NodePoint):
            self._require(point.node)
            return point
        if isinstance(point, EdgePoint):
            lower, upper = self.edge(point.edge)
            if not self._values[lower] < point.value < self._values[upper]:
                raise PointError(
                    f"{point} is not strictly inside edge {point.edge} "
                    f"[{tools.format_rational(self._values[lower])}, "
                    f"{tools.format_rational(self._values[upper])}]")
            return point
        raise PointError(f"{point!r} is not a graph point")

    def point_value(self, point):
        if isinstance(point, NodePoint):
            return self.value(point.node)
        return point.value

    def canonical(self, point):
        """
        Identify the two members of a superposition pair: points at a split
        part are replaced by the point at its join part.
        """
        if isinstance(point, NodePoint):
            partner = self._partner.get(point.node)
            if partner is not None and self._edges_from_pair(partner, point.node):
                return NodePoint(partner)
        return point

    def _edges_from_pair(self, join_part, split_part):
        return (join_part, split_part) in self._pair_set

    def same_point(self, a, b):
        return self.canonical(a) == self.canonical(b)

    def point_on_edge(self, key, value):
        """
        The point of edge *key* at *value*; a node point if *value* is the
        value of an end point.
        """
        lower, upper = self.edge(key)
        if value == self._values[lower]:
            return self.canonical(NodePoint(lower))
        if value == self._values[upper]:
            return self.canonical(NodePoint(upper))
        if not self._values[lower] < value < self._values[upper]:
            raise PointError(f"value {tools.format_rational(value)} is outside "
                             f"edge {key}")
        return EdgePoint(key, Fraction(value))

    def points_at(self, value):
        """All points with the given value, one per pair of superposed nodes."""
        points = []
        for node in self._nodes:
            if self._values[node] == value:
                point = self.canonical(NodePoint(node))
                if point not in points:
                    points.append(point)
        for key in sorted(self._edges):
            lower, upper = self._edges[key]
            if self._values[lower] < value < self._values[upper]:
                points.append(EdgePoint(key, Fraction(value)))
        return points

    def _reachable_from(self, node):
        if node not in self._reachable:
            self._reachable[node] = nx.descendants(self.upward, node)
        return self._reachable[node]

    def reaches_up(self, a, b):
        """
        True iff a monotone path leads upward from point *a* to point *b*.
        """
        value_a, value_b = self.point_value(a), self.point_value(b)
        if value_a > value_b:
            return False
        a, b = self.canonical(a), self.canonical(b)
        if a == b:
            return True
        if value_a == value_b:
            return False
        if (isinstance(a, EdgePoint) and isinstance(b, EdgePoint)
                and a.edge == b.edge):
            return True
        top = a.node if isinstance(a, NodePoint) else self.upper(a.edge)
        bottom = b.node if isinstance(b, NodePoint) else self.lower(b.edge)
        return top == bottom or bottom in self._reachable_from(top)

    def monotone_route(self, a, b):
        """
        Route of the monotone path from point *a* up to point *b* as a list of
        :class:`RouteStep`. Zero-length edges are skipped. On graphs with
        cycles the route is one of possibly several monotone paths.

        :raises PointError: if there is no such path.
        """
        if not self.reaches_up(a, b):
            raise PointError(f"no monotone path from {a} up to {b}")
        value_a, value_b = self.point_value(a), self.point_value(b)
        if value_a == value_b:
            return []
        if (isinstance(a, EdgePoint) and isinstance(b, EdgePoint)
                and a.edge == b.edge):
            return [RouteStep(a.edge, value_a, value_b)]
        steps = []
        if isinstance(a, EdgePoint):
            top = self.upper(a.edge)
            steps.append(RouteStep(a.edge, value_a, self._values[top]))
        else:
            top = a.node
        if isinstance(b, EdgePoint):
            bottom = self.lower(b.edge)
        else:
            bottom = b.node
        path = nx.shortest_path(self.upward, top, bottom)
        for u, v in zip(path, path[1:]):
            if self._values[u] == self._values[v]:
                continue
            key = min(k for k in self._up[u] if self._edges[k][1] == v)
            steps.append(RouteStep(key, self._values[u], self._values[v]))
        if isinstance(b, EdgePoint):
            steps.append(RouteStep(b.edge, self._values[bottom], value_b))
        return steps

    def same_structure(self, other):
        """
        True iff both graphs have the same node ids, values, edge keys,
        edge end points and superposition pairs.
        """
        return (self._values == other._values
                and self._edges == other._edges
                and set(self._superpositions) == set(other._superpositions))

    def relabeled(self, mapping):
        """Copy of the graph with node ids replaced according to *mapping*."""
        rename = lambda node: mapping.get(node, node)
        return ReebGraph(
            {rename(node): value for node, value in self._values.items()},
            {key: (rename(u), rename(v)) for key, (u, v) in self._edges.items()},
            [(rename(j), rename(s)) for j, s in self._superpositions])


@dataclass(frozen=True)
class RouteStep:
    """
    Part of the image of an edge under a morphism: the sub-interval
    ``[low, high]`` of the codomain edge *edge*.
    """
    edge: int
    low: Fraction
    high: Fraction


def validate(graph, strict=True):
    """
    Check the invariants of a Reeb graph and return a
    :class:`ValidationReport` listing every violation.

    :param strict: additionally require the node values to be injective
        outside superposition pairs. Input graphs are validated strictly;
        graphs derived by smoothing or built as counterexamples may have
        several critical nodes on the same level and are validated with
        ``strict=False``.
    """
    report = ValidationReport()
    if not graph.nodes:
        report.add("empty", None, "the graph has no nodes")
        return report
    for key, (lower, upper) in sorted(graph.edges.items()):
        if lower == upper:
            report.add("self-loop", key, f"edge {key} is a loop at {lower!r}")
    if not graph.is_connected():
        components = sorted(
            (sorted(component, key=tools.node_key)
             for component in nx.connected_components(graph.nx_graph)),
            key=lambda component: tools.node_key(component[0]))
        report.add("disconnected", [component[0] for component in components],
                   f"the graph has {len(components)} connected components")

    pairs = set(graph.superpositions)
    members = defaultdict(int)
    for join_part, split_part in graph.superpositions:
        members[join_part] += 1
        members[split_part] += 1
        if graph.value(join_part) != graph.value(split_part):
            report.add("superposition", (join_part, split_part),
                       "the members of a superposition pair must share their "
                       "value")
        count = len(graph.edges_between(join_part, split_part))
        if count != 1:
            report.add("superposition", (join_part, split_part),
                       f"superposed nodes are connected by {count} edges "
                       f"instead of one")
    for node, count in members.items():
        if count > 1:
            report.add("superposition", node,
                       f"node {node!r} is a member of {count} superposition "
                       f"pairs")

    for key, (lower, upper) in sorted(graph.edges.items()):
        if lower == upper:
            continue
        if (graph.value(lower) == graph.value(upper)
                and (lower, upper) not in pairs):
            report.add("flat-edge", key,
                       f"edge {key} connects {lower!r} and {upper!r} with "
                       f"equal values outside a superposition pair")

    if strict:
        by_value = defaultdict(list)
        for node in graph.nodes:
            by_value[graph.value(node)].append(node)
        for value, nodes in sorted(by_value.items()):
            if len(nodes) == 1:
                continue
            if len(nodes) == 2 and (tuple(nodes) in pairs
                                    or tuple(reversed(nodes)) in pairs):
                continue
            report.add("value-collision", nodes,
                       f"nodes {nodes!r} share the value "
                       f"{tools.format_rational(value)}")
    return report


def classify_node(graph, node):
    """
    Return the :class:`NodeClass` of *node*.

    :raises UnknownNodeError: if *node* is not in *graph*.
    """
    return graph.node_class(node)


class _FreshIds:
    """Generator of node ids that do not occur in a graph."""

    def __init__(self, graph):
        self.taken = set(graph.nodes)
        ints = [node for node in graph.nodes if tools.node_key(node)[0] == 0]
        self.counter = itertools.count(max(ints) + 1 if ints else 0)

    def __call__(self, base):
        if tools.node_key(base)[0] == 0:
            candidate = next(self.counter)
        else:
            candidate = f"{base}+"
            while candidate in self.taken:
                candidate += "+"
        self.taken.add(candidate)
        return candidate


def normalize_superpositions(graph):
    """
    Replace every degenerate node by a superposition pair. The original node
    keeps its id and its down-edges and becomes the join part; a new split part
    with the same value takes over the up-edges, and a zero-length edge joins
    the two. Existing node ids and edge keys stay valid, so points of the input
    graph are points of the output graph.
    """
    degenerate = [node for node in graph.nodes
                  if graph.node_class(node) == NodeClass.DEGENERATE
                  and graph.up_degree(node) + graph.down_degree(node) > 0
                  and not any(graph.is_flat(key)
                              for key in graph.incident_edges(node))]
    if not degenerate:
        return graph
    fresh = _FreshIds(graph)
    values = dict(graph.values)
    edges = dict(graph.edges)
    superpositions = list(graph.superpositions)
    next_key = max(edges, default=-1) + 1
    for node in degenerate:
        split_part = fresh(node)
        values[split_part] = graph.value(node)
        for key in graph.up_edges(node):
            lower, upper = edges[key]
            edges[key] = (split_part, upper)
        edges[next_key] = (node, split_part)
        next_key += 1
        superpositions.append((node, split_part))
        logging.debug(f"Split degenerate node {node!r} into a superposition "
                      f"pair with {split_part!r}.")
    return ReebGraph(values, edges, superpositions)


def suppress_regular(graph):
    """
    Remove regular nodes by merging their two edges. Each merged edge keeps the
    key of its lowest part.
    """
    def is_regular(node):
        return (graph.node_class(node) == NodeClass.REGULAR
                and graph.partner(node) is None)

    kept = [node for node in graph.nodes if not is_regular(node)]
    if len(kept) == len(graph.nodes):
        return graph
    edges = {}
    for node in kept:
        for key in graph.up_edges(node):
            upper = graph.upper(key)
            while is_regular(upper):
                upper = graph.upper(graph.up_edges(upper)[0])
            edges[key] = (node, upper)
    return ReebGraph({node: graph.value(node) for node in kept}, edges,
                     graph.superpositions)


def _matching_graph(graph):
    matching = nx.MultiGraph()
    for node in graph.nodes:
        matching.add_node(node, value=graph.value(node),
                          kind=graph.node_class(node))
    for key, (lower, upper) in graph.edges.items():
        matching.add_edge(lower, upper, key=key)
    return matching


def function_preserving_isomorphic(g1, g2, settings=None):
    """
    Decide whether there is an isomorphism between *g1* and *g2* preserving
    node values. Both graphs are normalized and regular nodes are suppressed
    first, so the test compares geometric realizations rather than
    subdivisions.

    :raises SizeLimitError: if a graph has more nodes than
        :attr:`Settings.isomorphism_limit <reebli.settings.Settings>`.
    """
    limit = resolve(settings).isomorphism_limit
    for graph in (g1, g2):
        if len(graph.nodes) > limit:
            raise SizeLimitError(
                f"Isomorphism test limited to {limit} nodes, got "
                f"{len(graph.nodes)}.")
    r1 = suppress_regular(normalize_superpositions(g1))
    r2 = suppress_regular(normalize_superpositions(g2))
    if len(r1.edges) != len(r2.edges):
        return False
    if sorted(r1.values.values()) != sorted(r2.values.values()):
        return False
    return nx.is_isomorphic(
        _matching_graph(r1), _matching_graph(r2),
        node_match=lambda a, b: a["value"] == b["value"] and a["kind"] == b["kind"])


def perturb_ties(graph):
    """
    Separate nodes sharing a value by a deterministic symbolic perturbation:
    within a group of tied nodes (superposition pairs count as one), the i-th
    node in id order is raised by ``i * tau``, where *tau* is small enough to
    keep the order of distinct values.
    """
    units = []
    seen = set()
    for node in graph.nodes:
        if node in seen:
            continue
        partner = graph.partner(node)
        unit = (node,) if partner is None else (node, partner)
        seen.update(unit)
        units.append(unit)
    groups = defaultdict(list)
    for unit in units:
        groups[graph.value(unit[0])].append(unit)
    if all(len(group) == 1 for group in groups.values()):
        return graph
    distinct = sorted(groups)
    gaps = [b - a for a, b in zip(distinct, distinct[1:])]
    gap = min(gaps) if gaps else Fraction(1)
    largest = max(len(group) for group in groups.values())
    tau = gap / (2 * (largest + 1))
    values = dict(graph.values)
    for value, group in groups.items():
        for index, unit in enumerate(group):
            for node in unit:
                values[node] = value + index * tau
    logging.info(f"Perturbed {sum(len(g) - 1 for g in groups.values() if len(g) > 1)} "
                 f"tied node value(s) by multiples of {tools.format_rational(tau)}.")
    return ReebGraph(values, graph.edges, graph.superpositions)
