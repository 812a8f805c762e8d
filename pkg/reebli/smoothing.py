"""
Smoothing of Reeb graphs.

The epsilon-thickening of a graph is the product of the graph with
``[-epsilon, epsilon]`` under the function ``(x, t) -> f(x) + t``. Its level
set at height *h* is homeomorphic to the part of the graph with values in the
window ``[h - epsilon, h + epsilon]``, so the smoothing (the Reeb graph of the
thickening) is computed by sweeping that window over the critical levels
``f(v) +- epsilon`` and tracking the components of each window with a
union-find structure over *cells*: one cell per node and one per edge.

Besides the smoothed graph, a sweep records which cell lies in which component
at every level and between consecutive levels. This answers the projection
``(x, t) -> R^epsilon`` for any point of the source and yields the shift
morphism, the node correspondence, path neighborhoods and the lifting of
morphisms.
"""
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from types import MappingProxyType

from networkx.utils import UnionFind

from reebli import tools
from reebli.core import EdgePoint, NodeClass, NodePoint, ReebGraph, \
    RouteStep, normalize_superpositions
from reebli.errors import LiftError, MorphismError, PointError


def _cell(point):
    if isinstance(point, NodePoint):
        return ("n", point.node)
    return ("e", point.edge)


def _cell_key(cell):
    kind, ref = cell
    if kind == "n":
        return (0, tools.node_key(ref))
    return (1, (0, ref, ""))


def window_components(graph, low, high):
    """
    Connected components of the part of *graph* with values in the closed
    window ``[low, high]``. Each component is a list of cells, node cells
    first, and components are ordered by their smallest cell.
    """
    union_find = UnionFind()
    cells = []
    for node in graph.nodes:
        if low <= graph.value(node) <= high:
            cell = ("n", node)
            cells.append(cell)
            union_find[cell]
    for key, (lower, upper) in sorted(graph.edges.items()):
        lower_value, upper_value = graph.value(lower), graph.value(upper)
        if lower_value == upper_value:
            if low <= lower_value <= high:
                union_find.union(("n", lower), ("n", upper))
            continue
        if lower_value < high and upper_value > low:
            cell = ("e", key)
            cells.append(cell)
            union_find[cell]
            if lower_value >= low:
                union_find.union(cell, ("n", lower))
            if upper_value <= high:
                union_find.union(cell, ("n", upper))
    groups = {}
    for cell in cells:
        groups.setdefault(union_find[cell], []).append(cell)
    return sorted(groups.values(),
                  key=lambda component: _cell_key(component[0]))


class _Sweep:
    """
    Level-set sweep computing the smoothing of *graph* by a positive
    *epsilon*. Fine nodes are the window components at critical levels, fine
    edges the components between consecutive levels. Fine nodes with one edge
    on either side are suppressed in the resulting graph.

    Sweep positions alternate between levels and slabs: position ``2 * i`` is
    level ``i`` and ``2 * i + 1`` the slab above it. Every cell is active on
    an interval of positions, so a window only visits its active cells. The
    recorded components are those of :func:`window_components`.
    """

    def __init__(self, graph, epsilon):
        self.source = graph
        self.epsilon = epsilon
        self.levels = sorted({graph.value(node) + sign * epsilon
                              for node in graph.nodes for sign in (-1, 1)})
        self.level_components = []
        self.level_cells = []
        self.slab_components = []
        self.slab_cells = []
        for position, components in enumerate(self._windows()):
            if position % 2 == 0:
                self._record(components, self.level_components, self.level_cells)
            else:
                self._record(components, self.slab_components, self.slab_cells)
        self._contract()

    def _index(self, level):
        return bisect_left(self.levels, level)

    def _windows(self):
        graph = self.source
        cells = [("n", node) for node in graph.nodes]
        rank = {node: index for index, node in enumerate(graph.nodes)}
        flat = {node: [] for node in graph.nodes}
        starting = [[] for _ in range(2 * len(self.levels) - 1)]
        ending = [[] for _ in starting]
        for node in graph.nodes:
            first = 2 * self._index(graph.value(node) - self.epsilon)
            last = 2 * self._index(graph.value(node) + self.epsilon)
            starting[first].append(rank[node])
            ending[last].append(rank[node])
        for key, (lower, upper) in sorted(graph.edges.items()):
            if graph.is_flat(key):
                flat[lower].append(upper)
                flat[upper].append(lower)
                continue
            first = 2 * self._index(graph.value(lower) - self.epsilon) + 1
            last = 2 * self._index(graph.value(upper) + self.epsilon) - 1
            starting[first].append(len(cells))
            ending[last].append(len(cells))
            cells.append(("e", key))

        active = set()
        for position, started in enumerate(starting):
            active.update(started)
            union_find = UnionFind()
            ordered = sorted(active)
            for index in ordered:
                kind, ref = cells[index]
                union_find[cells[index]]
                if kind == "n":
                    for other in flat[ref]:
                        if rank[other] in active:
                            union_find.union(cells[index], ("n", other))
                    continue
                for node in graph.edge(ref):
                    if rank[node] in active:
                        union_find.union(cells[index], ("n", node))
            groups = {}
            for index in ordered:
                groups.setdefault(union_find[cells[index]], []).append(cells[index])
            yield list(groups.values())
            active.difference_update(ending[position])

    def _record(self, components, components_list, cells_list):
        components_list.append(components)
        cells_list.append({cell: index
                           for index, component in enumerate(components)
                           for cell in component})

    def _attach(self, level, component):
        # Node cells come first, and node cells of a slab component are
        # always present at the adjacent levels.
        cells = self.level_cells[level]
        for cell in component:
            if cell in cells:
                return cells[cell]
        raise AssertionError(f"slab component {component} does not reach "
                             f"level {level}")

    def _contract(self):
        up = {}
        down = {}
        for level, components in enumerate(self.level_components):
            for index in range(len(components)):
                up[(level, index)] = []
                down[(level, index)] = []
        ends = {}
        for slab, components in enumerate(self.slab_components):
            for index, component in enumerate(components):
                lower = (slab, self._attach(slab, component))
                upper = (slab + 1, self._attach(slab + 1, component))
                ends[(slab, index)] = (lower, upper)
                up[lower].append((slab, index))
                down[upper].append((slab, index))

        def is_regular(fine_node):
            return len(up[fine_node]) == 1 and len(down[fine_node]) == 1

        coarse = {}
        values = {}
        for fine_node in sorted(up):
            if not is_regular(fine_node):
                coarse[fine_node] = len(coarse)
                values[coarse[fine_node]] = self.levels[fine_node[0]]

        self.node_at = {fine_node: ("node", node)
                        for fine_node, node in coarse.items()}
        self.origin = {node: fine_node for fine_node, node in coarse.items()}
        self.edge_at = {}
        self.chains = {}
        edges = {}
        for fine_node in sorted(coarse):
            for fine_edge in up[fine_node]:
                key = len(edges)
                chain = {("slab", fine_edge[0]): fine_edge[1]}
                self.edge_at[fine_edge] = key
                current = ends[fine_edge][1]
                while is_regular(current):
                    chain[("level", current[0])] = current[1]
                    self.node_at[current] = ("edge", key)
                    fine_edge = up[current][0]
                    chain[("slab", fine_edge[0])] = fine_edge[1]
                    self.edge_at[fine_edge] = key
                    current = ends[fine_edge][1]
                edges[key] = (coarse[fine_node], coarse[current])
                self.chains[key] = chain
        self.graph = normalize_superpositions(ReebGraph(values, edges))


class SmoothedReeb:
    """
    The smoothing of *source* by *epsilon*, together with the data needed to
    map points of the source (and of its thickening) into the smoothed graph.
    Use :func:`smooth` to create instances.
    """

    def __init__(self, source, epsilon, sweep=None):
        self.source = source
        self.epsilon = epsilon
        self._sweep = sweep
        self.graph = source if sweep is None else sweep.graph
        self._shift = None
        self._representatives = {}
        self._projections = {}

    def __repr__(self):
        return (f"SmoothedReeb(epsilon={tools.format_rational(self.epsilon)}, "
                f"graph={self.graph!r})")

    @property
    def levels(self):
        """Critical levels of the sweep (empty for epsilon = 0)."""
        return () if self._sweep is None else tuple(self._sweep.levels)

    def _level_point(self, level, index):
        kind, ref = self._sweep.node_at[(level, index)]
        if kind == "node":
            return self.graph.canonical(NodePoint(ref))
        return EdgePoint(ref, self._sweep.levels[level])

    def _locate(self, value):
        """Return ``("level", i)`` or ``("slab", i)`` for *value*."""
        levels = self._sweep.levels
        index = bisect_left(levels, value)
        if index < len(levels) and levels[index] == value:
            return ("level", index)
        if index == 0 or index == len(levels):
            raise PointError(f"value {tools.format_rational(value)} is outside "
                             f"the range of the smoothing")
        return ("slab", index - 1)

    def projection(self, point, offset):
        """
        Image in the smoothed graph of the point ``(point, offset)`` of the
        thickening, where *point* lies on the source and
        ``-epsilon <= offset <= epsilon``.
        """
        point = self.source.check_point(point)
        offset = tools.to_rational(offset)
        if abs(offset) > self.epsilon:
            raise PointError(f"offset {tools.format_rational(offset)} exceeds "
                             f"epsilon {tools.format_rational(self.epsilon)}")
        if self._sweep is None:
            return self.source.canonical(point)
        if (point, offset) not in self._projections:
            self._projections[(point, offset)] = self._project(point, offset)
        return self._projections[(point, offset)]

    def _project(self, point, offset):
        value = self.source.point_value(point) + offset
        kind, index = self._locate(value)
        cell = _cell(point)
        if kind == "level":
            return self._level_point(index, self._sweep.level_cells[index][cell])
        component = self._sweep.slab_cells[index][cell]
        return EdgePoint(self._sweep.edge_at[(index, component)], value)

    def shift(self, point):
        """The shift morphism: the projection of ``(point, 0)``."""
        return self.projection(point, 0)

    def correspondence(self, node):
        """
        The node correspondence: maxima and split nodes are projected from
        offset ``+epsilon``, minima and join nodes from ``-epsilon``. Nodes
        without a smoothing direction are sent to their shift image.
        """
        direction = NodeClass.direction(self.source.node_class(node))
        return self.projection(NodePoint(node), direction * self.epsilon)

    def _component(self, point):
        point = self.graph.canonical(self.graph.check_point(point))
        if isinstance(point, NodePoint):
            level, index = self._sweep.origin[point.node]
            return self._sweep.levels[level], self._sweep.level_components[level][index]
        kind, position = self._locate(point.value)
        index = self._sweep.chains[point.edge][(kind, position)]
        if kind == "level":
            return point.value, self._sweep.level_components[position][index]
        return point.value, self._sweep.slab_components[position][index]

    def _thickening_point(self, value, cell):
        kind, ref = cell
        if kind == "n":
            return (NodePoint(ref), value - self.source.value(ref))
        lower, upper = self.source.edge(ref)
        low = max(self.source.value(lower), value - self.epsilon)
        high = min(self.source.value(upper), value + self.epsilon)
        middle = (low + high) / 2
        return (EdgePoint(ref, middle), value - middle)

    def representatives(self, point):
        """
        All thickening representatives ``(x, t)`` of a point of the smoothed
        graph, one per cell of its level-set component. Node cells come first.
        """
        if self._sweep is None:
            return [(self.source.canonical(self.source.check_point(point)),
                     Fraction(0))]
        value, component = self._component(point)
        return [self._thickening_point(value, cell) for cell in component]

    def representative(self, point):
        """The first of :meth:`representatives`, computed once per point."""
        if self._sweep is None:
            return self.representatives(point)[0]
        point = self.graph.canonical(point)
        if point not in self._representatives:
            value, component = self._component(point)
            self._representatives[point] = self._thickening_point(value,
                                                                  component[0])
        return self._representatives[point]


    def shift_morphism(self):
        """The shift morphism as a :class:`Morphism`, computed once."""
        if self._shift is None:
            self._shift = Morphism.from_evaluator(self.source, self.graph,
                                                  self.shift)
        return self._shift

    def path_neighborhood(self, point):
        return PathNeighborhood.of(self, point)


def smooth(graph, epsilon):
    """
    Compute the smoothing of *graph* by *epsilon*.

    For ``epsilon = 0`` the source graph itself is the smoothed graph, with
    identity projection. Otherwise the smoothed graph has integer node ids
    assigned in sweep order and is superposition-normalized.

    :raises ValueError: if *epsilon* is negative.
    """
    epsilon = tools.to_rational(epsilon)
    if epsilon < 0:
        raise ValueError(f"epsilon must not be negative, got "
                         f"{tools.format_rational(epsilon)}")
    if epsilon == 0:
        return SmoothedReeb(graph, epsilon)
    sweep = _Sweep(graph, epsilon)
    logging.info(f"Smoothed {graph!r} by {tools.format_rational(epsilon)} over "
                 f"{len(sweep.levels)} critical levels: {sweep.graph!r}.")
    return SmoothedReeb(graph, epsilon, sweep)


def shift_eta(smoothing, point):
    return smoothing.shift(point)


class SmoothingTower:
    """
    A graph smoothed once and twice by the same epsilon. The second smoothing
    is taken of the first smoothed graph, which makes the composition of the
    two shift morphisms available as the shift by ``2 * epsilon``.
    """

    def __init__(self, graph, epsilon):
        self.graph = graph
        self.epsilon = tools.to_rational(epsilon)
        self._first = None
        self._second = None

    @property
    def first(self):
        if self._first is None:
            self._first = smooth(self.graph, self.epsilon)
        return self._first

    @property
    def second(self):
        if self._second is None:
            self._second = smooth(self.first.graph, self.epsilon)
        return self._second

    def double_shift(self, point):
        return self.second.shift(self.first.shift(point))


@dataclass(frozen=True, eq=False)
class PathNeighborhood:
    """
    The monotone path ``{projection(point, t) : -epsilon <= t <= epsilon}`` in
    a smoothed graph, centered on the shift image of *point*.
    """
    smoothing: SmoothedReeb
    point: object
    center: object
    low: Fraction
    high: Fraction
    breakpoints: tuple = field(default=())

    @classmethod
    def of(cls, smoothing, point):
        point = smoothing.source.check_point(point)
        value = smoothing.source.point_value(point)
        low, high = value - smoothing.epsilon, value + smoothing.epsilon
        inner = [level for level in smoothing.levels if low < level < high]
        breakpoints = tuple([low] + inner + [high]) if low < high else (low,)
        return cls(smoothing, point, smoothing.shift(point), low, high,
                   breakpoints)

    def at(self, value):
        """The point of the path at *value*."""
        offset = value - self.smoothing.source.point_value(self.point)
        return self.smoothing.projection(self.point, offset)

    def points(self):
        """Points at the breakpoints and at the middle of each segment."""
        values = list(self.breakpoints)
        values += [(a + b) / 2 for a, b in zip(values, values[1:])]
        return [self.at(value) for value in sorted(values)]

    def contains(self, point):
        value = self.smoothing.graph.point_value(point)
        if not self.low <= value <= self.high:
            return False
        return self.smoothing.graph.same_point(self.at(value), point)


def path_neighborhood(smoothing, point):
    return PathNeighborhood.of(smoothing, point)


class Morphism:
    """
    A function-preserving map between two Reeb graphs.

    :param node_images: mapping from every domain node to a codomain point
        with the same value.
    :param routes: mapping from every domain edge key to the sequence of
        :class:`RouteStep` objects its interior is mapped onto, from bottom to
        top. Zero-length edges have empty routes.
    """

    def __init__(self, domain, codomain, node_images, routes):
        self.domain = domain
        self.codomain = codomain
        self.node_images = MappingProxyType(
            {node: codomain.canonical(point) for node, point in node_images.items()})
        self.routes = MappingProxyType(
            {key: tuple(steps) for key, steps in routes.items()})

    def __repr__(self):
        return f"Morphism({self.domain!r} -> {self.codomain!r})"

    @classmethod
    def from_evaluator(cls, domain, codomain, evaluate):
        """
        Build a morphism from a function mapping domain points to codomain
        points. Between two consecutive codomain node values an edge image
        cannot change edges, so one evaluation per such interval determines
        the route.
        """
        node_images = {node: evaluate(NodePoint(node)) for node in domain.nodes}
        node_values = sorted(set(codomain.values.values()))
        routes = {}
        for key, (lower, upper) in domain.edges.items():
            low, high = domain.value(lower), domain.value(upper)
            if low == high:
                routes[key] = ()
                continue
            breakpoints = [low] + [value for value in node_values
                                   if low < value < high] + [high]
            steps = []
            for a, b in zip(breakpoints, breakpoints[1:]):
                image = evaluate(EdgePoint(key, (a + b) / 2))
                if not isinstance(image, EdgePoint):
                    raise MorphismError(f"edge {key} is mapped to {image} "
                                        f"between codomain node values")
                steps.append(RouteStep(image.edge, a, b))
            routes[key] = steps
        return cls(domain, codomain, node_images, routes)

    @classmethod
    def identity(cls, graph):
        return cls(graph, graph, {node: NodePoint(node) for node in graph.nodes},
                   {key: () if graph.is_flat(key) else
                    (RouteStep(key, graph.value(lower), graph.value(upper)),)
                    for key, (lower, upper) in graph.edges.items()})

    @classmethod
    def shift(cls, smoothing):
        return smoothing.shift_morphism()

    def __call__(self, point):
        point = self.domain.check_point(point)
        if isinstance(point, NodePoint):
            return self.node_images[point.node]
        for step in self.routes[point.edge]:
            if step.low <= point.value <= step.high:
                return self.codomain.point_on_edge(step.edge, point.value)
        raise MorphismError(f"route of edge {point.edge} does not cover "
                            f"{tools.format_rational(point.value)}")

    def check(self):
        """
        Verify that the map is function-preserving and continuous.

        :raises MorphismError: naming the first offending node or edge.
        """
        for node in self.domain.nodes:
            if node not in self.node_images:
                raise MorphismError(f"node {node!r} has no image")
            image = self.node_images[node]
            try:
                self.codomain.check_point(image)
            except (PointError, KeyError) as error:
                raise MorphismError(f"image of node {node!r}: {error}")
            if self.codomain.point_value(image) != self.domain.value(node):
                raise MorphismError(f"node {node!r} is not mapped to its value")
        for key, (lower, upper) in sorted(self.domain.edges.items()):
            self._check_route(key, lower, upper)

    def _check_route(self, key, lower, upper):
        steps = self.routes.get(key, ())
        start = self.node_images[lower]
        end = self.node_images[upper]
        if self.domain.is_flat(key):
            if steps or not self.codomain.same_point(start, end):
                raise MorphismError(f"zero-length edge {key} is not collapsed")
            return
        if not steps:
            raise MorphismError(f"edge {key} has no route")
        expected = self.domain.value(lower)
        current = start
        try:
            for step in steps:
                if step.low != expected or step.low >= step.high:
                    raise MorphismError(f"route of edge {key} has a gap at "
                                        f"{tools.format_rational(expected)}")
                entry = self.codomain.point_on_edge(step.edge, step.low)
                if not self.codomain.same_point(entry, current):
                    raise MorphismError(f"route of edge {key} jumps from "
                                        f"{current} to {entry}")
                current = self.codomain.point_on_edge(step.edge, step.high)
                expected = step.high
        except PointError as error:
            raise MorphismError(f"route of edge {key}: {error}")
        if (expected != self.domain.value(upper)
                or not self.codomain.same_point(current, end)):
            raise MorphismError(f"route of edge {key} ends at {current} instead "
                                f"of {end}")

    def same_as(self, other):
        """
        True iff both maps agree on every node and on one point of every
        route step of either map, which decides equality of piecewise
        monotone maps.
        """
        if set(self.node_images) != set(other.node_images):
            return False
        points = self.sample_points() + other.sample_points()
        return all(self.codomain.same_point(self(point), other(point))
                   for point in points)

    def sample_points(self):
        """Domain nodes and one point per route step of every edge."""
        points = [NodePoint(node) for node in self.domain.nodes]
        for key in sorted(self.routes):
            for step in self.routes[key]:
                points.append(EdgePoint(key, (step.low + step.high) / 2))
        return points


def lift_point(phi, domain_smoothing, codomain_smoothing, point):
    """
    Image of a point of the smoothed domain under the lift of *phi*: the
    projection of ``(phi(x), t)`` for a thickening representative ``(x, t)``.
    """
    x, offset = domain_smoothing.representative(point)
    return codomain_smoothing.projection(phi(x), offset)


def _sample_points(graph):
    points = [NodePoint(node) for node in graph.nodes]
    for key, (lower, upper) in sorted(graph.edges.items()):
        if not graph.is_flat(key):
            points.append(EdgePoint(key, (graph.value(lower) + graph.value(upper)) / 2))
    return points


def lift_morphism(phi, delta, domain_smoothing=None, codomain_smoothing=None):
    """
    Lift ``phi: R1 -> R2`` to ``R1^delta -> R2^delta``. The smoothings may be
    passed in to reuse existing sweeps.

    :raises LiftError: if two thickening representatives of a point of
        ``R1^delta`` have different images, which only happens for maps that
        are not morphisms.
    """
    delta = tools.to_rational(delta)
    if delta == 0:
        return phi
    if domain_smoothing is None:
        domain_smoothing = smooth(phi.domain, delta)
    if codomain_smoothing is None:
        codomain_smoothing = smooth(phi.codomain, delta)
    if (domain_smoothing.source is not phi.domain
            or codomain_smoothing.source is not phi.codomain):
        raise MorphismError("the smoothings do not match the morphism")

    target = codomain_smoothing.graph
    for point in _sample_points(domain_smoothing.graph):
        images = {target.canonical(codomain_smoothing.projection(phi(x), offset))
                  for x, offset in domain_smoothing.representatives(point)}
        if len(images) > 1:
            raise LiftError(f"{point} has the images "
                            f"{sorted(str(image) for image in images)}")
    return Morphism.from_evaluator(
        domain_smoothing.graph, target,
        lambda point: lift_point(phi, domain_smoothing, codomain_smoothing, point))


@dataclass(frozen=True)
class Region:
    """
    A part of a graph given by whole nodes and closed pieces
    ``(edge, low, high)`` of edges.
    """
    graph: ReebGraph
    nodes: frozenset
    pieces: tuple

    def contains(self, point):
        point = self.graph.canonical(point)
        if isinstance(point, NodePoint):
            return any(self.graph.same_point(point, NodePoint(node))
                       for node in self.nodes)
        return any(key == point.edge and low <= point.value <= high
                   for key, low, high in self.pieces)

    def sample_points(self):
        """Nodes plus both ends and the middle of every piece."""
        points = [NodePoint(node) for node in sorted(self.nodes, key=tools.node_key)]
        for key, low, high in self.pieces:
            for value in (low, (low + high) / 2, high):
                point = self.graph.point_on_edge(key, value)
                if point not in points:
                    points.append(point)
        return points


def _one_sided_region(graph, node, low, high):
    nodes = {node}
    queue = [node]
    pieces = []
    while queue:
        current = queue.pop()
        for key in graph.incident_edges(current):
            lower, upper = graph.edge(key)
            other = upper if current == lower else lower
            if low <= graph.value(other) <= high:
                if other not in nodes:
                    nodes.add(other)
                    queue.append(other)
            piece_low = max(graph.value(lower), low)
            piece_high = min(graph.value(upper), high)
            if piece_low < piece_high:
                pieces.append((key, piece_low, piece_high))
    return nodes, pieces


def _merge_pieces(pieces):
    merged = []
    for key, low, high in sorted(pieces):
        if merged and merged[-1][0] == key and low <= merged[-1][2]:
            merged[-1] = (key, merged[-1][1], max(high, merged[-1][2]))
        else:
            merged.append((key, low, high))
    return tuple(merged)


def n_eps_region(graph, node, epsilon):
    """
    The points connected to *node* by a path of height at most *epsilon*
    that stays at or above the value of *node*, or at or below it.

    :raises UnknownNodeError: if *node* is not in *graph*.
    """
    epsilon = tools.to_rational(epsilon)
    value = graph.value(node)
    above_nodes, above = _one_sided_region(graph, node, value, value + epsilon)
    below_nodes, below = _one_sided_region(graph, node, value - epsilon, value)
    return Region(graph, frozenset(above_nodes | below_nodes),
                  _merge_pieces(above + below))
