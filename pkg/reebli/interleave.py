"""
Labeled interleaving distance of contour trees.

For a fixed epsilon, a labeled epsilon-interleaving between two labeled trees
is searched in two steps. The *existence* step finds the function-preserving
maps ``phi: T1 -> T2^epsilon`` and ``psi: T2 -> T1^epsilon`` that satisfy the
label conditions. Each labeled node has a finite set of admissible images; on
a tree the map is determined by its node images, and the admissible images
are propagated along the tree by arc consistency. The *commutativity* step
checks that the lifted compositions equal the shifts by ``2 * epsilon``.

The distance is the smallest feasible epsilon, found by binary search over a
finite set of event values.
"""
from collections import deque
from dataclasses import dataclass, field
import itertools
import logging

import networkx as nx

from reebli import tools
from reebli.core import EdgePoint, NodeClass, NodePoint
from reebli.errors import LabelingError, MorphismError, NotATreeError, \
    SizeLimitError, UnknownNodeError
from reebli.settings import resolve
from reebli.smoothing import Morphism, SmoothingTower, lift_point


class Labeling:
    """
    Assignment of labels (integers) to nodes of *graph*. Several labels may
    share a node, and either member of a superposition pair may be labeled.

    :raises UnknownNodeError: if a label is assigned to a node that is not in
        *graph*.
    """

    def __init__(self, graph, assignment):
        self.graph = graph
        self._assignment = {}
        for label, node in dict(assignment).items():
            if node not in graph:
                raise UnknownNodeError(node)
            self._assignment[label] = node
        self.labels = tuple(sorted(self._assignment))

    def __repr__(self):
        return f"Labeling({self._assignment!r})"

    def __len__(self):
        return len(self._assignment)

    def __getitem__(self, label):
        try:
            return self._assignment[label]
        except KeyError:
            raise LabelingError(f"label {label!r} is not assigned") from None

    def items(self):
        return [(label, self._assignment[label]) for label in self.labels]

    @property
    def nodes(self):
        return frozenset(self._assignment.values())

    def labels_of(self, node):
        return [label for label in self.labels if self._assignment[label] == node]

    def on(self, graph, mapping=None):
        """The same labeling on another graph, renaming nodes by *mapping*."""
        mapping = mapping or {}
        return Labeling(graph, {label: mapping.get(node, node)
                                for label, node in self._assignment.items()})

    @classmethod
    def from_nodes(cls, graph, nodes):
        """Label *nodes* with 1, 2, ... in the given order."""
        return cls(graph, {index + 1: node for index, node in enumerate(nodes)})

    @classmethod
    def full(cls, graph):
        return cls.from_nodes(graph, graph.nodes)

    @classmethod
    def leaves(cls, graph):
        return cls.from_nodes(graph, [node for node in graph.nodes
                                      if len(graph.incident_edges(node)) == 1])


def _require_same_labels(l1, l2):
    if l1.labels != l2.labels:
        raise LabelingError(f"label sets differ: {list(l1.labels)} and "
                            f"{list(l2.labels)}")


def check_consistent(l1, l2):
    """
    True iff the nodes sharing a label move in the same direction when
    smoothed: both are maxima or splits, or both are minima or joins. Labels
    on regular (or degenerate) nodes make the pair inconsistent.

    :raises LabelingError: if the label sets differ.
    """
    _require_same_labels(l1, l2)
    for label in l1.labels:
        first = l1.graph.node_class(l1[label])
        second = l2.graph.node_class(l2[label])
        direction = NodeClass.direction(first)
        if direction == 0 or direction != NodeClass.direction(second):
            logging.debug(f"Label {label} is inconsistent: {l1[label]!r} is a "
                          f"{first} node, {l2[label]!r} is a {second} node.")
            return False
    return True


def check_spanning(graph, labeling):
    """
    True iff any two labeled nodes are connected by at most one simple path
    without labeled interior nodes, and these paths cover every edge.

    Such paths either are single edges between labeled nodes or pass through
    one component of unlabeled nodes. A component is covered exactly once iff,
    together with its attaching edges, it forms a tree whose leaves are
    distinct labeled nodes.
    """
    labeled = labeling.nodes
    connected_pairs = set()

    def connect(pair):
        if pair in connected_pairs:
            logging.debug(f"Labeled nodes {sorted(pair, key=tools.node_key)} "
                          f"are connected by more than one path.")
            return False
        connected_pairs.add(pair)
        return True

    for key, (lower, upper) in sorted(graph.edges.items()):
        if lower in labeled and upper in labeled:
            if not connect(frozenset((lower, upper))):
                return False

    unlabeled = [node for node in graph.nodes if node not in labeled]
    components = nx.connected_components(graph.nx_graph.subgraph(unlabeled))
    for component in components:
        terminals = []
        internal = 0
        degree = dict.fromkeys(component, 0)
        for node in component:
            for key in graph.incident_edges(node):
                other = graph.other_end(key, node)
                degree[node] += 1
                if other in labeled:
                    terminals.append(other)
                elif node == graph.lower(key):
                    internal += 1
        if len(terminals) < 2 or len(set(terminals)) < len(terminals):
            logging.debug(f"Unlabeled nodes {sorted(component, key=tools.node_key)} "
                          f"are not covered exactly once.")
            return False
        if internal + len(terminals) != len(component) + len(terminals) - 1:
            return False
        if any(count == 1 for count in degree.values()):
            return False
        for pair in itertools.combinations(terminals, 2):
            if not connect(frozenset(pair)):
                return False
    return True


class Essentiality:
    """Results of :func:`classify_essential`."""

    ESSENTIAL = "essential"
    INESSENTIAL = "inessential"
    NOT_APPLICABLE = "not-applicable"


def _reach(graph, start, forbidden, low, high, sign):
    """Nodes reachable from *start* without visiting *forbidden* while the
    signed value stays in ``[low, high]``."""
    value = lambda node: sign * graph.value(node)
    if not low <= value(start) <= high or start == forbidden:
        return set()
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for key in graph.incident_edges(node):
            other = graph.other_end(key, node)
            if other != forbidden and other not in seen and low <= value(other) <= high:
                seen.add(other)
                queue.append(other)
    return seen


def classify_essential(graph, node, epsilon):
    """
    Decide whether a split or join node is epsilon-essential.

    A split node *v* is inessential if two paths leaving it by different
    upward edges meet at a join node while staying within
    ``[f(v), f(v) + 4 * epsilon]``, or if at most one of its upward edges
    starts a path that reaches ``f(v) + 2 * epsilon`` without going below
    ``f(v)``. Join nodes are treated symmetrically. Maxima and minima are
    always essential; regular and degenerate nodes are not classified.

    :raises UnknownNodeError: if *node* is not in *graph*.
    """
    epsilon = tools.to_rational(epsilon)
    node_class = graph.node_class(node)
    if node_class in (NodeClass.MAXIMUM, NodeClass.MINIMUM):
        return Essentiality.ESSENTIAL
    if node_class == NodeClass.SPLIT:
        sign, branches, meeting = 1, graph.up_edges(node), NodeClass.JOIN
    elif node_class == NodeClass.JOIN:
        sign, branches, meeting = -1, graph.down_edges(node), NodeClass.SPLIT
    else:
        return Essentiality.NOT_APPLICABLE
    base = sign * graph.value(node)

    reaches = [_reach(graph, graph.other_end(key, node), node, base,
                      base + 4 * epsilon, sign) for key in branches]
    for first, second in itertools.combinations(reaches, 2):
        if any(graph.node_class(other) == meeting for other in first & second):
            return Essentiality.INESSENTIAL

    tall = 0
    for key in branches:
        reached = _reach(graph, graph.other_end(key, node), node, base,
                         float("inf"), sign)
        if any(sign * graph.value(other) >= base + 2 * epsilon
               for other in reached):
            tall += 1
    if tall <= 1:
        return Essentiality.INESSENTIAL
    return Essentiality.ESSENTIAL


@dataclass(frozen=True)
class Witness:
    """
    The first violated constraint of an infeasible probe. *stage* is one of
    ``node-constraint``, ``candidates``, ``path-extension``,
    ``commutativity``, ``label-condition`` and ``morphism``.
    """
    stage: str
    subject: object
    message: str

    def __str__(self):
        return f"{self.stage} ({self.subject}): {self.message}"


@dataclass(frozen=True)
class CandidateSet:
    node: object
    epsilon: object
    candidates: tuple

    def __len__(self):
        return len(self.candidates)


def node_image_forced(graph1, node, tower2, partner):
    """
    The image that the lift of ``phi`` must assign to the corresponding point
    of labeled *node*: the point of the path neighborhood of the
    corresponding point of *partner* at the value of the former. Returns
    ``None`` if the values are more than epsilon apart.
    """
    epsilon = tower2.epsilon
    direction = NodeClass.direction(graph1.node_class(node))
    target = graph1.value(node) + direction * epsilon
    anchor = tower2.first.correspondence(partner)
    offset = target - tower2.first.graph.point_value(anchor)
    if abs(offset) > epsilon:
        return None
    return tower2.second.projection(anchor, offset)


def candidate_set(tower2, forced, node_class, node=None):
    """
    All points of ``T2^epsilon`` whose vertical segment in the next thickening
    reaches *forced* at offset ``+epsilon`` (maxima and splits) or
    ``-epsilon`` (minima and joins).
    """
    epsilon = tower2.epsilon
    offset = NodeClass.direction(node_class) * epsilon
    smoothed = tower2.first.graph
    level = tower2.second.graph.point_value(forced) - offset
    candidates = tuple(
        point for point in smoothed.points_at(level)
        if tower2.second.graph.same_point(tower2.second.projection(point, offset),
                                          forced))
    logging.debug(f"Candidates of node {node!r}: "
                  f"{[str(point) for point in candidates]}.")
    return CandidateSet(node, epsilon, candidates)


@dataclass(frozen=True)
class ExtensionResult:
    morphisms: tuple
    witness: Witness = None

    @property
    def feasible(self):
        return bool(self.morphisms)

    @property
    def morphism(self):
        return self.morphisms[0] if self.morphisms else None


def _fits(tree, codomain, key, node_a, image_a, node_b, image_b):
    images = {node_a: image_a, node_b: image_b}
    lower, upper = tree.edge(key)
    return codomain.reaches_up(images[lower], images[upper])


def _tree_morphism(tree, codomain, images):
    routes = {}
    for key, (lower, upper) in tree.edges.items():
        if tree.is_flat(key):
            routes[key] = ()
        else:
            routes[key] = codomain.monotone_route(images[lower], images[upper])
    return Morphism(tree, codomain, images, routes)


def extend_unique_tree(tree, codomain, candidates, root=None, settings=None):
    """
    Extend admissible images of some nodes of *tree* to function-preserving
    maps ``tree -> codomain``.

    :param candidates: mapping from nodes of *tree* to the admissible images
        in *codomain*. Other nodes may map to any point at their value.
    :param root: node from which the tree is traversed.

    The tree is rooted at *root* and the admissible images are filtered by
    arc consistency, first from the leaves to the root and then back. On a
    tree every remaining image then extends to a full map. On valid input
    the map is unique.

    :raises NotATreeError: if *tree* has a cycle.
    :raises SizeLimitError: if there are more extensions than
        :attr:`Settings.max_extensions <reebli.settings.Settings>`.
    :raises UnknownNodeError: if *candidates* names a node not in *tree*.
    """
    if not tree.is_tree():
        raise NotATreeError(f"{tree!r} is not a tree")
    limit = resolve(settings).max_extensions
    domains = {node: list(codomain.points_at(tree.value(node)))
               for node in tree.nodes}
    for node, points in candidates.items():
        if node not in tree:
            raise UnknownNodeError(node)
        domains[node] = list(dict.fromkeys(codomain.canonical(point)
                                           for point in points))
    for node in tree.nodes:
        if not domains[node]:
            return ExtensionResult((), Witness(
                "candidates", node, f"node {node!r} has no admissible image"))

    root = tree.nodes[0] if root is None else root
    order = [root]
    parent = {root: None}
    for node in order:
        for key in tree.incident_edges(node):
            other = tree.other_end(key, node)
            if other not in parent:
                parent[other] = (node, key)
                order.append(other)

    for node in reversed(order[1:]):
        above, key = parent[node]
        supported = [image for image in domains[above]
                     if any(_fits(tree, codomain, key, above, image, node, other)
                            for other in domains[node])]
        if not supported:
            return ExtensionResult((), Witness(
                "path-extension", key,
                f"no admissible images of {above!r} and {node!r} are "
                f"connected by a monotone path"))
        domains[above] = supported
    for node in order[1:]:
        above, key = parent[node]
        domains[node] = [image for image in domains[node]
                         if any(_fits(tree, codomain, key, above, other, node, image)
                                for other in domains[above])]
    logging.debug(f"Domain sizes after propagation: "
                  f"{ {node: len(domains[node]) for node in order} }.")

    def options(index, images):
        node = order[index]
        if index == 0:
            return iter(domains[node])
        above, key = parent[node]
        return iter([image for image in domains[node]
                     if _fits(tree, codomain, key, above, images[above], node, image)])

    solutions = []
    images = {}
    iterators = [options(0, images)]
    while iterators and len(solutions) <= limit:
        index = len(iterators) - 1
        image = next(iterators[-1], None)
        if image is None:
            iterators.pop()
            images.pop(order[index], None)
            continue
        images[order[index]] = image
        if index + 1 == len(order):
            solutions.append(dict(images))
        else:
            iterators.append(options(index + 1, images))
    if len(solutions) > limit:
        raise SizeLimitError(f"{tree!r} has more than {limit} extensions into "
                             f"{codomain!r}; the enumeration is limited to "
                             f"{limit}")
    if len(solutions) > 1:
        logging.warning(f"Found {len(solutions)} extensions to {tree!r}; "
                        f"expected a unique one.")
    return ExtensionResult(tuple(_tree_morphism(tree, codomain, solution)
                                 for solution in solutions))


def _domain_samples(graph, *breaking_graphs):
    """Nodes of *graph* and the middle points between consecutive node values
    of all graphs on every edge."""
    values = sorted({value for other in (graph,) + breaking_graphs
                     for value in other.values.values()})
    points = [NodePoint(node) for node in graph.nodes]
    for key, (lower, upper) in sorted(graph.edges.items()):
        low, high = graph.value(lower), graph.value(upper)
        if low == high:
            continue
        breaks = [low] + [value for value in values if low < value < high] + [high]
        points += [EdgePoint(key, (a + b) / 2) for a, b in zip(breaks, breaks[1:])]
    return points


def _commutativity_failure(phi, psi, tower1, tower2):
    """
    Check ``lift(psi) o phi = shift by 2 epsilon`` on the domain of phi.

    Between trees a monotone path is determined by its end points, so two
    morphisms agreeing on the nodes agree everywhere and only the nodes are
    compared.
    """
    target = tower1.second.graph
    if phi.domain.is_tree() and target.is_tree():
        samples = [NodePoint(node) for node in phi.domain.nodes]
    else:
        samples = _domain_samples(phi.domain, target, tower2.first.graph)
    for point in samples:
        composed = lift_point(psi, tower2.first, tower1.second, phi(point))
        shifted = tower1.double_shift(point)
        if not target.same_point(composed, shifted):
            return Witness("commutativity", str(point),
                           f"the composition maps {point} to {composed} instead "
                           f"of {shifted}")
    return None


def check_commutativity(phi, psi, tower1, tower2):
    """
    True iff both lifted compositions equal the shifts by ``2 * epsilon``,
    where ``phi: T1 -> T2^epsilon``, ``psi: T2 -> T1^epsilon`` and the towers
    hold the smoothings of T1 and T2.
    """
    if phi.domain is not tower1.graph or psi.domain is not tower2.graph:
        raise MorphismError("the morphisms do not match the smoothing towers")
    return (_commutativity_failure(phi, psi, tower1, tower2) is None
            and _commutativity_failure(psi, phi, tower2, tower1) is None)


def _label_failure(phi, l1, l2, tower1, tower2):
    for label in l1.labels:
        node, partner = l1[label], l2[label]
        image = lift_point(phi, tower1.first, tower2.second,
                           tower1.first.correspondence(node))
        neighborhood = tower2.second.path_neighborhood(
            tower2.first.correspondence(partner))
        if not neighborhood.contains(image):
            return Witness("label-condition", label,
                           f"{image} is not on the path neighborhood of "
                           f"{partner!r}")
    return None


def verify_interleaving(phi, psi, l1, l2, tower1, tower2):
    """
    Re-check all conditions of a labeled interleaving for the given maps.
    Returns ``None`` if they hold and the first violation otherwise.
    """
    for morphism in (phi, psi):
        try:
            morphism.check()
        except MorphismError as error:
            return Witness("morphism", repr(morphism), str(error))
    return (_commutativity_failure(phi, psi, tower1, tower2)
            or _commutativity_failure(psi, phi, tower2, tower1)
            or _label_failure(phi, l1, l2, tower1, tower2)
            or _label_failure(psi, l2, l1, tower2, tower1))


def strong_label_condition(phi, l1, l2, smoothing):
    """
    The stronger label condition: every labeled node is mapped into the path
    neighborhood of its partner in the first smoothing. Only used as a
    diagnostic.
    """
    for label in l1.labels:
        neighborhood = smoothing.path_neighborhood(NodePoint(l2[label]))
        if not neighborhood.contains(phi(NodePoint(l1[label]))):
            return False
    return True


@dataclass(frozen=True)
class FeasibilityVerdict:
    epsilon: object
    feasible: bool
    phi: Morphism = None
    psi: Morphism = None
    witness: Witness = None
    towers: tuple = None

    def __bool__(self):
        return self.feasible


def _one_side(graph1, l1, tower2, l2, root, settings):
    """Admissible images of the labeled nodes of graph1 and their
    extensions to maps into the first smoothing of tower2."""
    candidates = {}
    for label in l1.labels:
        node, partner = l1[label], l2[label]
        forced = node_image_forced(graph1, node, tower2, partner)
        if forced is None:
            return ExtensionResult((), Witness(
                "node-constraint", label,
                f"{node!r} and {partner!r} are more than "
                f"{tools.format_rational(tower2.epsilon)} apart after "
                f"smoothing"))
        found = candidate_set(tower2, forced, graph1.node_class(node), node)
        if node in candidates:
            found = [point for point in found.candidates
                     if point in candidates[node]]
        else:
            found = list(found.candidates)
        if not found:
            return ExtensionResult((), Witness(
                "candidates", label, f"node {node!r} has no admissible image"))
        candidates[node] = found
    if root is None:
        top = max(tower2.graph.nodes, key=tower2.graph.value)
        labels = [label for label in l2.labels if l2[label] == top]
        root = l1[labels[0]] if labels else None
    return extend_unique_tree(graph1, tower2.first.graph, candidates, root,
                              settings)


def check_feasibility(t1, l1, t2, l2, epsilon, settings=None, towers=None,
                      roots=(None, None)):
    """
    Decide whether a labeled epsilon-interleaving between the labeled trees
    exists, returning the maps if it does.
    """
    epsilon = tools.to_rational(epsilon)
    tower1, tower2 = towers or (SmoothingTower(t1, epsilon),
                                SmoothingTower(t2, epsilon))
    forward = _one_side(t1, l1, tower2, l2, roots[0], settings)
    if not forward.feasible:
        return FeasibilityVerdict(epsilon, False, witness=forward.witness)
    backward = _one_side(t2, l2, tower1, l1, roots[1], settings)
    if not backward.feasible:
        return FeasibilityVerdict(epsilon, False, witness=backward.witness)
    witness = None
    for phi, psi in itertools.product(forward.morphisms, backward.morphisms):
        witness = (_commutativity_failure(phi, psi, tower1, tower2)
                   or _commutativity_failure(psi, phi, tower2, tower1))
        if witness is None:
            failure = verify_interleaving(phi, psi, l1, l2, tower1, tower2)
            if failure is not None:
                raise AssertionError(f"extension violates {failure}")
            return FeasibilityVerdict(epsilon, True, phi, psi, towers=(tower1, tower2))
    return FeasibilityVerdict(epsilon, False, witness=witness)


@dataclass(frozen=True)
class Probe:
    epsilon: object
    feasible: bool
    stage: str = None


@dataclass
class DistanceResult:
    """
    Result of :func:`labeled_distance_contour`. *value* ``None`` stands for an
    infinite distance. *attained* is false if feasibility was found strictly
    below the returned value. *strong_condition* tells whether the maps found
    at *value* also satisfy the strong label condition.
    """
    value: object
    attained: bool = True
    diagnosis: str = ""
    probes: list = field(default_factory=list)
    strong_condition: bool = None
    verdict: FeasibilityVerdict = None

    @property
    def finite(self):
        return self.value is not None


def event_values(trees, divisors):
    """All ``|f(a) - f(b)| / k`` for nodes a, b of the trees and divisors k."""
    values = sorted({value for tree in trees for value in tree.values.values()})
    events = {tools.to_rational(0)}
    for a, b in itertools.combinations(values, 2):
        for divisor in divisors:
            events.add((b - a) / divisor)
    return sorted(events)


class _Prober:
    def __init__(self, t1, l1, t2, l2, settings):
        self.args = (t1, l1, t2, l2)
        self.settings = settings
        self.probes = []
        self.verdicts = {}

    def __call__(self, epsilon):
        if epsilon not in self.verdicts:
            verdict = check_feasibility(*self.args, epsilon, self.settings)
            stage = None if verdict.feasible else verdict.witness.stage
            self.probes.append(Probe(epsilon, verdict.feasible, stage))
            self.verdicts[epsilon] = verdict
            logging.info(f"Probe epsilon={tools.format_rational(epsilon)}: "
                         f"{'feasible' if verdict.feasible else 'infeasible'}"
                         f"{'' if verdict.feasible else f' at {verdict.witness}'}.")
        return self.verdicts[epsilon]


def labeled_distance_contour(t1, l1, t2, l2, settings=None, bisect=None,
                             audit=False):
    """
    Labeled interleaving distance of two labeled contour trees.

    :param bisect: if given, the distance is approximated from above by this
        many halvings of the search interval instead of searching the event
        values.
    :param audit: additionally probe the middle between the result and the
        next smaller event value, and flag the result as not attained if that
        probe is feasible.
    :returns: a :class:`DistanceResult`; its value is ``None`` if the
        labelings are inconsistent or no interleaving exists.
    :raises NotATreeError: if an input has cycles.
    :raises LabelingError: if the label sets differ or a labeling is not
        spanning.
    """
    settings = resolve(settings)
    for tree in (t1, t2):
        if not tree.is_tree():
            raise NotATreeError(f"{tree!r} is not a tree")
    _require_same_labels(l1, l2)
    for tree, labeling in ((t1, l1), (t2, l2)):
        if not check_spanning(tree, labeling):
            raise LabelingError(f"{labeling!r} is not spanning on {tree!r}")
    logging.info(f"Computing the labeled distance of {t1!r} and {t2!r}.")
    if not check_consistent(l1, l2):
        return DistanceResult(None, diagnosis="inconsistent labelings")

    probe = _Prober(t1, l1, t2, l2, settings)
    lower = max((abs(t1.value(l1[label]) - t2.value(l2[label]))
                 for label in l1.labels), default=tools.to_rational(0))
    values = list(t1.values.values()) + list(t2.values.values())
    upper = max(max(values) - min(values), lower)
    for _ in range(settings.upper_bound_doublings + 1):
        if probe(upper).feasible:
            break
        upper = 2 * upper if upper else tools.to_rational(1)
    else:
        return DistanceResult(None, diagnosis="no interleaving up to "
                              f"{tools.format_rational(upper / 2)}",
                              probes=probe.probes)

    if bisect is not None:
        result = _bisect(probe, lower, upper, bisect)
    else:
        result = _search_events(probe, t1, t2, lower, upper, settings, audit)
    verdict = probe(result.value)
    result.verdict = verdict
    result.probes = probe.probes
    result.strong_condition = (
        strong_label_condition(verdict.phi, l1, l2, verdict.towers[1].first)
        and strong_label_condition(verdict.psi, l2, l1, verdict.towers[0].first))
    logging.info(f"Labeled distance: {tools.format_rational(result.value)}.")
    return result


def _search_events(probe, t1, t2, lower, upper, settings, audit):
    events = [value for value in event_values((t1, t2), settings.event_divisors)
              if lower <= value <= upper]
    if not events or events[-1] != upper:
        events.append(upper)
    low, high = 0, len(events) - 1
    while low < high:
        middle = (low + high) // 2
        if probe(events[middle]).feasible:
            high = middle
        else:
            low = middle + 1
    value = events[low]
    result = DistanceResult(value)
    if audit:
        below = events[low - 1] if low > 0 else lower
        if below < value and probe((below + value) / 2).feasible:
            result.attained = False
            result.diagnosis = (f"feasible at {tools.format_rational((below + value) / 2)}, "
                                f"below the smallest feasible event value")
            logging.warning(f"Infimum not attained at an event value: "
                            f"{result.diagnosis}.")
    return result


def _bisect(probe, lower, upper, iterations):
    if probe(lower).feasible:
        return DistanceResult(lower)
    low, high = lower, upper
    for _ in range(iterations):
        middle = (low + high) / 2
        if probe(middle).feasible:
            high = middle
        else:
            low = middle
    return DistanceResult(high, diagnosis=f"bisection interval "
                          f"[{tools.format_rational(low)}, "
                          f"{tools.format_rational(high)}]")
