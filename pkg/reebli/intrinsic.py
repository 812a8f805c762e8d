"""
Loop heights, join-split structures and the obstruction checks showing that
the interleaving distance is not intrinsic.

A midpoint between two graphs at distance ``alpha / 4`` would have distance
``alpha / 8`` to both. The checkers in this module evaluate necessary
conditions for a candidate midpoint and report a contradiction when they
cannot hold together. They never decide that a candidate *is* a midpoint.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import logging

import numpy as np

from reebli import tools
from reebli.core import NodeClass, ReebGraph, normalize_superpositions, validate
from reebli.errors import CycleBoundError, NotATreeError
from reebli.settings import resolve
from reebli.smoothing import smooth


CONTRADICTION = "contradiction"
NO_CONTRADICTION = "no-contradiction"


@dataclass(frozen=True)
class Cycle:
    nodes: tuple
    edges: frozenset
    top: object
    bottom: object
    height: Fraction


@dataclass
class LoopReport:
    cycles: list = field(default_factory=list)

    @property
    def max_height(self):
        return max((cycle.height for cycle in self.cycles), default=Fraction(0))


def _spanning_forest(graph):
    """Map every node to the set of edge keys on its path to a BFS root."""
    paths = {}
    tree_edges = set()
    for start in graph.nodes:
        if start in paths:
            continue
        paths[start] = frozenset()
        queue = [start]
        for node in queue:
            for key in graph.incident_edges(node):
                other = graph.other_end(key, node)
                if other not in paths:
                    paths[other] = paths[node] ^ {key}
                    tree_edges.add(key)
                    queue.append(other)
    return paths, tree_edges


def _as_cycle(graph, edges):
    """Return a :class:`Cycle` if *edges* form one simple cycle, else None."""
    degree = {}
    for key in edges:
        for node in graph.edge(key):
            degree[node] = degree.get(node, 0) + 1
    if any(count != 2 for count in degree.values()):
        return None
    start = next(iter(degree))
    seen = {start}
    queue = [start]
    for node in queue:
        for key in graph.incident_edges(node):
            if key in edges:
                other = graph.other_end(key, node)
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
    if len(seen) != len(degree):
        return None
    nodes = tuple(sorted(degree, key=tools.node_key))
    top = max(nodes, key=lambda node: (
        graph.value(node), graph.node_class(node) == NodeClass.JOIN))
    bottom = min(nodes, key=lambda node: (
        graph.value(node), graph.node_class(node) != NodeClass.SPLIT))
    return Cycle(nodes, frozenset(edges), top, bottom,
                 graph.value(top) - graph.value(bottom))


def loop_report(graph, settings=None):
    """
    All simple cycles of *graph*. They are enumerated as the combinations of
    fundamental cycles of a spanning forest that form a single cycle.

    :raises CycleBoundError: if the first Betti number exceeds
        :attr:`Settings.cycle_bound <reebli.settings.Settings>`.
    """
    bound = resolve(settings).cycle_bound
    betti = graph.betti_number()
    if betti > bound:
        raise CycleBoundError(f"{graph!r} has first Betti number {betti}; "
                              f"cycle enumeration is limited to {bound}")
    paths, tree_edges = _spanning_forest(graph)
    fundamental = [paths[lower] ^ paths[upper] ^ {key}
                   for key, (lower, upper) in sorted(graph.edges.items())
                   if key not in tree_edges]
    report = LoopReport()
    for size in range(1, len(fundamental) + 1):
        for combination in itertools.combinations(fundamental, size):
            cycle = _as_cycle(graph, _symmetric_difference(combination))
            if cycle is not None:
                report.cycles.append(cycle)
    return report


def _symmetric_difference(sets):
    result = frozenset()
    for edges in sets:
        result = result ^ edges
    return result


def max_loop_height(graph, settings=None):
    """Largest height of a simple cycle of *graph*; 0 for trees."""
    if graph.betti_number() == 0:
        return Fraction(0)
    return loop_report(graph, settings).max_height


@dataclass(frozen=True)
class LoopContraction:
    """
    Heights of the highest loops before and after smoothing by *epsilon*.
    Truthy iff smoothing lowered the highest loop by at least
    ``2 * epsilon`` or removed all loops.
    """
    before: Fraction
    after: Fraction
    epsilon: Fraction
    smoothed_betti: int

    @property
    def holds(self):
        return self.smoothed_betti == 0 or self.before >= self.after + 2 * self.epsilon

    def __bool__(self):
        return self.holds


def verify_loop_contraction(graph, epsilon, settings=None):
    epsilon = tools.to_rational(epsilon)
    smoothed = smooth(graph, epsilon).graph
    contraction = LoopContraction(max_loop_height(graph, settings),
                                  max_loop_height(smoothed, settings),
                                  epsilon, smoothed.betti_number())
    logging.info(f"Loop heights {tools.format_rational(contraction.before)} -> "
                 f"{tools.format_rational(contraction.after)} after smoothing "
                 f"by {tools.format_rational(epsilon)}: "
                 f"{'holds' if contraction else 'violated'}.")
    return contraction


@dataclass(frozen=True)
class JsStructure:
    join: object
    split: object
    spread: Fraction


@dataclass
class JsReport:
    structures: list = field(default_factory=list)

    @property
    def spreads(self):
        return sorted(structure.spread for structure in self.structures)


def js_spreads(tree):
    """
    All pairs of a join and a split node connected by a path whose interior
    contains only regular nodes, with their spreads ``f(split) - f(join)``.

    :raises NotATreeError: if *tree* has cycles.
    """
    if not tree.is_tree():
        raise NotATreeError(f"{tree!r} is not a tree")
    report = JsReport()
    for join in tree.nodes:
        if tree.node_class(join) != NodeClass.JOIN:
            continue
        for key in tree.incident_edges(join):
            previous, current = join, tree.other_end(key, join)
            while (tree.node_class(current) == NodeClass.REGULAR
                   and tree.partner(current) is None):
                following = [tree.other_end(edge, current)
                             for edge in tree.incident_edges(current)]
                previous, current = current, next(
                    node for node in following if node != previous)
            if tree.node_class(current) == NodeClass.SPLIT:
                report.structures.append(JsStructure(
                    join, current, tree.value(current) - tree.value(join)))
    return report


@dataclass(frozen=True)
class StructureQualifier:
    """
    Position of a narrow join-split structure relative to the center
    ``alpha / 2`` of the X-shaped tree.
    """
    join: object
    split: object
    spread: Fraction
    join_below_center: bool
    split_above_center: bool


@dataclass
class ObstructionReport:
    """
    Outcome of a midpoint check. *required* is the bound the candidate must
    meet, *measured* the value it has; *trace* lists the derivation.
    *qualifiers* describes the narrow join-split structures of a contour
    candidate.
    """
    alpha: Fraction
    candidate: str
    required: Fraction
    measured: Fraction
    verdict: str
    trace: list = field(default_factory=list)
    qualifiers: list = field(default_factory=list)


    @property
    def contradiction(self):
        return self.verdict == CONTRADICTION


def reeb_midpoint_obstruction(alpha, candidate, settings=None):
    """
    Check whether *candidate* can be a midpoint between the segment and the
    loop of height *alpha*. Being at distance ``alpha / 8`` from the loop
    requires a loop of height at least ``3 * alpha / 4``; being at distance
    ``alpha / 8`` from the segment allows loops of height at most
    ``alpha / 2``.
    """
    alpha = tools.to_rational(alpha)
    epsilon = alpha / 8
    height = max_loop_height(candidate, settings)
    required = 3 * alpha / 4
    trace = [f"loop height of the candidate: {tools.format_rational(height)}"]
    tall_enough = height >= required
    trace.append(f"distance {tools.format_rational(epsilon)} to the loop needs "
                 f"a loop of height >= {tools.format_rational(required)}: "
                 f"{'yes' if tall_enough else 'no'}")
    low_enough = height <= alpha / 2
    trace.append(f"distance {tools.format_rational(epsilon)} to the segment "
                 f"needs loop height <= {tools.format_rational(alpha / 2)}: "
                 f"{'yes' if low_enough else 'no'}")
    if not tall_enough:
        trace.append("cannot be a midpoint")
    elif not low_enough:
        trace.append(f"contradiction: the distance to the segment is at least "
                     f"{tools.format_rational(height / 4)} > "
                     f"{tools.format_rational(epsilon)}")
    verdict = NO_CONTRADICTION if tall_enough and low_enough else CONTRADICTION
    report = ObstructionReport(alpha, repr(candidate), required, height,
                               verdict, trace)
    logging.info(f"Reeb midpoint check of {candidate!r}: {verdict}.")
    return report


def contour_midpoint_obstruction(alpha, candidate):
    """
    Check whether the contour tree *candidate* can be a midpoint between the
    X-shaped tree and the segment of height *alpha*. The X-tree side requires
    a join-split structure of spread at most ``alpha / 4``; the segment side
    requires that structure to have spread at least ``alpha / 2``.

    :raises NotATreeError: if *candidate* has cycles.
    """
    alpha = tools.to_rational(alpha)
    structures = js_spreads(candidate).structures
    narrow = [structure for structure in structures
              if structure.spread <= alpha / 4]
    trace = [f"join-split spreads: "
             f"{[tools.format_rational(s.spread) for s in structures]}"]
    center = alpha / 2
    qualifiers = [StructureQualifier(
        structure.join, structure.split, structure.spread,
        candidate.value(structure.join) <= center,
        candidate.value(structure.split) >= center) for structure in narrow]
    for qualifier in qualifiers:
        trace.append(
            f"structure {qualifier.join!r}/{qualifier.split!r}: join "
            f"{'at or below' if qualifier.join_below_center else 'above'} the "
            f"center, split "
            f"{'at or above' if qualifier.split_above_center else 'below'} "
            f"the center")
    measured = min((s.spread for s in narrow), default=None)
    if measured is None:
        trace.append(f"no structure of spread <= {tools.format_rational(alpha / 4)}: "
                     f"cannot be a midpoint")
        verdict = CONTRADICTION
    else:
        wide_enough = measured >= alpha / 2
        trace.append(f"structure of spread {tools.format_rational(measured)} "
                     f"must have spread >= {tools.format_rational(alpha / 2)}: "
                     f"{'yes' if wide_enough else 'no'}")
        verdict = NO_CONTRADICTION if wide_enough else CONTRADICTION
        if not wide_enough:
            trace.append("contradiction")
    report = ObstructionReport(alpha, repr(candidate), alpha / 2,
                               measured, verdict, trace, qualifiers)
    logging.info(f"Contour midpoint check of {candidate!r}: {verdict}.")
    return report


def build_counterexample(kind, alpha, delta=0):
    """
    Build one of the graphs of the counterexamples:

    - ``"segment"``: a minimum at 0 and a maximum at *alpha*,
    - ``"loop"``: a split at 0 and a join at *alpha* with two parallel edges,
    - ``"x-tree"``: minima at 0, maxima at *alpha*, a join at
      ``(alpha - delta) / 2`` and a split at ``(alpha + delta) / 2``,
      superposed if *delta* is 0.

    :raises ValueError: if *alpha* is not positive, *delta* is negative or
        *delta* is not smaller than *alpha*.
    """
    alpha = tools.to_rational(alpha)
    delta = tools.to_rational(delta)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not 0 <= delta < alpha:
        raise ValueError("delta must be in [0, alpha)")
    if kind == "segment":
        graph = ReebGraph({"min": 0, "max": alpha}, [("min", "max")])
    elif kind == "loop":
        graph = ReebGraph({"split": 0, "join": alpha},
                          [("split", "join"), ("split", "join")])
    elif kind == "x-tree":
        graph = ReebGraph(
            {"a": 0, "b": 0, "join": (alpha - delta) / 2,
             "split": (alpha + delta) / 2, "c": alpha, "d": alpha},
            [("a", "join"), ("b", "join"), ("join", "split"),
             ("split", "c"), ("split", "d")],
            [("join", "split")] if delta == 0 else [])
    else:
        raise ValueError(f"unknown counterexample {kind!r}")
    validate(graph, strict=False).raise_if_invalid()
    return graph


def build_js_tree(alpha, spread):
    """
    A contour tree with one join-split structure of the given spread between
    0 and *alpha*, and leaves below and above that range.
    """
    alpha = tools.to_rational(alpha)
    spread = tools.to_rational(spread)
    join, split = (alpha - spread) / 2, (alpha + spread) / 2
    low, high = -alpha / 4, alpha + alpha / 4
    values = {"a": low, "b": low - alpha / 8, "join": join, "split": split,
              "c": high, "d": high + alpha / 8}
    if spread >= 0:
        edges = [("a", "join"), ("b", "join"), ("join", "split"),
                 ("split", "c"), ("split", "d")]
    else:
        edges = [("a", "split"), ("split", "c"), ("split", "join"),
                 ("b", "join"), ("join", "d")]
    superpositions = [("join", "split")] if spread == 0 else []
    return ReebGraph(values, edges, superpositions)


def random_tree(rng, size, alpha):
    """
    Random contour tree with *size* nodes and distinct values in
    ``[0, 2 * alpha]``, normalized. *rng* is a :class:`numpy.random.Generator`.
    """
    alpha = tools.to_rational(alpha)
    steps = rng.choice(8 * size, size=size, replace=False)
    values = {node: Fraction(int(step), 4 * size) * alpha
              for node, step in enumerate(steps)}
    edges = [(node, int(rng.integers(node))) for node in range(1, size)]
    return normalize_superpositions(ReebGraph(values, edges))


def reeb_candidates(alpha, random_trees=20, seed=0):
    """
    Candidate midpoints for the Reeb graph counterexample: segments, loops of
    heights ``1/2, 1, ..., 2 * alpha`` and random trees with at most 20
    nodes.
    """
    alpha = tools.to_rational(alpha)
    candidates = [build_counterexample("segment", height)
                  for height in (alpha / 2, alpha, 2 * alpha)]
    height = Fraction(1, 2)
    while height <= 2 * alpha:
        candidates.append(build_counterexample("loop", height))
        height += Fraction(1, 2)
    rng = np.random.default_rng(seed)
    for _ in range(random_trees):
        candidates.append(random_tree(rng, int(rng.integers(2, 21)), alpha))
    return candidates


def contour_candidates(alpha):
    """
    Candidate midpoints for the contour tree counterexample: the segment and
    join-split trees of spreads ``-alpha, -alpha + 1/2, ..., alpha``.
    """
    alpha = tools.to_rational(alpha)
    candidates = [build_counterexample("segment", alpha)]
    spread = -alpha
    while spread <= alpha:
        candidates.append(build_js_tree(alpha, spread))
        spread += Fraction(1, 2)
    return candidates
