"""
Reading and writing graph documents and scalar grids, building merge trees and
contour trees from grids, and DOT export.

A graph document is a JSON object::

    {"format": "reebli-graph", "version": 1,
     "nodes": [{"id": "a", "f": [0, 1], "labels": [1]}, ...],
     "edges": [["a", "b"], ...],
     "superpositions": [["j", "s"], ...]}

Node values are ``[numerator, denominator]`` pairs. Edge keys are the
positions in the edge list.
"""
import csv
from dataclasses import dataclass
import io
import json
import logging
from pathlib import Path

import numpy as np
from networkx.utils import UnionFind

from reebli import tools
from reebli.core import ReebGraph, ValidationReport, normalize_superpositions, \
    perturb_ties, suppress_regular, validate
from reebli.errors import DocumentError, ValidationError
from reebli.interleave import Labeling
from reebli.merge import MergeTree

FORMAT = "reebli-graph"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class GraphDocument:
    graph: ReebGraph
    labeling: Labeling


def _node_id(raw):
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise DocumentError(f"node id {raw!r} must be an integer or a string")
    return raw


def _pairs(data, name):
    raw = data.get(name, [])
    if not isinstance(raw, list) or not all(
            isinstance(pair, list) and len(pair) == 2 for pair in raw):
        raise DocumentError(f"'{name}' must be a list of pairs of node ids")
    return [(_node_id(u), _node_id(v)) for u, v in raw]


def _records(data, allow_decimal):
    if not isinstance(data, dict):
        raise DocumentError("a graph document must be a JSON object")
    if data.get("format") != FORMAT:
        raise DocumentError(f"unknown document format {data.get('format')!r}")
    if data.get("version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported document version {data.get('version')!r}")
    nodes = data.get("nodes")
    if not isinstance(nodes, list):
        raise DocumentError("'nodes' must be a list")
    records = []
    assignment = {}
    for entry in nodes:
        if not isinstance(entry, dict) or "id" not in entry or "f" not in entry:
            raise DocumentError(f"node entry {entry!r} needs an 'id' and an 'f'")
        node = _node_id(entry["id"])
        try:
            value = tools.to_rational(entry["f"], allow_decimal=allow_decimal)
        except ValueError as error:
            raise DocumentError(f"value of node {node!r}: {error}")
        records.append((node, value))
        for label in entry.get("labels", []):
            if isinstance(label, bool) or not isinstance(label, int):
                raise DocumentError(f"label {label!r} of node {node!r} is not "
                                    f"an integer")
            if label in assignment:
                raise DocumentError(f"label {label} is assigned twice")
            assignment[label] = node
    return records, _pairs(data, "edges"), _pairs(data, "superpositions"), \
        assignment


def parse_document(data, allow_decimal=False):
    """
    Build a :class:`GraphDocument` from decoded JSON.

    :raises DocumentError: if the document is malformed.
    :raises ValidationError: if node ids repeat or edges reference unknown
        nodes.
    """
    records, edges, superpositions, assignment = _records(data, allow_decimal)
    graph = ReebGraph.from_records(records, edges, superpositions)
    return GraphDocument(graph, Labeling(graph, assignment))


def read_document(filename, allow_decimal=False):
    try:
        data = json.loads(Path(filename).read_text())
    except json.JSONDecodeError as error:
        raise DocumentError(f"{filename}: {error}")
    return parse_document(data, allow_decimal)


def validate_document(data, allow_decimal=False, strict=True):
    """
    Collect all problems of a decoded document in one
    :class:`ValidationReport`.
    """
    try:
        document = parse_document(data, allow_decimal)
    except ValidationError as error:
        return error.report
    except DocumentError as error:
        report = ValidationReport()
        report.add("document", None, str(error))
        return report
    return validate(document.graph, strict)


def document_data(graph, labeling=None):
    labels = {}
    if labeling is not None:
        for label, node in labeling.items():
            labels.setdefault(node, []).append(label)
    return {
        "format": FORMAT,
        "version": FORMAT_VERSION,
        "nodes": [{"id": node, "f": tools.rational_pair(graph.value(node)),
                   "labels": labels.get(node, [])} for node in graph.nodes],
        "edges": [list(graph.edges[key]) for key in sorted(graph.edges)],
        "superpositions": [list(pair) for pair in graph.superpositions],
    }


def output_document(graph, labeling, stream):
    json.dump(document_data(graph, labeling), stream, indent=2)
    print(file=stream)


def write_document(filename, graph, labeling=None):
    with open(filename, "w") as file:
        output_document(graph, labeling, file)


def rekeyed(graph):
    """Copy of *graph* whose edge keys are 0, 1, ... in key order."""
    return ReebGraph(graph.values,
                     [graph.edges[key] for key in sorted(graph.edges)],
                     graph.superpositions)


@dataclass(frozen=True, eq=False)
class ScalarGrid:
    """
    Samples of a scalar field on a 1-D chain or a 2-D grid. *values* is a
    numpy object array of fractions.

    Every cell of a 2-D grid is split into two triangles by the diagonal from
    its upper left to its lower right sample, so a sample has the four grid
    neighbors plus up to two diagonal ones. Sublevel and superlevel sets are
    then those of the piecewise-linear interpolation on this triangulation.
    """
    values: np.ndarray

    @property
    def size(self):
        return self.values.size

    def value(self, index):
        return self.values.flat[index]

    def neighbors(self, index):
        if self.values.ndim == 1:
            candidates = [index - 1, index + 1]
            return [i for i in candidates if 0 <= i < self.size]
        rows, columns = self.values.shape
        row, column = divmod(index, columns)
        result = []
        for r, c in ((row - 1, column), (row + 1, column),
                     (row, column - 1), (row, column + 1),
                     (row - 1, column - 1), (row + 1, column + 1)):
            if 0 <= r < rows and 0 <= c < columns:
                result.append(r * columns + c)
        return result

    def order(self, descending=False):
        """Sample indices by value; ties are broken by index."""
        key = lambda index: (self.value(index), index)
        return sorted(range(self.size), key=key, reverse=descending)


def grid_from_rows(rows, allow_decimal=True):
    """
    Build a grid from rows of values; a single row gives a 1-D chain.

    :raises DocumentError: if there are no values, a value cannot be parsed
        or the rows differ in length.
    """
    parsed = []
    for row in rows:
        cells = [cell for cell in row if str(cell).strip() != ""]
        if not cells:
            continue
        try:
            parsed.append([tools.to_rational(cell if not isinstance(cell, str)
                                             else cell.strip(),
                                             allow_decimal=allow_decimal)
                           for cell in cells])
        except ValueError as error:
            raise DocumentError(str(error))
    if not parsed:
        raise DocumentError("the grid is empty")
    if len({len(row) for row in parsed}) > 1:
        raise DocumentError("all rows of a grid must have the same length")
    values = np.empty((len(parsed), len(parsed[0])), dtype=object)
    for i, row in enumerate(parsed):
        for j, value in enumerate(row):
            values[i, j] = value
    if len(parsed) == 1:
        values = values[0]
    return ScalarGrid(values)


def read_grid(filename, allow_decimal=True):
    with open(filename, newline="") as file:
        return grid_from_rows(csv.reader(file), allow_decimal)


def _sweep(grid, descending=False):
    """
    Merge tree of sublevel sets (superlevel sets if *descending*) over all
    samples. Returns the arcs as ``(earlier, later)`` pairs of sample indices,
    where every sample is connected to the most recent sample of each
    component it touches. Samples starting or merging components are
    reported separately.
    """
    union_find = UnionFind()
    head = {}
    processed = set()
    arcs = []
    critical = []
    for index in grid.order(descending):
        roots = []
        for other in grid.neighbors(index):
            if other in processed and union_find[other] not in roots:
                roots.append(union_find[other])
        processed.add(index)
        union_find[index]
        heads = [head[root] for root in roots]
        for previous in heads:
            arcs.append((previous, index))
        if len(roots) != 1:
            critical.append(index)
        union_find.union(index, *roots)
        head[union_find[index]] = index
    return arcs, critical


def ingest_merge_tree(grid):
    """
    Merge tree of the sublevel sets of *grid*: a leaf where a component is
    born, a join where components merge, and a root above every value. Tied
    values are separated by :func:`reebli.core.perturb_ties`.
    """
    arcs, critical = _sweep(grid)
    critical = set(critical)
    values = {index: grid.value(index) for index in critical}
    parent = {}
    for earlier, later in arcs:
        parent.setdefault(earlier, []).append(later)

    def next_critical(index):
        # The unique later sample of a sublevel component until it merges.
        while True:
            index = parent[index][0]
            if index in critical:
                return index

    # Grids are connected, so the highest critical sample is the last join
    # or the only leaf and every other one reaches a later critical sample.
    ordered = [index for index in grid.order() if index in critical]
    top = ordered[-1]
    edges = [(index, next_critical(index)) for index in ordered[:-1]]
    samples = [grid.value(index) for index in range(grid.size)]
    root = grid.size
    values[root] = max(samples) + (max(samples) - min(samples)) + 1
    edges.append((top, root))
    tree = MergeTree(rekeyed(perturb_ties(ReebGraph(values, edges))), root)
    logging.info(f"Ingested a merge tree with {len(tree.leaves)} leaves.")
    return tree


def _merge_join_split(grid):
    """Contour tree over all samples by merging the join and split trees."""
    join_up = dict.fromkeys(range(grid.size))
    join_down = {index: set() for index in range(grid.size)}
    split_down = dict.fromkeys(range(grid.size))
    split_up = {index: set() for index in range(grid.size)}
    join_arcs, _ = _sweep(grid)
    split_arcs, _ = _sweep(grid, descending=True)
    # Every sample is linked from the heads of the components it touches, so
    # keep only the arc to the first later sample of each head.
    for lower, upper in join_arcs:
        if join_up[lower] is None:
            join_up[lower] = upper
            join_down[upper].add(lower)
    for upper, lower in split_arcs:
        if split_down[upper] is None:
            split_down[upper] = lower
            split_up[lower].add(upper)

    def is_upper_leaf(index):
        return not split_up[index] and len(join_down[index]) == 1

    def is_lower_leaf(index):
        return not join_down[index] and len(split_up[index]) == 1

    removed = set()
    queue = [index for index in range(grid.size)
             if is_upper_leaf(index) or is_lower_leaf(index)]
    edges = []
    while queue and len(removed) < grid.size - 1:
        index = queue.pop(0)
        if index in removed:
            continue
        if is_upper_leaf(index):
            other = split_down[index]
            edges.append((other, index))
            split_up[other].discard(index)
            (child,) = join_down[index]
            above = join_up[index]
            join_up[child] = above
            if above is not None:
                join_down[above].discard(index)
                join_down[above].add(child)
            affected = (other, child, above)
        elif is_lower_leaf(index):
            other = join_up[index]
            edges.append((index, other))
            join_down[other].discard(index)
            (child,) = split_up[index]
            below = split_down[index]
            split_down[child] = below
            if below is not None:
                split_up[below].discard(index)
                split_up[below].add(child)
            affected = (other, child, below)
        else:
            continue
        removed.add(index)
        for candidate in affected:
            if (candidate is not None and candidate not in removed
                    and (is_upper_leaf(candidate) or is_lower_leaf(candidate))):
                queue.append(candidate)
    return edges


def ingest_contour_tree(grid):
    """
    Contour tree of *grid* under piecewise-linear interpolation, computed by
    merging the join tree and the split tree. Regular nodes are suppressed,
    degenerate nodes normalized and tied values perturbed, so the result
    passes strict validation.
    """
    edges = _merge_join_split(grid)
    values = {index: grid.value(index) for index in range(grid.size)}
    augmented = perturb_ties(ReebGraph(values, edges))
    tree = rekeyed(normalize_superpositions(suppress_regular(augmented)))
    logging.info(f"Ingested a contour tree {tree!r}.")
    return tree


def output_dot(graph, stream, labeling=None):
    """
    Write *graph* in DOT format. Edges point upward, nodes on the same level
    share a rank and zero-length edges are dashed.
    """
    labels = {}
    if labeling is not None:
        for label, node in labeling.items():
            labels.setdefault(node, []).append(label)
    print("digraph reeb {", file=stream)
    print("  rankdir=BT;", file=stream)
    for node in graph.nodes:
        text = f"{node}\\nf={tools.format_rational(graph.value(node))}"
        if node in labels:
            text += f"\\nlabels={','.join(str(label) for label in labels[node])}"
        print(f"  {json.dumps(str(node))} [label=\"{text}\"];", file=stream)
    levels = {}
    for node in graph.nodes:
        levels.setdefault(graph.value(node), []).append(node)
    for value in sorted(levels):
        if len(levels[value]) > 1:
            members = " ".join(json.dumps(str(node)) for node in levels[value])
            print(f"  {{rank=same; {members}}}", file=stream)
    for key in sorted(graph.edges):
        lower, upper = graph.edges[key]
        style = ", style=dashed" if graph.is_flat(key) else ""
        print(f"  {json.dumps(str(lower))} -> {json.dumps(str(upper))} "
              f"[id=\"e{key}\"{style}];", file=stream)
    print("}", file=stream)


def export_dot(graph, labeling=None):
    stream = io.StringIO()
    output_dot(graph, stream, labeling)
    return stream.getvalue()
