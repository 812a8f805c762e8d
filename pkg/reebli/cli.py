"""
Command line interface of reebli. Every subcommand reads graph documents (see
:mod:`reebli.files`), runs one operation of the library and prints its result.
Errors raised by the library are turned into exit codes.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import json
import logging
import sys

from reebli import tools
from reebli.core import perturb_ties, validate
from reebli.errors import LiftError, ReebliError, SizeLimitError
from reebli.files import export_dot, ingest_contour_tree, ingest_merge_tree, \
    read_document, read_grid, validate_document, write_document
from reebli.interleave import Essentiality, Labeling, classify_essential, \
    labeled_distance_contour
from reebli.intrinsic import build_counterexample, contour_candidates, \
    contour_midpoint_obstruction, js_spreads, loop_report, \
    reeb_candidates, reeb_midpoint_obstruction
from reebli.merge import MergeTree, align_roots, leaf_labeling, \
    merge_labeled_distance, min_over_labelings
from reebli.settings import Settings
from reebli.smoothing import smooth


EXIT_CODE_SUCCESS = 0
"""
Exit code of a subcommand that completed normally.
"""
EXIT_CODE_INFEASIBLE = 1
"""
Exit code of ``dist`` if the distance is infinite, i.e., the labelings are
inconsistent or no interleaving exists. Internal errors are logged as
critical, which aborts the program with the same exit code.
"""
EXIT_CODE_INVALID = 2
"""
Exit code if an input document, graph, tree or labeling is invalid.
"""
EXIT_CODE_SIZE_LIMIT = 3
"""
Exit code if an input exceeds a configured size limit.
"""


def _load(args, filename):
    """Read a graph document and validate it strictly."""
    document = read_document(filename, allow_decimal=args.allow_decimal)
    graph, labeling = document.graph, document.labeling
    if args.perturb:
        graph = perturb_ties(graph)
        labeling = Labeling(graph, dict(labeling.items()))
    validate(graph).raise_if_invalid()
    return graph, labeling


def _read_pairs(filename):
    pairs = []
    with open(filename) as file:
        for line in file:
            fields = line.split()
            if not fields or fields[0].startswith("#"):
                continue
            if len(fields) != 2:
                raise ReebliError(f"{filename}: expected two paths per line, "
                                  f"got {line.strip()!r}")
            pairs.append(tuple(fields))
    return pairs


def _distance(kind, first, second, options):
    """
    Distance between the trees stored in two documents. Returns the value
    (``None`` for infinity) and extra lines to print.
    """
    args = argparse.Namespace(**options)
    t1, l1 = _load(args, first)
    t2, l2 = _load(args, second)
    if kind == "merge":
        tree1, tree2 = align_roots(MergeTree(t1), MergeTree(t2))
        if args.all_labelings:
            return min_over_labelings(tree1, tree2,
                                      Settings.from_environment()), []
        l1, l2 = l1.on(tree1.graph), l2.on(tree2.graph)
        return merge_labeled_distance(tree1, l1, tree2, l2), []
    result = labeled_distance_contour(
        t1, l1, t2, l2, Settings.from_environment(), bisect=args.bisect,
        audit=args.audit)
    notes = []
    if result.diagnosis:
        notes.append(f"diagnosis: {result.diagnosis}")
    if result.finite:
        notes.append(f"attained: {'yes' if result.attained else 'no'}")
        notes.append(f"strong label condition: "
                     f"{'yes' if result.strong_condition else 'no'}")
    notes.append(f"probes: {len(result.probes)}")
    return result.value, notes


def _run_distance(args):
    if args.pairs:
        pairs = _read_pairs(args.pairs)
    elif len(args.trees) == 2:
        pairs = [tuple(args.trees)]
    else:
        raise ReebliError("dist needs two documents or --pairs")
    options = {name: getattr(args, name, None) for name in (
        "allow_decimal", "perturb", "all_labelings", "bisect", "audit")}
    if len(pairs) == 1:
        results = [_distance(args.kind, *pairs[0], options)]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as executor:
            results = list(executor.map(
                _distance, [args.kind] * len(pairs),
                [first for first, _ in pairs], [second for _, second in pairs],
                [options] * len(pairs)))
    exit_code = EXIT_CODE_SUCCESS
    for (first, second), (value, notes) in zip(pairs, results):
        prefix = f"{first} {second}: " if len(pairs) > 1 else ""
        print(f"{prefix}{tools.format_rational(value)}")
        for note in notes:
            print(f"  {note}")
        if value is None:
            exit_code = EXIT_CODE_INFEASIBLE
    return exit_code


def _run_validate(args):
    with open(args.file) as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as error:
            print(f"invalid JSON: {error}")
            return EXIT_CODE_INVALID
    report = validate_document(data, allow_decimal=args.allow_decimal)
    if report.ok:
        print("valid")
        return EXIT_CODE_SUCCESS
    for violation in report.violations:
        print(f"[{violation.kind}] {violation.subject}: {violation.message}")
    return EXIT_CODE_INVALID


def _run_classify(args):
    graph, _ = _load(args, args.file)
    for node in graph.nodes:
        print(f"{node} {tools.format_rational(graph.value(node))} "
              f"{graph.node_class(node)}")
    return EXIT_CODE_SUCCESS


def _run_smooth(args):
    graph, _ = _load(args, args.file)
    epsilon = tools.to_rational(args.epsilon, allow_decimal=args.allow_decimal)
    smoothed = smooth(graph, epsilon)
    write_document(args.output, smoothed.graph)
    print(f"smoothed by {tools.format_rational(epsilon)}: "
          f"{len(smoothed.graph.nodes)} nodes, "
          f"{len(smoothed.graph.edges)} edges, "
          f"{len(smoothed.levels)} critical levels")
    return EXIT_CODE_SUCCESS


def _run_essential(args):
    graph, _ = _load(args, args.file)
    epsilon = tools.to_rational(args.epsilon, allow_decimal=args.allow_decimal)
    for node in graph.nodes:
        verdict = classify_essential(graph, node, epsilon)
        if verdict != Essentiality.NOT_APPLICABLE:
            print(f"{node} {graph.node_class(node)} {verdict}")
    return EXIT_CODE_SUCCESS


def _run_loop_height(args):
    graph, _ = _load(args, args.file)
    report = loop_report(graph, Settings.from_environment())
    print(tools.format_rational(report.max_height))
    logging.info(f"{len(report.cycles)} simple cycles.")
    return EXIT_CODE_SUCCESS


def _run_js_spread(args):
    graph, _ = _load(args, args.file)
    for structure in js_spreads(graph).structures:
        print(f"{structure.join} {structure.split} "
              f"{tools.format_rational(structure.spread)}")
    return EXIT_CODE_SUCCESS


def _obstruct(kind, alpha, candidate):
    if kind == "reeb":
        return reeb_midpoint_obstruction(alpha, candidate)
    return contour_midpoint_obstruction(alpha, candidate)


def _run_obstruct(args):
    candidate, _ = _load(args, args.candidate)
    alpha = tools.to_rational(args.alpha, allow_decimal=args.allow_decimal)
    report = _obstruct(args.kind, alpha, candidate)
    for line in report.trace:
        print(line)
    print(report.verdict)
    return EXIT_CODE_SUCCESS


def _candidate_verdict(kind, alpha, index):
    # Workers rebuild the (seeded) family instead of receiving graphs.
    family = reeb_candidates(alpha) if kind == "reeb" else \
        contour_candidates(alpha)
    return _obstruct(kind, alpha, family[index]).verdict


def _run_demo(args):
    alpha = tools.to_rational(args.alpha, allow_decimal=args.allow_decimal)
    if args.kind == "reeb-counterexample":
        kind = "reeb"
        loop = build_counterexample("loop", alpha)
        print(f"segment and loop of height {tools.format_rational(alpha)}")
        for epsilon in (alpha / 8, alpha / 4, alpha / 2):
            smoothed = smooth(loop, epsilon).graph
            print(f"loop smoothed by {tools.format_rational(epsilon)}: "
                  f"loop height {tools.format_rational(loop_report(smoothed).max_height)}")
        print(f"distance between segment and loop: "
              f"{tools.format_rational(alpha / 4)} (the loop collapses when "
              f"smoothed by {tools.format_rational(alpha / 2)})")
        family = reeb_candidates(alpha)
    else:
        kind = "contour"
        x_tree = build_counterexample("x-tree", alpha)
        print(f"X-tree and segment of height {tools.format_rational(alpha)}")
        for epsilon in (alpha / 8, alpha / 4):
            spreads = js_spreads(smooth(x_tree, epsilon).graph).spreads
            print(f"X-tree smoothed by {tools.format_rational(epsilon)}: "
                  f"spreads {[tools.format_rational(s) for s in spreads]}")
        print(f"distance between X-tree and segment: "
              f"{tools.format_rational(alpha / 4)}")
        family = contour_candidates(alpha)
    indices = range(len(family))
    with ProcessPoolExecutor(max_workers=args.jobs) as executor:
        verdicts = list(executor.map(_candidate_verdict, [kind] * len(family),
                                     [alpha] * len(family), indices))
    contradictions = verdicts.count("contradiction")
    print(f"{contradictions} of {len(verdicts)} candidate midpoints lead to a "
          f"contradiction")
    if contradictions != len(verdicts):
        logging.warning("Some candidates did not lead to a contradiction.")
    return EXIT_CODE_SUCCESS


def _run_ingest(args):
    grid = read_grid(args.grid)
    if args.kind == "merge":
        tree = ingest_merge_tree(grid)
        write_document(args.output, tree.graph, leaf_labeling(tree))
        print(f"merge tree with {len(tree.leaves)} leaves")
    else:
        tree = ingest_contour_tree(grid)
        write_document(args.output, tree)
        print(f"contour tree with {len(tree.nodes)} nodes")
    return EXIT_CODE_SUCCESS


def _run_export_dot(args):
    graph, labeling = _load(args, args.file)
    text = export_dot(graph, labeling)
    if args.output:
        with open(args.output, "w") as file:
            file.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_CODE_SUCCESS


def build_parser():
    parser = argparse.ArgumentParser(
        prog="reebli",
        description="Labeled interleaving distances of Reeb graphs, contour "
                    "trees and merge trees.")
    parser.add_argument("--loglevel", default="info",
                        choices=["debug", "info", "warning", "error"])
    parser.add_argument("--debug", action="store_true",
                        help="shortcut for --loglevel debug")
    parser.add_argument("--allow-decimal", action="store_true",
                        help="accept decimal numbers and convert them exactly")
    parser.add_argument("--perturb", action="store_true",
                        help="separate tied node values by node order")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name, function, help):
        subparser = subparsers.add_parser(name, help=help)
        subparser.set_defaults(function=function)
        return subparser

    subparser = add("validate", _run_validate, "validate a graph document")
    subparser.add_argument("file")

    subparser = add("classify", _run_classify, "print the class of every node")
    subparser.add_argument("file")

    subparser = add("smooth", _run_smooth, "smooth a graph")
    subparser.add_argument("file")
    subparser.add_argument("--epsilon", required=True)
    subparser.add_argument("-o", "--output", required=True)

    subparser = add("dist", _run_distance, "labeled interleaving distance")
    subparser.add_argument("kind", choices=["merge", "contour"])
    subparser.add_argument("trees", nargs="*", metavar="TREE")
    subparser.add_argument("--pairs", help="file with two document paths per "
                                           "line")
    subparser.add_argument("--jobs", type=int, default=None)
    search = subparser.add_mutually_exclusive_group()
    search.add_argument("--events", action="store_true",
                        help="search the event values (default)")
    search.add_argument("--bisect", type=int, metavar="N",
                        help="bisect the search interval N times")
    subparser.add_argument("--audit", action="store_true",
                           help="probe below the result for feasibility")
    subparser.add_argument("--all-labelings", action="store_true",
                           help="merge trees: minimize over leaf labelings")

    subparser = add("essential", _run_essential,
                    "classify split and join nodes as essential")
    subparser.add_argument("file")
    subparser.add_argument("--epsilon", required=True)

    subparser = add("loop-height", _run_loop_height,
                    "largest height of a simple cycle")
    subparser.add_argument("file")

    subparser = add("js-spread", _run_js_spread,
                    "join-split structures and their spreads")
    subparser.add_argument("file")

    subparser = add("obstruct", _run_obstruct,
                    "check whether a graph can be a midpoint")
    subparser.add_argument("kind", choices=["reeb", "contour"])
    subparser.add_argument("candidate")
    subparser.add_argument("--alpha", required=True)

    subparser = add("demo", _run_demo,
                    "show that the interleaving distance is not intrinsic")
    subparser.add_argument(
        "kind", choices=["reeb-counterexample", "contour-counterexample"])
    subparser.add_argument("--alpha", required=True)
    subparser.add_argument("--jobs", type=int, default=None)

    subparser = add("ingest", _run_ingest,
                    "build a merge tree or contour tree from a CSV grid")
    subparser.add_argument("kind", choices=["merge", "contour"])
    subparser.add_argument("grid")
    subparser.add_argument("-o", "--output", required=True)

    subparser = add("export-dot", _run_export_dot, "write a graph as DOT")
    subparser.add_argument("file")
    subparser.add_argument("-o", "--output")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.debug else getattr(logging,
                                                     args.loglevel.upper())
    tools.configure_logging(level)
    try:
        return args.function(args)
    except SizeLimitError as error:
        logging.error(error)
        return EXIT_CODE_SIZE_LIMIT
    except LiftError as error:
        logging.critical(f"internal error: {error}")
    except (ReebliError, ValueError, OSError) as error:
        logging.error(error)
        return EXIT_CODE_INVALID
