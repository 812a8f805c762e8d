class ReebliError(Exception):
    """
    Base class of all exceptions raised by reebli.
    """
    pass


class ValidationError(ReebliError):
    """
    Exception raised when a graph, tree or labeling violates its invariants.
    The attribute *report* holds the :class:`ValidationReport
    <reebli.core.ValidationReport>` listing every violation.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(format_report(report))


class UnknownNodeError(ReebliError, KeyError):
    """
    Exception raised when an operation is called with a node id that does not
    belong to the graph.
    """

    def __init__(self, node):
        self.node = node
        super().__init__(f"unknown node {node!r}")

    def __str__(self):
        return self.args[0]


class PointError(ReebliError, ValueError):
    """
    Exception raised when a point does not lie on the graph it is used with,
    e.g. because its edge is unknown or its value is outside the edge.
    """
    pass


class LabelingError(ReebliError):
    """
    Exception raised when labelings cannot be used together, e.g. because
    their label sets differ or a labeling misses leaves it has to cover.
    """
    pass


class NotATreeError(ReebliError):
    """
    Exception raised when an operation that is only defined on trees (contour
    trees and merge trees) receives a graph with cycles.
    """
    pass


class DocumentError(ReebliError):
    """
    Exception raised when a graph document or a scalar grid cannot be parsed.
    """
    pass


class SizeLimitError(ReebliError):
    """
    Exception raised when an input exceeds a configured size limit, such as
    the node limit of the isomorphism test or the leaf limit of the labeling
    enumeration.
    """
    pass


class CycleBoundError(SizeLimitError):
    """
    Exception raised when the first Betti number of a graph exceeds the bound
    on simple-cycle enumeration.
    """
    pass


class MorphismError(ReebliError):
    """
    Exception raised when a map between Reeb graphs is not function-preserving
    or its edge routes are not continuous.
    """
    pass


class LiftError(ReebliError):
    """
    Exception raised when lifting a morphism to smoothings gives different
    images for different thickening representatives of the same point. This
    only happens for maps that are not morphisms.
    """
    pass


def format_report(report):
    lines = [f"{len(report.violations)} violation(s):"]
    for violation in report.violations:
        lines.append(f"  [{violation.kind}] {violation.subject}: {violation.message}")
    return "\n".join(lines)
