from reebli.core import ReebGraph, classify_node, function_preserving_isomorphic, \
    normalize_superpositions, perturb_ties, validate
from reebli.interleave import Labeling, check_consistent, check_spanning, \
    classify_essential, labeled_distance_contour
from reebli.intrinsic import build_counterexample, contour_midpoint_obstruction, \
    js_spreads, max_loop_height, reeb_midpoint_obstruction, \
    verify_loop_contraction
from reebli.merge import MergeTree, induced_matrix, merge_labeled_distance, \
    min_over_labelings
from reebli.settings import Settings
from reebli.smoothing import lift_morphism, n_eps_region, path_neighborhood, \
    shift_eta, smooth

__all__ = [
    "ReebGraph", "classify_node", "function_preserving_isomorphic",
    "normalize_superpositions", "perturb_ties", "validate",
    "Labeling", "check_consistent", "check_spanning", "classify_essential",
    "labeled_distance_contour",
    "build_counterexample", "contour_midpoint_obstruction", "js_spreads",
    "max_loop_height", "reeb_midpoint_obstruction", "verify_loop_contraction",
    "MergeTree", "induced_matrix", "merge_labeled_distance",
    "min_over_labelings",
    "Settings",
    "lift_morphism", "n_eps_region", "path_neighborhood", "shift_eta", "smooth",
]
