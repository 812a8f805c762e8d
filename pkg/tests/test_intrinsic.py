from fractions import Fraction

import numpy as np
import pytest

from reebli.core import ReebGraph, validate
from reebli.errors import CycleBoundError, NotATreeError
from reebli.intrinsic import CONTRADICTION, build_counterexample, \
    build_js_tree, contour_candidates, contour_midpoint_obstruction, \
    js_spreads, loop_report, max_loop_height, random_tree, reeb_candidates, \
    reeb_midpoint_obstruction, verify_loop_contraction
from reebli.settings import Settings
from reebli.smoothing import smooth


@pytest.fixture
def theta():
    return ReebGraph({"m": -1, "s": 0, "a": 1, "b": 4, "j": 6, "t": 7},
                     [("m", "s"), ("s", "a"), ("a", "b"), ("a", "b"),
                      ("b", "j"), ("s", "j"), ("j", "t")])


def test_loop_report(theta):
    report = loop_report(theta)
    assert len(report.cycles) == 3
    assert sorted(cycle.height for cycle in report.cycles) == [3, 6, 6]
    assert report.max_height == 6
    tallest = max(report.cycles, key=lambda cycle: cycle.height)
    assert (tallest.bottom, tallest.top) == ("s", "j")


def test_trees_have_no_loops(segment):
    assert max_loop_height(segment) == 0
    assert loop_report(segment).cycles == []


def test_cycle_bound(theta):
    with pytest.raises(CycleBoundError):
        loop_report(theta, Settings(cycle_bound=1))


def test_cycle_bound_from_environment(theta, monkeypatch):
    monkeypatch.setenv(Settings.CYCLE_BOUND_VARIABLE, "1")
    with pytest.raises(CycleBoundError):
        max_loop_height(theta)


def test_loop_contraction(theta):
    contraction = verify_loop_contraction(theta, 1)
    assert contraction
    assert contraction.before == 6
    assert contraction.after == 4


@pytest.mark.parametrize("epsilon", [Fraction(1, 2), 1, 2, 3, 4])
def test_smoothing_lowers_loops(theta, epsilon):
    assert verify_loop_contraction(theta, epsilon)
    assert verify_loop_contraction(build_counterexample("loop", 5), epsilon)


def test_counterexamples():
    assert max_loop_height(build_counterexample("loop", 8)) == 8
    assert build_counterexample("segment", 8).is_tree()
    assert js_spreads(build_counterexample("x-tree", 8)).spreads == [0]
    assert js_spreads(build_counterexample("x-tree", 8, 2)).spreads == [2]
    with pytest.raises(ValueError):
        build_counterexample("x-tree", 8, 8)
    with pytest.raises(ValueError):
        build_counterexample("torus", 8)


def test_smoothing_spreads_join_and_split(x_tree):
    assert js_spreads(smooth(x_tree, 2).graph).spreads == [4]
    separated = build_counterexample("x-tree", 8, 2)
    assert js_spreads(smooth(separated, 1).graph).spreads == [4]


def test_js_spreads_need_trees(loop):
    with pytest.raises(NotATreeError):
        js_spreads(loop)


@pytest.mark.parametrize("spread", [-4, -1, 0, Fraction(3, 2), 6])
def test_js_trees(spread):
    tree = build_js_tree(8, spread)
    assert validate(tree).ok
    assert js_spreads(tree).spreads == [spread]


@pytest.mark.parametrize("candidate, measured", [
    (build_counterexample("segment", 8), 0),
    (build_counterexample("loop", 5), 5),
    (build_counterexample("loop", 6), 6),
    (build_counterexample("loop", 16), 16),
])
def test_reeb_obstruction(candidate, measured):
    report = reeb_midpoint_obstruction(8, candidate)
    assert report.contradiction
    assert report.measured == measured
    assert report.required == 6


def test_reeb_candidates_all_contradict():
    candidates = reeb_candidates(8, random_trees=5)
    assert len(candidates) == 3 + 32 + 5
    for candidate in candidates:
        assert reeb_midpoint_obstruction(8, candidate).verdict == CONTRADICTION


def test_contour_obstruction(x_tree):
    report = contour_midpoint_obstruction(8, x_tree)
    assert report.contradiction
    assert report.measured == 0
    report = contour_midpoint_obstruction(8, build_counterexample("segment", 8))
    assert report.contradiction
    assert report.measured is None


@pytest.mark.parametrize("spread, below, above", [
    (2, True, True),
    (-2, False, False),
])
def test_contour_obstruction_qualifies_structures(spread, below, above):
    report = contour_midpoint_obstruction(8, build_js_tree(8, spread))
    assert report.contradiction
    (qualifier,) = report.qualifiers
    assert (qualifier.join, qualifier.split) == ("join", "split")
    assert qualifier.spread == spread
    assert qualifier.join_below_center == below
    assert qualifier.split_above_center == above


def test_contour_obstruction_without_narrow_structures():
    report = contour_midpoint_obstruction(8, build_js_tree(8, 6))
    assert report.qualifiers == []
    assert report.measured is None


def test_contour_candidates_all_contradict():
    candidates = contour_candidates(8)
    assert len(candidates) == 1 + 33
    for candidate in candidates:
        assert contour_midpoint_obstruction(8, candidate).contradiction


def test_random_trees_are_reproducible():
    first = random_tree(np.random.default_rng(3), 10, 8)
    second = random_tree(np.random.default_rng(3), 10, 8)
    assert first.same_structure(second)
    assert first.is_tree()
    assert all(0 <= value <= 16 for value in first.values.values())
