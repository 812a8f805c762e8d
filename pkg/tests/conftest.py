from hypothesis import HealthCheck, settings
import pytest

from reebli.core import ReebGraph
from reebli.interleave import Labeling
from reebli.intrinsic import build_counterexample
from reebli.merge import MergeTree


settings.register_profile("reebli", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("reebli")


@pytest.fixture
def segment():
    return ReebGraph({"a": 0, "b": 4}, [("a", "b")])


@pytest.fixture
def loop():
    """Split at 0 and join at 4 between a minimum and a maximum."""
    return ReebGraph({"m": -1, "s": 0, "j": 4, "t": 5},
                     [("m", "s"), ("s", "j"), ("s", "j"), ("j", "t")])


@pytest.fixture
def bare_loop():
    return build_counterexample("loop", 4)


@pytest.fixture
def y_graph():
    return ReebGraph({"m": 0, "s": 2, "p": 5, "q": 6},
                     [("m", "s"), ("s", "p"), ("s", "q")])


@pytest.fixture
def x_tree():
    return build_counterexample("x-tree", 8)


@pytest.fixture
def merge_tree():
    graph = ReebGraph({"a": 1, "b": 2, "j": 5, "r": 100},
                      [("a", "j"), ("b", "j"), ("j", "r")])
    return MergeTree(graph, "r")


@pytest.fixture
def merge_labeling(merge_tree):
    return Labeling(merge_tree.graph, {1: "a", 2: "b"})
