import pytest

from reebli import cli, files
from reebli.core import ReebGraph
from reebli.errors import LiftError
from reebli.interleave import Labeling
from reebli.intrinsic import build_js_tree
from reebli.settings import Settings


def _run(capsys, *argv):
    code = cli.main(["--loglevel", "warning", *map(str, argv)])
    return code, capsys.readouterr().out.splitlines()


@pytest.fixture
def documents(tmp_path, segment, loop):
    longer = ReebGraph({"c": 0, "d": 6}, [("c", "d")])
    paths = {}
    for name, graph, labeling in [
            ("segment", segment, Labeling(segment, {1: "a", 2: "b"})),
            ("longer", longer, Labeling(longer, {1: "c", 2: "d"})),
            ("flipped", longer, Labeling(longer, {1: "d", 2: "c"})),
            ("loop", loop, None)]:
        paths[name] = tmp_path / f"{name}.json"
        files.write_document(paths[name], graph, labeling)
    return paths


@pytest.fixture
def tied(tmp_path):
    path = tmp_path / "tied.json"
    files.write_document(path, ReebGraph({"m": -1, "a": 0, "b": 1, "c": 1},
                                         [("m", "a"), ("a", "b"), ("a", "c")]))
    return path


@pytest.fixture
def merge_documents(tmp_path, merge_tree, merge_labeling):
    shifted = ReebGraph({"a": "3/2", "b": "5/2", "j": 4, "r": 100},
                        [("a", "j"), ("b", "j"), ("j", "r")])
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    files.write_document(first, merge_tree.graph, merge_labeling)
    files.write_document(second, shifted, Labeling(shifted, {1: "a", 2: "b"}))
    return first, second


def test_validate(capsys, documents, tied):
    assert _run(capsys, "validate", documents["loop"]) == (cli.EXIT_CODE_SUCCESS,
                                                           ["valid"])
    code, out = _run(capsys, "validate", tied)
    assert code == cli.EXIT_CODE_INVALID
    assert out[0].startswith("[value-collision]")


def test_validate_broken_json(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("[")
    assert _run(capsys, "validate", broken)[0] == cli.EXIT_CODE_INVALID


def test_perturb_repairs_ties(capsys, tied):
    assert _run(capsys, "classify", tied)[0] == cli.EXIT_CODE_INVALID
    code, out = cli.main(["--perturb", "--loglevel", "warning", "classify",
                          str(tied)]), capsys.readouterr().out.splitlines()
    assert code == cli.EXIT_CODE_SUCCESS
    assert out == ["a 0 split", "b 1 maximum", "c 7/6 maximum",
                   "m -1 minimum"]


def test_classify(capsys, documents):
    code, out = _run(capsys, "classify", documents["loop"])
    assert code == cli.EXIT_CODE_SUCCESS
    assert out == ["j 4 join", "m -1 minimum", "s 0 split", "t 5 maximum"]


def test_smooth(capsys, documents, tmp_path):
    output = tmp_path / "smoothed.json"
    code, out = _run(capsys, "smooth", documents["segment"], "--epsilon", 1,
                     "-o", output)
    assert code == cli.EXIT_CODE_SUCCESS
    assert out == ["smoothed by 1: 2 nodes, 1 edges, 4 critical levels"]
    graph = files.read_document(output).graph
    assert sorted(graph.values.values()) == [-1, 5]


def test_contour_distance(capsys, documents):
    code, out = _run(capsys, "dist", "contour", documents["segment"],
                     documents["longer"], "--audit")
    assert code == cli.EXIT_CODE_SUCCESS
    assert out[0] == "2"
    assert "  attained: yes" in out
    assert "  strong label condition: yes" in out


def test_contour_distance_by_bisection(capsys, documents):
    code, out = _run(capsys, "dist", "contour", documents["segment"],
                     documents["longer"], "--bisect", 4)
    assert code == cli.EXIT_CODE_SUCCESS
    assert out[0] == "2"


def test_infinite_distance(capsys, documents):
    code, out = _run(capsys, "dist", "contour", documents["segment"],
                     documents["flipped"])
    assert code == cli.EXIT_CODE_INFEASIBLE
    assert out[0] == "inf"
    assert "  diagnosis: inconsistent labelings" in out


def test_distance_needs_two_trees(capsys, documents):
    code, _ = _run(capsys, "dist", "contour", documents["segment"])
    assert code == cli.EXIT_CODE_INVALID


def test_distance_of_pairs(capsys, documents, tmp_path):
    pairs = tmp_path / "pairs.txt"
    pairs.write_text(f"# first second\n"
                     f"{documents['segment']} {documents['longer']}\n"
                     f"{documents['segment']} {documents['flipped']}\n")
    code, out = _run(capsys, "dist", "contour", "--pairs", pairs, "--jobs", 2)
    assert code == cli.EXIT_CODE_INFEASIBLE
    results = [line for line in out if not line.startswith("  ")]
    assert results == [f"{documents['segment']} {documents['longer']}: 2",
                       f"{documents['segment']} {documents['flipped']}: inf"]


def test_merge_distance(capsys, merge_documents):
    code, out = _run(capsys, "dist", "merge", *merge_documents)
    assert (code, out) == (cli.EXIT_CODE_SUCCESS, ["1"])
    code, out = _run(capsys, "dist", "merge", *merge_documents,
                     "--all-labelings")
    assert (code, out) == (cli.EXIT_CODE_SUCCESS, ["1"])


def test_merge_distance_rejects_cycles(capsys, documents):
    code, _ = _run(capsys, "dist", "merge", documents["loop"],
                   documents["loop"])
    assert code == cli.EXIT_CODE_INVALID


def test_essential(capsys, documents):
    code, out = _run(capsys, "essential", documents["loop"], "--epsilon", 1)
    assert code == cli.EXIT_CODE_SUCCESS
    assert out == ["j join inessential", "m minimum essential",
                   "s split inessential", "t maximum essential"]


def test_loop_height(capsys, documents, monkeypatch):
    assert _run(capsys, "loop-height", documents["loop"]) == (
        cli.EXIT_CODE_SUCCESS, ["4"])
    monkeypatch.setenv(Settings.CYCLE_BOUND_VARIABLE, "0")
    assert _run(capsys, "loop-height", documents["loop"])[0] == \
        cli.EXIT_CODE_SIZE_LIMIT


def test_js_spread(capsys, tmp_path):
    path = tmp_path / "js.json"
    files.write_document(path, build_js_tree(8, 2))
    assert _run(capsys, "js-spread", path) == (cli.EXIT_CODE_SUCCESS,
                                               ["join split 2"])


def test_obstruct(capsys, documents):
    code, out = _run(capsys, "obstruct", "reeb", documents["loop"],
                     "--alpha", 8)
    assert code == cli.EXIT_CODE_SUCCESS
    assert out[0] == "loop height of the candidate: 4"
    assert out[-1] == "contradiction"


def test_ingest_merge_tree(capsys, tmp_path):
    grid = tmp_path / "grid.csv"
    grid.write_text("1,0,2,-1,3\n")
    output = tmp_path / "tree.json"
    code, out = _run(capsys, "ingest", "merge", grid, "-o", output)
    assert (code, out) == (cli.EXIT_CODE_SUCCESS,
                           ["merge tree with 2 leaves"])
    document = files.read_document(output)
    assert len(document.graph.nodes) == 4
    assert document.labeling.items() == [(1, 1), (2, 3)]


def test_ingest_contour_tree(capsys, tmp_path):
    grid = tmp_path / "grid.csv"
    grid.write_text("0,4,1,5\n")
    output = tmp_path / "tree.json"
    code, out = _run(capsys, "ingest", "contour", grid, "-o", output)
    assert (code, out) == (cli.EXIT_CODE_SUCCESS,
                           ["contour tree with 6 nodes"])
    assert files.read_document(output).graph.is_tree()


def test_export_dot(capsys, documents, tmp_path):
    code, out = _run(capsys, "export-dot", documents["segment"])
    assert code == cli.EXIT_CODE_SUCCESS
    assert out[0] == "digraph reeb {"
    output = tmp_path / "segment.dot"
    _run(capsys, "export-dot", documents["segment"], "-o", output)
    assert output.read_text().startswith("digraph reeb {")


def test_missing_file(capsys, tmp_path):
    code, _ = _run(capsys, "classify", tmp_path / "missing.json")
    assert code == cli.EXIT_CODE_INVALID


def test_internal_errors_abort(capsys, documents, monkeypatch, tmp_path):
    def failing_smooth(graph, epsilon):
        raise LiftError("representatives disagree")

    monkeypatch.setattr(cli, "smooth", failing_smooth)
    with pytest.raises(SystemExit) as info:
        _run(capsys, "smooth", documents["segment"], "--epsilon", 1,
             "-o", tmp_path / "smoothed.json")
    assert info.value.code == "aborting"
    assert "representatives disagree" in capsys.readouterr().err


@pytest.mark.slow
def test_contour_demo(capsys):
    code, out = _run(capsys, "demo", "contour-counterexample", "--alpha", 8,
                     "--jobs", 2)
    assert code == cli.EXIT_CODE_SUCCESS
    assert "X-tree smoothed by 2: spreads ['4']" in out
    assert out[-1] == "34 of 34 candidate midpoints lead to a contradiction"


def test_reeb_demo(capsys):
    code, out = _run(capsys, "demo", "reeb-counterexample", "--alpha", 8,
                     "--jobs", 1)
    assert code == cli.EXIT_CODE_SUCCESS
    assert out[:4] == ["segment and loop of height 8",
                       "loop smoothed by 1: loop height 6",
                       "loop smoothed by 2: loop height 4",
                       "loop smoothed by 4: loop height 0"]
    assert out[-1] == "55 of 55 candidate midpoints lead to a contradiction"
