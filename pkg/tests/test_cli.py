import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from folres.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, Scenario, ScenarioError, exit_code, export_dot, main, run_scenario
from folres.resolve import resolve_surface


def write(tmp_path, d, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(d))
    return str(path)


SURFACE = {"p": 5, "variables": ["x", "y"], "generators": [["x", "3*y"]], "driver": "surface"}
COUNTEREXAMPLE = {
    "p": 5,
    "variables": ["x", "y"],
    "driver": "rees_functoriality_check",
    "options": {"Lambda": 3, "u": "y", "v": "x", "other_weight": 2, "M": 3},
}
THREEFOLD = {
    "p": 5,
    "variables": ["x", "y", "z"],
    "generators": [["x", "3*y", "0"], ["x", "0", "4*z"]],
    "driver": "threefold_corank1",
}


def test_surface_scenario(tmp_path):
    out = tmp_path / "r.json"
    dot = tmp_path / "t.dot"
    assert main(["run", write(tmp_path, SURFACE), "--report", str(out), "--dot", str(dot)]) == EXIT_OK
    rep = json.loads(out.read_text())
    assert rep["status"] == "Resolved" and rep["depth"] == 1
    assert rep["steps"][0]["weights"] == [1, 3]
    assert dot.read_text().count("->") == 2


def test_counterexample_scenario(tmp_path):
    out = tmp_path / "r.json"
    assert main(["run", write(tmp_path, COUNTEREXAMPLE), "--report", str(out)]) == EXIT_FAIL
    assert json.loads(out.read_text())["status"] == "false"


@pytest.mark.parametrize(
    "bad",
    [
        {**SURFACE, "generators": [["x +", "y"]]},
        {**SURFACE, "generators": [["x"]]},
        {**SURFACE, "p": 6},
        {**SURFACE, "driver": "nope"},
        {**SURFACE, "extra": 1},
        {"p": 5, "variables": ["x", "y"]},
        {**SURFACE, "generators": [["q", "y"]]},
    ],
)
def test_bad_input_exit_2(tmp_path, bad):
    assert main(["run", write(tmp_path, bad)]) == EXIT_INPUT


def test_malformed_json(tmp_path):
    path = tmp_path / "b.json"
    path.write_text("{not json")
    assert main(["run", str(path)]) == EXIT_INPUT
    assert main(["run", str(tmp_path / "missing.json")]) == EXIT_INPUT


def test_oracle_scenarios(tmp_path):
    cases = [
        ({"p": 5, "variables": [], "driver": "euclid_root", "options": {"a": 4, "b": 9}}, EXIT_OK),
        ({"p": 5, "variables": [], "driver": "inv_subring_check", "options": {"n": 3, "J": [1, 2], "a": [2, 3], "pivot": 1}}, EXIT_OK),
        ({"p": 3, "variables": ["x", "y"], "generators": [["x", "2*y"]], "driver": "constants_basis"}, EXIT_OK),
        ({"p": 5, "variables": ["x", "y"], "generators": [["x", "3*y"]], "driver": "classify"}, EXIT_OK),
        ({"p": 3, "variables": ["x", "y"], "generators": [["y", "x^2"]], "driver": "classify"}, EXIT_FAIL),
        (
            {
                "p": 5,
                "variables": ["x", "y", "z"],
                "generators": [["0", "0", "1"], ["x", "3*y", "0"]],
                "driver": "lambda_constancy_check",
                "options": {"points": [[0, 0, 0], [0, 0, 3]]},
            },
            EXIT_OK,
        ),
        ({"p": 3, "variables": [], "driver": "rees_functoriality_check", "options": {"Lambda": 2, "f": "x", "g": "1+y"}}, EXIT_OK),
    ]
    for sc, code in cases:
        assert main(["run", write(tmp_path, sc), "--report", str(tmp_path / "o.json")]) == code, sc


def test_degree_bound_flag(tmp_path):
    sc = {"p": 3, "variables": ["x", "y"], "generators": [["x", "2*y"]], "driver": "constants_basis"}
    out = tmp_path / "o.json"
    assert main(["run", write(tmp_path, sc), "--degree-bound", "4", "--report", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["result"]["N"] == 4


def test_max_depth_flag(tmp_path):
    sc = {"p": 3, "variables": ["x", "y"], "generators": [["x", "2*y"]], "driver": "surface"}
    assert main(["run", write(tmp_path, sc), "--max-depth", "1", "--report", str(tmp_path / "o.json")]) == EXIT_FAIL
    assert main(["run", write(tmp_path, sc), "--max-depth", "2", "--report", str(tmp_path / "o.json")]) == EXIT_OK


def test_export_dot_shapes():
    sc = Scenario.from_dict(THREEFOLD)
    report, rep = run_scenario(sc)
    dot = export_dot(rep)
    assert dot.startswith("digraph") and rep.depth() == 2
    assert dot.count("->") == len(rep.tree.nodes) - 1
    # a single backslash so that Graphviz breaks the label line
    assert '\\nregular"' in dot and "\\\\n" not in dot
    trivial = Scenario.from_dict({**THREEFOLD, "generators": [["1", "0", "0"]]})
    _, rep1 = run_scenario(trivial)
    d1 = export_dot(rep1)
    assert d1.count("[label=") == 1 and "->" not in d1
    assert export_dot(resolve_surface(Scenario.from_dict(SURFACE).foliation())).count(" n0 -> ") == 2


def test_exit_code_is_a_function_of_status():
    assert exit_code("Resolved") == exit_code("true") == EXIT_OK
    assert exit_code("Aborted") == exit_code("false") == EXIT_FAIL


def test_schema_errors():
    with pytest.raises(ScenarioError):
        Scenario.from_dict([])
    with pytest.raises(ScenarioError):
        Scenario.from_dict({**SURFACE, "generators": "x"})


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "folres.cli", "run", write(tmp_path, SURFACE), "--report", str(tmp_path / "o.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr


coeff = st.sampled_from(["0", "1", "x", "3*y", "x^2 - y", "(x + 1)*y"])


@given(
    st.sampled_from([2, 3, 5, 7]),
    st.lists(coeff, min_size=2, max_size=2),
    st.sampled_from(["surface", "char2", "classify", "constants_basis"]),
    st.dictionaries(st.sampled_from(["max_depth", "N"]), st.integers(0, 9)),
)
def test_scenario_round_trip(p, gen, driver, opts):
    d = {"p": p, "variables": ["x", "y"], "generators": [gen], "relations": [], "driver": driver, "options": opts}
    sc = Scenario.from_dict(d)
    assert sc.to_dict() == d
    assert Scenario.from_dict(json.loads(json.dumps(sc.to_dict()))) == sc
