import json

import pytest

from graphdef.cli import EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, main
from graphdef.generators import cycle, disjoint_union, path
from graphdef.graphio import to_graph6

C6 = to_graph6(cycle(6))
TWO_C3 = to_graph6(disjoint_union(cycle(3), cycle(3)))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    try:
        return code, json.loads(out)
    except json.JSONDecodeError:
        return code, out


def test_gen_cycle(capsys):
    code, out = run(capsys, "gen", "cycle", "--param", "n=6")
    assert code == EXIT_OK and out["graph6"] == C6 and out["size"] == 6


def test_gen_random_family_needs_seed(capsys):
    assert main(["gen", "gnp", "--param", "n=5", "--param", "p=0.5"]) == EXIT_USAGE
    code, a = run(capsys, "gen", "gnp", "--param", "n=9", "--param", "p=0.5", "--seed", "7")
    _, b = run(capsys, "gen", "gnp", "--param", "n=9", "--param", "p=0.5", "--seed", "7")
    assert code == EXIT_OK and a == b


def test_gen_resource_refusal():
    assert main(["gen", "universal_asymmetric_tree", "--param", "k=4"]) == EXIT_RESOURCE


def test_game_values(capsys):
    assert run(capsys, "game", "depth", C6, TWO_C3)[1]["value"] == 3
    code, out = run(capsys, "game", "width", C6, TWO_C3, "--max-pebbles", "2")
    assert code == EXIT_OK and out["value"] == {"at_least": 3} and out["exact"] is False
    code, out = run(capsys, "wl", "verdict", C6, TWO_C3, "--k", "2")
    assert code == EXIT_OK and out["verdict"] == "non_isomorphic" and out["round"] == 1
    assert run(capsys, "wl", "verdict", C6, TWO_C3)[1]["verdict"] != "non_isomorphic"


def test_check_expectation(capsys):
    p4 = to_graph6(path(4))
    assert main(["check", "Ex.Ey.x~y", p4, "--expect", "true"]) == EXIT_OK
    assert main(["check", "Ex.Ey.x~y", p4, "--expect", "false"]) == EXIT_FAIL
    assert main(["check", "Ex.(", p4]) == EXIT_USAGE


def test_define_round_trips_through_check(capsys, tmp_path):
    code, out = run(capsys, "define", "generic", "--graph", to_graph6(path(3)))
    assert code == EXIT_OK
    f = tmp_path / "phi.txt"
    f.write_text(out["formula"])
    assert main(["check", str(f), to_graph6(path(3)), "--expect", "true"]) == EXIT_OK
    assert main(["check", str(f), to_graph6(path(4)), "--expect", "false"]) == EXIT_OK


def test_convert_round_trip(capsys):
    code, out = run(capsys, "convert", "Ch", "--from", "graph6", "--to", "edge-list")
    assert code == EXIT_OK
    code, back = run(capsys, "convert", out["output"], "--from", "edge-list", "--to", "graph6")
    assert code == EXIT_OK and back["output"].strip() == "Ch"


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["run-scenario", "no-such-scenario"]) == EXIT_USAGE
    assert main(["gen", "gnp", "--seed", str(2 ** 64)]) == EXIT_USAGE
    assert main(["game", "depth", "not-graph6!", C6]) == EXIT_USAGE


def test_run_scenario_is_deterministic(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, a = run(capsys, "run-scenario", "padding", "--out", str(out_file))
    assert code == EXIT_OK and a["passed"] is True
    code, b = run(capsys, "run-scenario", "padding")
    a.pop("runtime_ms"), b.pop("runtime_ms")
    assert a == b
    saved = json.loads(out_file.read_text())
    assert saved["config_sha256"] == a["config_sha256"] and saved["seed"] == a["seed"]


def test_text_format(capsys):
    code, out = run(capsys, "game", "depth", C6, TWO_C3, "--format", "text")
    assert code == EXIT_OK and isinstance(out, str) and "3" in out


@pytest.mark.parametrize("what", ["sieve", "extension", "components"])
def test_analyze_commands(capsys, what):
    code, out = run(capsys, "analyze", what, to_graph6(path(4)), "--k", "1")
    assert code == EXIT_OK and isinstance(out, dict)


def test_analyze_conquer(capsys):
    assert main(["analyze", "conquer", "--n", "5", "--max-depth", "3", "--samples", "1"]) == EXIT_USAGE
    code, out = run(capsys, "analyze", "conquer", "--n", "5", "--max-depth", "3", "--samples", "1", "--seed", "4")
    assert code == EXIT_OK and out["samples"][0]["diameter"] == 2
