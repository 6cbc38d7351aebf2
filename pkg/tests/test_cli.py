import json

import pytest

from trophodge.cli import BUILTIN_GRAPHS, generic_lengths, main, parse_lengths, UsageError
from trophodge.chambers import is_open_chamber_k4
from trophodge.io import divisor_to_json, graph_to_json
from trophodge.graph import Divisor


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_linsys_theta(capsys):
    code, out, _ = run(capsys, "linsys", "--graph", "theta", "--lengths", "unit", "--divisor", "canonical")
    assert code == 0
    payload = json.loads(out)
    assert payload["f_vector"] == [4, 3]
    assert {"cells", "covers", "f_vector"} <= set(payload)


def test_linsys_output_is_deterministic(capsys):
    argv = ("linsys", "--graph", "k4", "--lengths", "1=2/3,0=1,2=5,3=7,4=11,5=13")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    assert "." not in first  # no floats anywhere


def test_linsys_from_files(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps(graph_to_json(BUILTIN_GRAPHS["dumbbell"])))
    d = tmp_path / "d.json"
    d.write_text(json.dumps(divisor_to_json(Divisor({0: 1, 1: 1}))))
    out = tmp_path / "c.json"
    dot = tmp_path / "c.dot"
    code, _, _ = run(capsys, "linsys", "--graph", str(g), "--divisor", str(d), "--out", str(out), "--dot", str(dot))
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["f_vector"][-1] >= 1
    text = dot.read_text()
    assert text.startswith("digraph") and text.count("->") == len(payload["covers"])


def test_moduli_fvector_genus_five(capsys):
    code, out, _ = run(capsys, "moduli-fvector", "--genus", "5")
    payload = json.loads(out)
    assert code == 0 and payload["total"] == 4555 and len(payload["f_vector"]) == 13


def test_graphs_command(capsys, tmp_path):
    dot = tmp_path / "m.dot"
    code, out, _ = run(capsys, "graphs", "--genus", "2", "--dot", str(dot))
    assert code == 0 and len(json.loads(out)["graphs"]) == 7
    assert dot.exists()


def test_hodge_commands(capsys):
    code, out, _ = run(capsys, "hodge-fvector", "--genus", "2", "--jobs", "1")
    assert code == 0 and json.loads(out)["f_vector"] == [1, 5, 11, 16, 9, 1]
    code, out, _ = run(capsys, "hodge-fvector", "--genus", "2", "--modulo-automorphisms", "--jobs", "1")
    assert json.loads(out)["f_vector"] == [1, 4, 9, 11, 5, 1]
    code, out, _ = run(capsys, "hodge-maxdim", "--genus", "2", "--jobs", "1")
    payload = json.loads(out)
    assert code == 0 and payload["dim_H"] == 5 and payload["dim_Lambda"] == 6


def test_chambers_command(capsys):
    code, out, _ = run(capsys, "chambers", "--graph", "theta")
    payload = json.loads(out)
    assert code == 0 and len(payload["chambers"]) == 1 and payload["types"] == 1


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--graph", "theta", "--N", "1,2")
    assert code == 0 and json.loads(out)["ok"]


@pytest.mark.parametrize(
    "argv",
    [
        ("linsys", "--graph", "nosuchgraph"),
        ("linsys", "--graph", "theta", "--lengths", "0=1.5,1=1,2=1"),
        ("linsys", "--graph", "theta", "--lengths", "0=1,1=1"),
        ("linsys", "--graph", "theta", "--lengths", "0=1/0,1=1,2=1"),
        ("hodge-fvector", "--genus", "4"),
        ("moduli-fvector", "--genus", "1"),
        ("oracle-check", "--graph", "theta", "--lengths", "0=1/2,1=1,2=1"),
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error: --")


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["linsys"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["oracle-check", "--graph", "theta", "--N", "0"])
    assert exc.value.code == 2


def test_domain_error_exits_one(tmp_path, capsys):
    d = tmp_path / "neg.json"
    d.write_text(json.dumps(divisor_to_json(Divisor({0: -3}))))
    code, _, err = run(capsys, "linsys", "--graph", "theta", "--divisor", str(d))
    assert code == 1 and err.startswith("error:")


def test_builtin_graph_shapes():
    theta = BUILTIN_GRAPHS["theta"]
    assert len(theta.vertices) == 2 and len(theta.edges) == 3
    assert all(not theta.is_loop(e) for e in theta.edge_ids)
    dumbbell = BUILTIN_GRAPHS["dumbbell"]
    assert sum(dumbbell.is_loop(e) for e in dumbbell.edge_ids) == 2
    k4 = BUILTIN_GRAPHS["k4"]
    assert len(k4.vertices) == 4 and len(k4.edges) == 6


def test_generic_lengths():
    k4 = BUILTIN_GRAPHS["k4"]
    lengths = generic_lengths(k4)
    assert is_open_chamber_k4([lengths[e] for e in range(6)])
    assert parse_lengths("generic", k4) == lengths
    assert parse_lengths("unit", k4) == {e: 1 for e in range(6)}
    with pytest.raises(UsageError):
        parse_lengths("0=-1,1=1,2=1,3=1,4=1,5=1", k4)


def test_jobs_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("TROPHODGE_JOBS", "x")
    code, _, err = run(capsys, "hodge-fvector", "--genus", "2")
    assert code == 2 and "TROPHODGE_JOBS" in err
    monkeypatch.setenv("TROPHODGE_JOBS", "1")
    code, out, _ = run(capsys, "hodge-fvector", "--genus", "2")
    assert code == 0
