import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from fairex.cli import main
from fairex.corpus import example_names, load_example
from fairex.io import ParseError, dumps, instance_to_dict, loads_instance
from strategies import instances


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def model3(tmp_path):
    p = tmp_path / "model3.json"
    ex = load_example("model3_counterexample")
    p.write_text(dumps(instance_to_dict(ex.instance, ex.profiles)))
    return str(p)


@pytest.fixture
def single(tmp_path):
    p = tmp_path / "single.json"
    p.write_text('{"agents": [{"id": 1, "cost": 1, "benefit": [[0, "2"], [10, 0]]}]}')
    return str(p)


def test_solve_max_table(capsys, model3):
    code, out, _ = run(capsys, "solve-max", "--instance", model3, "--format", "table")
    assert code == 0
    assert "x = (6, 4)" in out and "t = (10, 8)" in out


def test_audit_model3_exit_2(capsys, model3):
    code, out, _ = run(capsys, "audit", "--model", "3", "--instance", model3)
    doc = json.loads(out)
    assert code == 2
    assert doc["exploit"]["agent"] == 1 and doc["exploit"]["gain"] == "1"


def test_audit_model1_clean(capsys, model3):
    code, out, _ = run(capsys, "audit", "--model", "1", "--instance", model3)
    assert code == 0 and json.loads(out)["exploit"] is None


def test_verify_single(capsys, single):
    code, out, _ = run(capsys, "verify", "--instance", single, "--profile", "[10]")
    assert code == 0 and json.loads(out)["verdict"] == "equilibrium"


def test_verify_pinned_profile_witness(capsys):
    code, out, _ = run(capsys, "verify", "--example", "discrete_incomparable", "--profile", "x1_overshoot")
    doc = json.loads(out)
    assert code == 2
    assert doc["oracle"]["witness"] == {"agent": 6, "from": "100", "to": "99", "gain": "999/1000"}


def test_oracle_and_pareto(capsys, model3):
    assert run(capsys, "oracle", "--instance", model3, "--profile", "[6, 4]")[0] == 0
    assert run(capsys, "oracle", "--instance", model3, "--profile", "[0, 8]")[0] == 2
    assert run(capsys, "pareto-scan", "--instance", model3, "--grid", "1/2")[0] == 0
    assert run(capsys, "pareto-scan", "--instance", model3, "--profile", '["0", "0"]', "--grid", "1/2")[0] == 2


def test_profile_from_file(capsys, model3, tmp_path):
    p = tmp_path / "x.json"
    p.write_text('["6", "4"]')
    assert run(capsys, "verify", "--instance", model3, "--profile", str(p))[0] == 0


def test_solve_output_reverifies(capsys, tmp_path):
    ex = load_example("graph_incomparable_derived")
    inst_path = tmp_path / "g.json"
    inst_path.write_text(dumps(instance_to_dict(ex.instance)))
    code, out, _ = run(capsys, "solve-graph", "--instance", str(inst_path))
    x = json.loads(out)["x"]
    assert code == 0
    assert run(capsys, "verify", "--instance", str(inst_path), "--profile", json.dumps(x))[0] == 0


def test_probe_seed_env_override(capsys, model3, monkeypatch):
    monkeypatch.setenv("FAIREX_SEED", "11")
    code, out, _ = run(capsys, "probe", "--instance", model3, "--seed", "3", "--restarts", "4")
    doc = json.loads(out)
    assert code == 0 and doc["seed"] == 11 and doc["outside_bounds"] == []


def test_output_is_deterministic(capsys, model3):
    first = run(capsys, "solve-max", "--instance", model3)[1]
    second = run(capsys, "solve-max", "--instance", model3)[1]
    assert first == second
    assert list(json.loads(first)) == ["command", "source", "mode", "x", "t", "utilities", "order", "diagnostics"]


def test_example_export_roundtrip(capsys):
    for name in example_names():
        code, out, _ = run(capsys, "example", name)
        inst, profiles = loads_instance(out)
        ex = load_example(name)
        assert code == 0 and inst == ex.instance and profiles == dict(ex.profiles)


@pytest.mark.parametrize(
    "argv",
    [
        ["solve-max"],  # no instance
        ["solve-max", "--instance", "/nonexistent.json"],
        ["nonsense"],
        ["verify", "--example", "model3_counterexample"],  # no profile
        ["verify", "--example", "model3_counterexample", "--profile", "[1]"],  # wrong length
        ["audit", "--example", "model3_counterexample", "--grid", "-1"],
        ["solve-max", "--example", "graph_incomparable_derived"],  # wrong solver
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as err:
        code = main(argv)
        raise SystemExit(code)
    assert err.value.code == 1


def test_guard_refusal(capsys, tmp_path):
    p = tmp_path / "big.json"
    agents = [{"id": k, "cost": "1", "benefit": [["0", "2"], ["500", "0"]]} for k in range(1, 5)]
    p.write_text(json.dumps({"agents": agents}))
    code, _, err = run(capsys, "pareto-scan", "--instance", str(p), "--grid", "1/8")
    assert code == 1 and "refused" in err and "required" in err


# ------------------------------------------------------------ parsing


@pytest.mark.parametrize(
    "text, where",
    [
        ('{"agents": [{"id": 1, "cost": "x", "benefit": [[0, 1], [1, 0]]}]}', "agents[0].cost"),
        ('{"agents": [{"id": 1, "cost": 1, "benefit": [[0, 1], [1]]}]}', "agents[0].benefit[1]"),
        ('{"agents": [{"id": 1, "cost": 1, "benefit": [[0, 1], [1, 2]]}]}', "agents[0].benefit"),
        ('{"agents": [{"id": 1, "cost": 1}]}', "agents[0].benefit"),
        ('{"agents": [{"id": 1, "cost": 1, "benefit": [[0, 0]]}], "edges": [[1, 1]]}', "edges[0]"),
        ('{"agents": [{"id": 1, "cost": 1, "benefit": [[0, 0]]}], "edges": [[1, 7]]}', "edges[0][1]"),
        ('{"agents": [{"id": 1, "cost": 1, "benefit": [[0, 0]]}, {"id": 2, "cost": 1, "benefit": [[0, 0]]}],'
         ' "edges": [[1, 2], [2, 1]]}', "edges[1]"),
        ('{"mode": "fuzzy", "agents": []}', "mode"),
        ('{"agents": [\n  {"id": 1,,}]}', "<string>:2"),
    ],
)
def test_parse_errors_name_the_field(text, where):
    with pytest.raises(ParseError) as err:
        loads_instance(text)
    assert str(err.value).startswith(where)


def test_decimals_are_exact():
    inst, _ = loads_instance('{"agents": [{"id": 3, "cost": 0.1, "benefit": [["0", "2.5"], ["7/3", 0]]}]}')
    a = inst.agents[0]
    assert a.cost == F(1, 10) and a.benefit.slopes[0] == F(5, 2) and a.benefit.satiation == F(7, 3)


def test_edges_map_ids_to_positions():
    text = json.dumps({
        "agents": [{"id": k, "cost": 1, "benefit": [[0, 1], [1, 0]]} for k in (30, 10, 20)],
        "edges": [[10, 30]],
    })
    inst, _ = loads_instance(text)
    assert [a.id for a in inst.agents] == [10, 20, 30]
    assert inst.edges == frozenset({(0, 2)})


@settings(max_examples=40)
@given(instances(n_max=5, graph=True))
def test_instance_serialisation_roundtrip(inst):
    back, _ = loads_instance(dumps(instance_to_dict(inst)))
    assert back == inst
