"""Exit codes, formats, determinism, and failure paths of the CLI."""

import json

import pytest

import thetamap.dickson_curve as dickson_curve
import thetamap.theta_graph as theta_graph
from thetamap.cli import main
from thetamap.gf2_arith import FieldSpec


def test_graph_dot_stdout(capsys):
    assert main(["graph", "--t", "6"]) == 0
    out = capsys.readouterr().out
    assert '"45" -> "27";' in out
    assert out.count("digraph") == 4


def test_graph_json_file(tmp_path):
    path = tmp_path / "g.json"
    assert main(["graph", "--t", "4", "--format", "json",
                 "--out", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["t"] == 4
    assert {c["class"] for c in doc["components"]} == {"A", "B"}


def test_verify_structure_single_and_range(capsys):
    assert main(["verify-structure", "--t", "3"]) == 0
    assert "result: all checks passed" in capsys.readouterr().out
    assert main(["verify-structure", "--range", "1..6"]) == 0
    capsys.readouterr()
    assert main(["verify-structure", "--t", "1..6"]) == 0
    assert capsys.readouterr().out.count("[t=") == 36   # 6 checks per degree


def test_degree_cap_honors_environment(monkeypatch, capsys):
    assert main(["graph", "--t", "25"]) == 2
    monkeypatch.setenv("THETA_MAX_T", "10")
    assert main(["verify-structure", "--t", "12"]) == 2
    capsys.readouterr()


def test_verify_orders_text(capsys):
    assert main(["verify-orders", "--n", "1"]) == 0
    out = capsys.readouterr().out
    assert "h-partition" in out and "FAIL" not in out


def test_verify_dickson_json(capsys):
    assert main(["verify-dickson", "--n", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n"] == 3 and doc["passed"]


def test_sweep_csv(capsys):
    assert main(["sweep", "--range", "1..4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,q,m,K,N_pred,S_size,T_size,E_count,passed"
    assert len(lines) == 5
    assert lines[1] == "1,2,3,1,1,1,0,4,true"


def test_config_errors(capsys):
    assert main(["verify-structure", "--t", "3", "--range", "1..4"]) == 2
    assert main(["verify-structure", "--range", "4..1"]) == 2
    assert main(["verify-orders", "--n", "9"]) == 2
    assert main(["verify-dickson", "--n", "13"]) == 2
    assert main(["verify-structure", "--range", "junk"]) == 2
    capsys.readouterr()


def test_missing_command_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_unwritable_output_path(capsys):
    code = main(["graph", "--t", "2", "--out", "/nonexistent-dir/x.dot"])
    assert code == 2
    assert "cannot write" in capsys.readouterr().err


def test_structure_failure_exits_one(monkeypatch, capsys):
    monkeypatch.setattr(theta_graph, "_expected_inf_count", lambda k: 99)
    assert main(["verify-structure", "--t", "3"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "inf-tree-shape" in out


def test_orders_failure_exits_one(monkeypatch, capsys):
    true_trace = FieldSpec.subfield_trace

    def corrupted(self, a, d):
        return 1 - true_trace(self, a, d)

    monkeypatch.setattr(FieldSpec, "subfield_trace", corrupted)
    assert main(["verify-orders", "--n", "2"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_dickson_failure_exits_one(monkeypatch, capsys):
    true_k = dickson_curve.kloosterman
    monkeypatch.setattr(dickson_curve, "kloosterman",
                        lambda spec: true_k(spec) + 4)
    assert main(["verify-dickson", "--n", "4"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "kloosterman-count" in out


def test_worker_count_does_not_change_output(tmp_path):
    one = tmp_path / "w1.json"
    four = tmp_path / "w4.json"
    assert main(["verify-dickson", "--range", "1..5", "--format", "json",
                 "--workers", "1", "--out", str(one)]) == 0
    assert main(["verify-dickson", "--range", "1..5", "--format", "json",
                 "--workers", "4", "--out", str(four)]) == 0
    assert one.read_bytes() == four.read_bytes()


def test_seed_changes_nothing_visible_but_still_passes(capsys):
    assert main(["verify-dickson", "--n", "9", "--seed", "3"]) == 0
    assert main(["verify-dickson", "--n", "9", "--seed", "4"]) == 0
    capsys.readouterr()
