import json

import pytest

from hopfgreen.cli import run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_report_metadata(capsys):
    code, out, _ = _run(capsys, "catalog", "--p", "2", "--orders", "1,1")
    rep = json.loads(out)
    assert code == 0
    assert rep["version"] and rep["field"]["p"] == 2
    assert [s["label"] for s in rep["result"]["structures"]] == ["G0", "G1", "G2", "G3"]
    assert rep["config"]["seed"] == 0 and rep["config"]["nmax"] == 6


def test_deterministic(capsys):
    a = _run(capsys, "decompose", "--module", "2V4@[1:1] + P", "--seed", "3")[1]
    b = _run(capsys, "decompose", "--module", "2V4@[1:1] + P", "--seed", "3")[1]
    assert a == b
    assert json.loads(a)["result"]["decomposition"]["summands"] == {"V4@[1:1]": 2, "P": 1}


def test_green_table_compare_text(capsys):
    code, out, _ = _run(capsys, "green-table", "--orders", "3", "--all-structures", "--compare", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "tables identical: true"


def test_green_table_csv(capsys):
    code, out, _ = _run(capsys, "green-table", "--orders", "1", "--p", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "structure,i,j,J1,J2,J3"


def test_pa_check_exit_code(capsys):
    code, out, _ = _run(capsys, "pa-check", "--case", "n_n_m", "--n", "1", "--m", "2")
    assert code == 1
    assert json.loads(out)["result"]["verdict"] == "NOT in noble correspondence"


def test_noble_correspondence_pass(capsys):
    code, out, _ = _run(capsys, "noble-correspondence", "--left", "G0", "--right", "G3", "--nmax", "2")
    assert code == 0


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": 2, "orders": [2], "structures": ["G1"], "seed": 5}))
    out_path = tmp_path / "r.json"
    code, _, _ = _run(capsys, "verify-hopf", "--config", str(cfg), "--seed", "7", "--out", str(out_path))
    rep = json.loads(out_path.read_text())
    assert code == 0
    assert rep["config"]["seed"] == 7 and rep["config"]["orders"] == [2]
    assert list(rep["result"]["reports"]) == ["G1"]


def test_twist_structure_from_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"orders": [1, 1, 1], "automorphisms": {"phi": ["x + y*z", "y", "z"]}}))
    code, out, _ = _run(capsys, "noble-correspondence", "--config", str(cfg), "--left", "G0", "--right", "twist(G0,phi)")
    assert code == 1
    assert json.loads(out)["result"]["reports"][0]["verdict"] == "NOT in noble correspondence"


@pytest.mark.parametrize("argv", [
    ["decompose"],
    ["decompose", "--module", "V4@[1:2]"],
    ["decompose", "--module", "P", "--format", "csv"],
    ["nobles", "--p", "7"],
    ["bogus"],
    ["hopf-iso", "--orders", "1,1,1"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == 2
