import json

import pytest

import derlie.correspondence as corr
from conftest import MODELS_DIR
from derlie.cli import main

GOLDEN_DIR = MODELS_DIR.parent / "tests" / "golden"

GOLDEN_CASES = [
    (
        "homology_twisted.json",
        ["homology", "models/s3s3_s5s7_twisted.dgl", "--max-degree", "8"],
    ),
    (
        "brackets_untwisted.json",
        ["brackets", "models/s3s3_s5s7_untwisted.dgl", "--max-degree", "8"],
    ),
    (
        "classify_su3_cp4.json",
        ["classify-su", "--n", "3", "--m", "4", "--max-degree", "12"],
    ),
    (
        "hspace_su3_cp3_zero.json",
        ["hspace", "models/su3_cp3_zero.dgl"],
    ),
]


@pytest.fixture(autouse=True)
def _repo_root(monkeypatch):
    monkeypatch.chdir(MODELS_DIR.parent)


def run(argv, capsysbinary):
    code = main(argv)
    return code, capsysbinary.readouterr().out


@pytest.mark.parametrize("golden,argv", GOLDEN_CASES, ids=[g for g, _ in GOLDEN_CASES])
def test_golden_byte_equality(golden, argv, capsysbinary):
    code, out = run(argv, capsysbinary)
    assert code == 0
    assert out == (GOLDEN_DIR / golden).read_bytes()


def test_output_is_deterministic(capsysbinary):
    argv = ["report", "models/s3s3_s5s7_twisted.dgl", "--max-degree", "8"]
    _, first = run(argv, capsysbinary)
    _, second = run(argv, capsysbinary)
    assert first == second


def test_json_round_trips_and_carries_schema(capsysbinary):
    code, out = run(
        ["report", "models/su3_cp3_c2.dgl", "--max-degree", "10"], capsysbinary
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "derlie-report/1"
    assert doc["command"] == "report"
    assert doc["inputs"]["model_file"] == "models/su3_cp3_c2.dgl"
    assert doc["max_degree"] == 10
    assert doc["result"]["hspace"]["verdict"] == "H-space (certified)"
    assert doc["result"]["psi"]["ok"]


def test_table_format(capsysbinary):
    code, out = run(
        ["homology", "models/s3s3_s5s7_twisted.dgl", "--format", "table"], capsysbinary
    )
    assert code == 0
    text = out.decode()
    assert "homology" in text
    assert "{" not in text.splitlines()[0]


def test_verify_psi_command(capsysbinary):
    code, out = run(
        ["verify-psi", "models/base_differential.dgl", "--max-degree", "8"],
        capsysbinary,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["ok"]
    assert doc["result"]["failures"] == []


def test_cochains_command(capsysbinary):
    code, out = run(
        ["cochains", "models/s3s3_s5s7_untwisted.dgl", "--homology", "--max-degree", "8"],
        capsysbinary,
    )
    assert code == 0
    doc = json.loads(out)
    gens = doc["result"]["generators"]
    assert sorted(g["degree"] for g in gens) == [2, 3, 3, 3, 5, 5, 6, 8]
    assert doc["result"]["d_squared_ok"]


def test_missing_file_exits_one(capsys):
    assert main(["homology", "models/no_such_model.dgl"]) == 1
    assert "error" in capsys.readouterr().err


def test_bad_document_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.dgl"
    bad.write_text("base {\n  d s3 = x^2\n}\n")
    assert main(["homology", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "unknown-generator" in err


def test_invalid_model_exits_one(tmp_path, capsys):
    bad = tmp_path / "invalid.dgl"
    bad.write_text(
        "base {\n  generator x degree 2\n}\nfiber {\n  generator s3 degree 3\n}\n"
    )
    assert main(["homology", str(bad)]) == 1
    assert "invalid model" in capsys.readouterr().err


def test_internal_failure_exits_two(monkeypatch, capsys):
    def boom(model, n):
        raise RuntimeError("synthetic internal fault")

    monkeypatch.setattr(corr, "verify_psi", boom)
    assert main(["verify-psi", "models/su2_cp2_zero.dgl"]) == 2
    assert "internal invariant failure" in capsys.readouterr().err
