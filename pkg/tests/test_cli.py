import json
import subprocess
import sys
from pathlib import Path

import pytest

from multihol.cli import EXIT_BOUND, EXIT_FAIL, EXIT_INPUT, EXIT_MATH, EXIT_OK, main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_full_rank_json(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "g3_4_full.json", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["sym_part_order"] == 3**60
    assert rep["res_group_order"] == 3**8 * 24261120 * 48
    assert rep["tg_order"] == {"value": 3**68 * 24261120 * 48, "status": "conditional"}
    assert rep["omega1_in_derived"] is True
    assert rep["stabilizer"]["status"] == "unknown"
    assert json.loads(json.dumps(rep)) == rep


def test_analyze_not_full_rank(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "g3_2_zero.json", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["res_group_order"]["error"] == "NotFullRank"
    assert rep["stabilizer"]["status"] == "exhaustive"


def test_analyze_human_output(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "g3_2_d10.json")
    assert code == EXIT_OK
    assert "rank_D: 1" in out


def test_verify_power(capsys):
    code, out, _ = run(capsys, "verify", DATA / "g3_2_zero.json", "--power-c", 2, "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["verified"] and rep["exhaustive"]
    code, _, _ = run(capsys, "verify", DATA / "g3_2_zero.json", "--power-c", 1)
    assert code == EXIT_MATH


def test_verify_criterion(capsys):
    code, out, _ = run(
        capsys, "verify", DATA / "g3_4_full.json", "--criterion", DATA / "g3_4_A.json", DATA / "g3_4_T.json", "--pairs", 2000, "--json"
    )
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["verified"] and rep["res_z_equals_wedge_A_T"]
    assert rep["res_c"] == json.loads((DATA / "g3_4_A.json").read_text())


def test_verify_criterion_rejects_non_solution(capsys, tmp_path):
    bad = tmp_path / "T.json"
    bad.write_text(json.dumps([[2 if i == j else 0 for j in range(6)] for i in range(6)]))
    code, _, _ = run(capsys, "verify", DATA / "g3_4_full.json", "--criterion", DATA / "g3_4_A.json", bad)
    assert code == EXIT_MATH


def test_verify_form(capsys):
    code, out, _ = run(capsys, "verify", DATA / "g3_2_d10.json", "--form", DATA / "form_power2.json", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["mode"] == "form"
    code, _, _ = run(capsys, "verify", DATA / "g3_2_d10.json", "--form", '{"kind": "power", "c": 1}')
    assert code == EXIT_MATH
    code, out, _ = run(capsys, "verify", DATA / "g3_2_d10.json", "--form", '{"kind": "bogus"}', "--json")
    assert code == EXIT_INPUT
    assert json.loads(out)["field"] == "kind"


def test_oracle_and_negative_control(capsys):
    code, out, _ = run(capsys, "oracle", DATA / "g3_2_zero.json", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["passed"] and rep["subgroups_found"] == 3
    code, _, err = run(capsys, "oracle", DATA / "g3_2_zero.json", "--inject-corrupt")
    assert code == EXIT_FAIL
    assert "counterexample" in err


def test_oracle_bound(capsys):
    code, _, _ = run(capsys, "oracle", DATA / "g3_4_full.json")
    assert code == EXIT_BOUND


@pytest.mark.parametrize(
    "doc,field",
    [({"p": 9, "n": 2, "D": [[0], [0]]}, "p"), ({"p": 3, "n": 2, "D": [[0, 0], [0, 0]]}, "D[0]")],
)
def test_bad_spec_names_field(capsys, tmp_path, doc, field):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "analyze", path, "--json")
    assert code == EXIT_INPUT
    assert json.loads(out)["field"] == field


def test_missing_and_malformed_files(capsys, tmp_path):
    code, _, _ = run(capsys, "analyze", tmp_path / "absent.json")
    assert code == EXIT_INPUT
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    code, _, _ = run(capsys, "analyze", path)
    assert code == EXIT_INPUT


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--pairs", 2000, "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["passed"] and set(rep["suites"]) >= {"ff_linalg", "class2_group", "bilinear", "res", "witnesses"}


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "multihol", "analyze", str(DATA / "g3_2_d10.json"), "--json"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["rank_D"] == 1
