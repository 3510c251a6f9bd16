import json
import shutil
import subprocess
import sys

import pytest

from stringycoh import cli
from stringycoh.documents import fixture_path
from stringycoh.errors import ConsistencyError
from stringycoh.stringy import CohomologyReport

from conftest import load_fixture_doc


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_quintic_table(capsys):
    code, out, _ = run(capsys, "compute", "--fixture", "quintic_node")
    assert code == 0
    row3 = next(line for line in out.splitlines() if line.startswith(" 3*"))
    assert row3.split()[1:] == ["204", "202", "203", "203", "203"]


def test_compute_json_round_trip(capsys):
    for name in ("quintic_node", "pinched_torus", "sphere_smoothpoint", "torus_smoothpoint"):
        code, out, _ = run(capsys, "compute", "--fixture", name, "--out", "json")
        assert code == 0
        payload = json.loads(out)
        r = CohomologyReport.from_dict(payload["report"])
        assert r.to_dict() == payload["report"]
    assert payload["report"]["tables"]["S0"] == [1, 2, 1]


def test_compute_pinched_torus_by_path(capsys):
    code, out, _ = run(capsys, "compute", "--input", str(fixture_path("pinched_torus")),
                       "--mode", "simplicial", "--out", "json")
    assert code == 0
    assert json.loads(out)["report"]["tables"]["S0"] == [1, 2, 1]


def test_compute_is_deterministic(capsys):
    _, first, _ = run(capsys, "compute", "--fixture", "quintic_node", "--out", "json")
    _, second, _ = run(capsys, "compute", "--fixture", "quintic_node", "--out", "json")
    assert first == second


def test_malformed_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, "compute", "--input", str(bad), "--mode", "ranks")
    assert code == 2 and out == "" and "malformed" in err


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "verify", "--input", str(tmp_path / "nope.ranks.json"))
    assert code == 2 and err.count("\n") == 1


def test_unknown_format_needs_mode(tmp_path, capsys):
    p = tmp_path / "doc.json"
    p.write_text("{}")
    assert run(capsys, "compute", "--input", str(p))[0] == 2


def test_tampered_rank_file_exit_2(tmp_path, capsys):
    doc = load_fixture_doc("quintic_node")
    doc["maps"]["ranks"][3][0] = 0
    p = tmp_path / "tampered.ranks.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "zigzag", "--input", str(p))
    assert code == 2 and "H^3_c(Y^o)" in err


def test_simplicial_validation_exit_2(tmp_path, capsys):
    doc = load_fixture_doc("pinched_torus")
    doc["half_dim"] = 2
    p = tmp_path / "x.simp.json"
    p.write_text(json.dumps(doc))
    assert run(capsys, "compute", "--input", str(p))[0] == 2


def test_consistency_error_exit_3(monkeypatch, capsys):
    def boom(pkg):
        raise ConsistencyError("forced")

    monkeypatch.setattr(cli, "build_report", boom)
    code, _, err = run(capsys, "compute", "--fixture", "pinched_torus")
    assert code == 3 and "forced" in err


def test_zigzag_quintic(capsys):
    code, out, _ = run(capsys, "zigzag", "--fixture", "quintic_node")
    assert code == 0 and "witness: found" in out


def test_zigzag_sphere(capsys):
    code, out, _ = run(capsys, "zigzag", "--fixture", "sphere_smoothpoint", "--out", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["theta0"]["dims"]["K"] == payload["theta0"]["dims"]["C"] == 0
    assert payload["witness_status"] == "found"


def test_zigzag_asymmetric(capsys):
    code, out, _ = run(capsys, "zigzag", "--fixture", "asymmetric_link")
    assert code == 0 and "no witness (dims mismatch at left/right" in out


def test_verify_quintic(capsys):
    code, out, _ = run(capsys, "verify", "--fixture", "quintic_node")
    assert code == 0
    checks = out.splitlines()[:-1]
    q_line = next(line for line in checks if line.startswith("poincare(Q-table)"))
    assert q_line.endswith("INFO FAIL")
    assert all(line.endswith("PASS") for line in checks if line is not q_line)


@pytest.mark.parametrize("name", ["pinched_torus", "sphere_smoothpoint", "torus_smoothpoint", "twonode"])
def test_verify_fixtures_pass(capsys, name):
    assert run(capsys, "verify", "--fixture", name)[0] == 0


def test_verify_asymmetric_fails(capsys):
    code, out, _ = run(capsys, "verify", "--fixture", "asymmetric_link")
    assert code == 1 and "theta0 self-dual" in out


def test_verify_random_seed(capsys):
    code, out, _ = run(capsys, "verify", "--random-seed", "0", "--out", "json")
    assert code == 0 and json.loads(out)["ok"]


def test_fixture_dir_override(tmp_path, monkeypatch, capsys):
    shutil.copy(fixture_path("pinched_torus"), tmp_path / "mine.simp.json")
    monkeypatch.setenv("STRINGYCOH_FIXTURE_DIR", str(tmp_path))
    code, out, _ = run(capsys, "compute", "--fixture", "mine", "--out", "json")
    assert code == 0 and json.loads(out)["report"]["tables"]["S0"] == [1, 2, 1]
    assert run(capsys, "compute", "--fixture", "quintic_node")[0] == 2


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "stringycoh.cli", "compute", "--fixture", "pinched_torus"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "K0 = 1" in proc.stdout
