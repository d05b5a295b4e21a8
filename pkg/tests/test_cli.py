import json

import pytest

from heckelab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_multiply_both_routes_agree(capsys):
    code, out = run(capsys, "multiply", "--p", "3", "--a", "1,0", "--b", "1,0")
    assert code == 0
    payload = json.loads(out)
    assert payload["satake_route"] == {"(1, 1)": 4, "(2, 0)": 1}
    assert payload["coset_route"] == payload["satake_route"]
    assert payload["diff"] == {}
    assert payload["version"] == "0.1.0"


def test_multiply_budget_exit_code(capsys):
    code, out = run(
        capsys, "--budget", "100", "multiply", "--p", "5", "--a", "3,0,0", "--b", "3,0,0"
    )
    assert code == 3
    payload = json.loads(out)
    assert payload["coset_route"] is None
    assert "budget_exceeded" in payload


def test_amplifier_table(capsys):
    code, out = run(capsys, "amplifier", "--n", "2", "--p", "5")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "PASS"
    row = payload["table"][0]
    assert row["(2, 0)"] == "-5/6" and row["(1, 1)"] == "5/6"


def test_cosets_consistency(capsys):
    code, out = run(capsys, "cosets", "--a", "1,0", "--p", "3", "--reps")
    assert code == 0
    payload = json.loads(out)
    assert payload["degree"] == 4 == payload["degree_via_satake"]
    assert len(payload["representatives"]) == 4


def test_lem2_table_csv(capsys):
    code, out = run(capsys, "--format", "csv", "lem2", "--n", "2", "--j", "1",
                    "--ladder", "2,3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[0] == "c_0"
    assert len(lines) == 3


def test_count_lembp(capsys):
    code, out = run(capsys, "count", "--mode", "lembp", "--poly", "1,0,1,0,0,-25",
                    "--delta", "0.5")
    assert code == 0
    payload = json.loads(out)
    assert payload["report"]["count"] == 12


def test_count_sdelta_witness_file(tmp_path, capsys):
    path = tmp_path / "witnesses.json"
    code, out = run(
        capsys, "count", "--mode", "sdelta", "--n", "2", "--m", "1", "--l", "1",
        "--q", "identity", "--witness-file", str(path),
    )
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["count"] == 4
    assert sorted(payload["witnesses"]) == sorted(
        [[1, 0, 0, 1], [-1, 0, 0, -1], [0, 1, -1, 0], [0, -1, 1, 0]]
    )


def test_count_sdelta_sign_matrix_witnesses(tmp_path, capsys):
    path = tmp_path / "sign_witnesses.json"
    code, _ = run(
        capsys, "count", "--mode", "sdelta", "--n", "4", "--m", "16", "--l", "2",
        "--q", "identity", "--delta", "1e-6", "--witness-file", str(path),
    )
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["count"] == 384
    assert all(all(abs(x) == 1 for x in w) for w in payload["witnesses"])


def test_count_corollary_with_file_form(tmp_path, capsys):
    qpath = tmp_path / "form.json"
    qpath.write_text(json.dumps([[2, 1], [1, 3]]))
    code, out = run(
        capsys, "count", "--mode", "corollary", "--n", "2", "--k", "0",
        "--ladder", "4,8", "--q", f"file:{qpath}",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["report"]["count"] > 0


def test_reports_are_deterministic(capsys):
    _, out1 = run(capsys, "amplifier", "--n", "2", "--p", "7")
    _, out2 = run(capsys, "amplifier", "--n", "2", "--p", "7")
    assert out1 == out2
    _, c1 = run(capsys, "count", "--mode", "sdelta", "--n", "2", "--m", "4", "--l", "4")
    _, c2 = run(capsys, "count", "--mode", "sdelta", "--n", "2", "--m", "4", "--l", "4")
    assert c1 == c2


def test_seeded_random_form_deterministic(capsys):
    args = ("count", "--mode", "corollary", "--n", "3", "--k", "0",
            "--ladder", "6,12", "--q", "random", "--seed", "11")
    _, out1 = run(capsys, *args)
    _, out2 = run(capsys, *args)
    assert out1 == out2


def test_verify_suite(capsys):
    code, out = run(capsys, "verify")
    payload = json.loads(out)
    assert code == 0
    assert payload["verdict"] == "PASS"
    assert all(c["ok"] for c in payload["checks"])


def test_output_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, _ = run(capsys, "--output", str(path), "satake", "--a", "2,0", "--p", "3")
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["scaled_coefficients"]["(1, 1)"] == "2/3"
