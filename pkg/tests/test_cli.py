import json

import pytest

from detineq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    diag = tmp_path / "diag.json"
    diag.write_text(json.dumps({"n": 2, "data": [["2/1", "0/1"], ["0/1", "3/1"]]}))
    notpsd = tmp_path / "notpsd.json"
    notpsd.write_text(json.dumps({"n": 2, "data": [["1/1", "2/1"], ["2/1", "1/1"]]}))
    return tmp_path, diag, notpsd


def test_check_diag_zy(capsys, files):
    _, diag, _ = files
    code, out, _ = run(capsys, "check", "--input", str(diag), "--theorem", "zy", "--perm", "2,1")
    rep = json.loads(out)
    assert code == 0 and rep["holds"] and rep["equality"] and rep["case"] == "diagonal"


def test_check_gate_exit_2(capsys, files):
    _, _, notpsd = files
    code, _, err = run(capsys, "check", "--input", str(notpsd), "--theorem", "hadamard")
    assert code == 2 and "not an F-matrix" in err


def test_check_input_errors(capsys, files):
    tmp, diag, _ = files
    bad = tmp / "bad.json"
    bad.write_text("{oops")
    assert run(capsys, "check", "--input", str(bad), "--theorem", "zy")[0] == 2
    assert run(capsys, "check", "--input", str(tmp / "missing.json"), "--theorem", "zy")[0] == 2
    assert run(capsys, "check", "--input", str(diag), "--theorem", "zy", "--perm", "2,1,3")[0] == 2
    assert run(capsys, "check", "--input", str(diag), "--theorem", "thompson")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == 2


def test_generate_then_thompson_matches_library(capsys, tmp_path):
    from detineq.inequalities import check_thompson
    from detineq.matrix import BlockPartition, Matrix

    out_file = tmp_path / "m.json"
    code, _, _ = run(capsys, "generate", "--family", "psd", "--n", "4", "--rank", "4",
                     "--seed", "42", "--out", str(out_file))
    assert code == 0
    code, out, _ = run(capsys, "check", "--input", str(out_file), "--theorem", "thompson",
                       "--partition", "2,2")
    A = Matrix.from_json(json.loads(out_file.read_text()))
    assert json.loads(out) == check_thompson(A, BlockPartition((2, 2))).to_json()
    assert code == 0


def test_lemma_pq_accepts_integer_s_and_t(capsys, tmp_path):
    out_file = tmp_path / "u.json"
    run(capsys, "generate", "--family", "rationalUnitary", "--n", "3", "--seed", "5",
        "--out", str(out_file))
    args = ["check", "--input", str(out_file), "--theorem", "lemmaPQ", "--lambda", "1,2,3"]
    code, out, _ = run(capsys, *args, "--s", "1/2", "--t", "1")
    code_frac, out_frac, _ = run(capsys, *args, "--s", "1/2", "--t", "1/1")
    assert code == code_frac == 0
    assert json.loads(out) == json.loads(out_frac)


def test_check_enumerates_when_no_perm(capsys, tmp_path):
    f = tmp_path / "m.json"
    run(capsys, "generate", "--family", "pd", "--n", "3", "--seed", "1", "--out", str(f))
    code, out, _ = run(capsys, "check", "--input", str(f), "--theorem", "zy")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 5


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("DETINEQ_SEED", "9")
    _, a, _ = run(capsys, "generate", "--family", "pd", "--n", "2", "--seed", "1")
    monkeypatch.delenv("DETINEQ_SEED")
    _, b, _ = run(capsys, "generate", "--family", "pd", "--n", "2", "--seed", "9")
    assert a == b


def test_fuzz_rank_one_orbit(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "fuzz", "--family", "rankOneOrbit", "--n", "6", "--trials", "25",
                       "--theorems", "zy,hprod", "--jobs", "1", "--out", str(out_file))
    rep = json.loads(out)
    assert code == 0
    assert rep["equalityCount"] == rep["trialsRun"] == 25
    assert json.loads(out_file.read_text()) == rep


def test_fuzz_verbose_emits_json_lines(capsys):
    code, out, _ = run(capsys, "fuzz", "--family", "blockpd", "--sizes", "2,2,2", "--trials",
                       "5", "--theorems", "thompson,blockzy", "--jobs", "1", "--verbose")
    lines = out.splitlines()
    trials = [json.loads(line) for line in lines[:5]]
    assert [t["index"] for t in trials] == list(range(5))
    assert json.loads("\n".join(lines[5:]))["violationCount"] == 0
    assert code == 0


def test_fuzz_bad_config_exit_2(capsys):
    assert run(capsys, "fuzz", "--family", "psd", "--trials", "0", "--theorems", "zy")[0] == 2
    assert run(capsys, "fuzz", "--family", "psd", "--n", "x", "--theorems", "zy")[0] == 2


def test_example_eg1_params_change_s(capsys):
    code, out, _ = run(capsys, "example", "--id", "eg1", "--params", "4/5,3/5")
    a = json.loads(out)
    assert code == 0 and all(c["confirmed"] for c in a["claims"])
    assert a["report"]["equality"]
    _, out, _ = run(capsys, "example", "--id", "eg1", "--params", "5/13,12/13")
    assert json.loads(out)["S"] != a["S"]
    assert run(capsys, "example", "--id", "eg1", "--params", "1/2,1/2")[0] == 2


def test_example_eg2_and_eg3(capsys):
    code, out, _ = run(capsys, "example", "--id", "eg2")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["detail"]["lhs"] == rep["detail"]["rhs"] == "0/1"
    code, out, _ = run(capsys, "example", "--id", "eg3", "--seed", "2")
    assert code == 0


def test_example_n2_equality(capsys):
    code, out, _ = run(capsys, "example", "--id", "n2-equality", "--seed", "3")
    rep = json.loads(out)
    assert code == 0 and rep["claims"][0]["slack"] == "0/1"
