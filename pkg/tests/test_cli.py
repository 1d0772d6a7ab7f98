from __future__ import annotations

import json
import subprocess
import sys

import pytest

from credal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_taxi(capsys):
    code, out, _ = run(capsys, "taxi")
    assert code == 0
    assert "P(E) = 29/100" in out and "P(H | E) = 12/29" in out
    assert out.count("P(H) = 12/29") == 4


def test_run_builtin_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "run", "taxi")
    assert code == 0 and out.splitlines()[-1] == "FINAL TOF P(H) = 12/29"
    path = tmp_path / "taxi.json"
    path.write_text(json.dumps({"mode": "EVIDENCE_ONLY", "agents": [
        {"id": "TOF", "role": "TOF", "prior": {"generators": ["E", "H"], "mass": ["3/25", "17/100", "3/100", "17/25"]}}]}))
    code, out2, _ = run(capsys, "run", str(path))
    assert code == 0 and out2 == out


def test_run_malformed_rational(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"mode": "SEQUENTIAL",\n "input": {"r": "4/0"},\n "agents": [{"id": "TOF", "role": "TOF"}]}')
    code, out, err = run(capsys, "run", str(path))
    assert code == 1 and out == ""
    assert "line 2, column 17" in err


def test_run_abort_exit_code(capsys, tmp_path):
    path = tmp_path / "abort.json"
    path.write_text(json.dumps({"mode": "LRTMR", "agents": [
        {"id": "TOF", "role": "TOF", "prior": {"generators": ["H"], "mass": ["3/20", "17/20"]}},
        {"id": "MOE", "role": "MOE", "prior": {"generators": ["E", "H"], "mass": ["1/2", "1/2", "0", "0"]}}]}))
    code, out, _ = run(capsys, "run", str(path))
    assert code == 2 and "ABORTED" in out


def test_run_refused_exit_code(capsys):
    code, out, _ = run(capsys, "run", "moe-naive")
    assert code == 2 and "REFUSED" in out


def test_run_missing_file(capsys):
    code, _, err = run(capsys, "run", "/nonexistent/scenario.json")
    assert code == 1 and "cannot read" in err


def test_run_prosecutor_builtin(capsys):
    code, out, _ = run(capsys, "run", "prosecutor")
    assert code == 0 and "update factor = 11111/1121" in out


def test_check_gsfail(capsys):
    code, out, _ = run(capsys, "check", "gsfail")
    assert code == 0
    assert "PASS gsfail" in out and "19/35 vs 16/35" in out


def test_check_failure_exit(capsys):
    code, out, _ = run(capsys, "check", "toc", "--cases", "10")
    assert code == 1 and out.startswith("FAIL toc")


def test_check_bad_input(capsys):
    assert run(capsys, "check", "nope")[0] == 1
    assert run(capsys, "check", "adams", "--cases", "0")[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["check", "adams", "--cases", "x"])
    assert info.value.code == 1


def test_check_is_deterministic(capsys):
    first = run(capsys, "check", "adams,commute", "--cases", "20", "--seed", "3")
    second = run(capsys, "check", "adams,commute", "--cases", "20", "--seed", "3")
    assert first == second and first[0] == 0


def test_lts_commands(capsys):
    code, out, _ = run(capsys, "lts", "dump", "--depth", "0")
    assert code == 0 and out.splitlines() == ["state 0: (H)[1, 0]", "state 1: (H)[1/2, 1/2]"]
    code, out, _ = run(capsys, "lts", "bisim")
    assert code == 0 and out.splitlines() == ["R^id: bisimulation", "R^max: bisimulation"]
    code, out, _ = run(capsys, "lts", "search")
    assert code == 0 and out.strip() == "none found"


def test_lts_seed_file_and_budget(capsys, tmp_path):
    path = tmp_path / "seeds.json"
    path.write_text(json.dumps([{"generators": ["E", "H"], "weights": [12, 17, 3, 68]}]))
    code, out, _ = run(capsys, "lts", "dump", "--seeds", str(path), "--labels", "BC(E)")
    assert code == 0 and "0 [BC,E,29/100] 1" in out
    code, _, err = run(capsys, "lts", "dump", "--seeds", str(path), "--labels", "BC(E);BC(!H);JC(1/2,H)",
                       "--depth", "3", "--max-states", "3")
    assert code == 1 and "exceeds" in err


def test_prosecutor_command(capsys):
    code, out, _ = run(capsys, "prosecutor", "--n", "10", "--k", "2", "--p", "1/2")
    assert code == 0 and "update factor = 9/5" in out
    assert run(capsys, "prosecutor", "--n", "10", "--k", "20", "--p", "1/2")[0] == 1


def test_eval(capsys, tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps({"generators": ["E", "H"], "mass": ["3/25", "17/100", "3/100", "17/25"]}))
    code, out, _ = run(capsys, "eval", str(path), "E")
    assert code == 0 and out.strip() == "P(E) = 29/100"
    code, out, _ = run(capsys, "eval", str(path), "H", "--given", "E")
    assert out.strip() == "P0(H | E) = 12/29"
    assert run(capsys, "eval", str(path), "E &")[0] == 1
    assert run(capsys, "eval", str(path), "Q")[0] == 1


def test_unknown_command_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "credal", "taxi"], capture_output=True, text=True)
    assert proc.returncode == 0 and "12/29" in proc.stdout
