import json
import subprocess
import sys

import pytest

from hisafe.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_poly(capsys):
    code, out = run_cli(capsys, "poly", "--n", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["p"] == 5


def test_plan_csv(capsys):
    code, out = run_cli(capsys, "plan", "--n", "24", "--all-l", "--format", "csv")
    assert code == 0
    assert len(out.strip().splitlines()) == 7


def test_plan_compare(capsys):
    code, out = run_cli(capsys, "plan", "--compare")
    assert code == 0
    assert any(e["differs"] for e in json.loads(out))


def test_round_deterministic(capsys, tmp_path):
    outs = []
    for name in ("a", "b"):
        trace = tmp_path / f"{name}.jsonl"
        code, out = run_cli(capsys, "round", "--n", "12", "--l", "4", "--d", "5", "--seed", "7", "--trace", str(trace))
        assert code == 0
        outs.append(trace.read_bytes())
    assert outs[0] == outs[1]


def test_round_inputs_and_triples(capsys, tmp_path):
    inputs = tmp_path / "x.csv"
    inputs.write_text("1\n-1\n1\n")
    dump = tmp_path / "t.jsonl"
    code, out = run_cli(capsys, "round", "--n", "3", "--inputs", str(inputs), "--dump-triples", str(dump), "--format", "json")
    assert code == 0
    assert json.loads(out)["vote"] == [1]
    assert dump.read_text().count("\n") == 2


def test_round_bad_layout_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["round", "--n", "12", "--l", "5"])
    assert exc.value.code == 2


def test_sim_both_identical(capsys):
    code, out = run_cli(capsys, "sim", "--n", "6", "--l", "2", "--d", "4", "--rounds", "10", "--format", "json")
    assert code == 0
    assert json.loads(out)["identical"] is True


def test_leakage(capsys):
    code, out = run_cli(capsys, "leakage", "--n1", "3", "--max-n1", "5", "--format", "json")
    assert code == 0
    assert "1/16" in out


def test_bench(capsys):
    code, out = run_cli(capsys, "bench", "--n", "6", "--l", "2", "--d", "4", "8", "--format", "json")
    assert code == 0
    json.loads(out)


def test_help_and_unknown_args():
    r = subprocess.run([sys.executable, "-m", "hisafe.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "plan" in r.stdout
    r = subprocess.run([sys.executable, "-m", "hisafe.cli", "plan", "--l", "5"], capture_output=True, text=True)
    assert r.returncode == 2
