import json

import pytest

import alabama
from alabama import cli, render


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out

    return code, out


def test_apportion_json(capsys):
    code, out = run(capsys, "--format", "json", "apportion", "--pop", "53,33,14", "-n", "10..11")

    assert code == 0
    data = json.loads(out)
    assert data["states"] == ["A", "B", "C"]
    assert [a["seats"] for a in data["allocations"]] == [[5, 3, 2], [6, 4, 1]]


def test_apportion_single_state(capsys):
    code, out = run(capsys, "--format", "json", "apportion", "--pop", "5", "-n", "7")

    assert code == 0
    assert json.loads(out)["allocations"][0]["seats"] == [7]


def test_apportion_text(capsys):
    code, out = run(capsys, "apportion", "--pop", "53,33,14", "-n", "10")

    assert code == 0
    assert out.startswith("n = 10\n")
    assert "*" in out


def test_apportion_tie_exit_code(capsys):
    code, out = run(capsys, "apportion", "--pop", "6,3,1", "-n", "4")

    assert code == 3
    assert out == ""


def test_apportion_tie_with_priority(capsys):
    code, out = run(capsys, "--format", "json", "apportion", "--pop", "6,3,1", "-n", "4", "--policy", "priority:2,1,0")

    assert code == 0
    assert json.loads(out)["allocations"][0]["seats"] == [2, 1, 1]


def test_lot_needs_seed(capsys):
    code, _ = run(capsys, "apportion", "--pop", "6,3,1", "-n", "4", "--policy", "lot")

    assert code == 2


def test_bad_input(capsys):
    assert run(capsys, "apportion", "--pop", "5,x", "-n", "3")[0] == 2
    assert run(capsys, "apportion", "--pop", "5,0", "-n", "3")[0] == 2
    assert run(capsys, "apportion", "--file", "no-such-profile.json", "-n", "3")[0] == 2


def test_missing_argument():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["apportion", "--pop", "5,3"])

    assert excinfo.value.code == 2


def test_profile_files(capsys, tmp_path):
    jsonfile = tmp_path / "profile.json"
    jsonfile.write_text(json.dumps({"populations": [53, 33, 14], "names": ["AL", "GA", "TN"]}))
    csvfile = tmp_path / "profile.csv"
    csvfile.write_text("AL,53\nGA,33\nTN,14\n")

    for path in (jsonfile, csvfile):
        code, out = run(capsys, "--format", "json", "apportion", "--file", str(path), "-n", "10")
        assert code == 0
        data = json.loads(out)
        assert data["states"] == ["AL", "GA", "TN"]
        assert data["allocations"][0]["seats"] == [5, 3, 2]


def test_ties(capsys):
    code, out = run(capsys, "--format", "json", "ties", "--pop", "6,3,1", "-n", "4..5")

    assert code == 0
    ties = json.loads(out)["ties"]
    assert [t["house_size"] for t in ties] == [4, 5]


def test_simulate(capsys):
    code, out = run(capsys, "--format", "json", "simulate", "--pop", "3,3,1", "-N", "70000")

    assert code == 0
    data = json.loads(out)
    assert data["counts"] == [0, 0, 10000]
    assert data["policy"] == "priority"

    code, out = run(capsys, "--format", "json", "simulate", "--pop", "2,2,1", "-N", "1000")
    assert json.loads(out)["counts"] == [0, 0, 0]


def test_simulate_generic_needs_seed(capsys):
    assert run(capsys, "simulate", "--shares-generic", "3", "-N", "100")[0] == 2


def test_prob(capsys):
    for method in ("dp", "esp", "brute"):
        code, out = run(capsys, "--format", "json", "prob", "--shares", "0.45,0.35,0.20", "--method", method)
        assert code == 0
        assert json.loads(out)["values"] == ["0", "0", "1/80"]


def test_prob_periodic(capsys):
    code, out = run(capsys, "--format", "json", "prob", "--pop", "3,3,1", "--method", "periodic")

    assert code == 0
    assert json.loads(out)["per_state_probability"] == ["0", "0", "1/7"]

    assert run(capsys, "prob", "--shares", "0.5,0.5", "--method", "periodic")[0] == 2


def test_prob_bad_shares(capsys):
    assert run(capsys, "prob", "--shares", "0.5,0.4")[0] == 2


def test_expected(capsys):
    code, out = run(capsys, "--format", "json", "expected", "-m", "2..4", "--ratio")

    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["E q_m"] for r in rows] == ["0", "1/108", "17/1440"]
    assert [r["E q_(m)"] for r in rows] == ["0", "1/36", "17/480"]
    assert rows[0]["ratio"] is None
    assert rows[1]["ratio"] == 0.33333


def test_expected_mc_needs_seed(capsys):
    assert run(capsys, "expected", "-m", "3", "--mc", "1000")[0] == 2


def test_psi_csv(capsys):
    code, out = run(capsys, "--format", "csv", "psi", "--xmax", "0", "--step", "1")

    assert code == 0
    assert out == "x,psi\n0,0.3678794412\n"


def test_double(capsys):
    code, out = run(capsys, "--format", "json", "double", "--shares", "1/3,1/3,1/3,0,0")

    assert code == 0
    assert json.loads(out) == {"double_paradox": "1/810"}

    assert run(capsys, "double", "--shares", "0.45,0.35,0.20")[0] == 2


def test_b_tolerance(capsys):
    assert run(capsys, "b", "--tol", "1e-2")[0] == 2


def test_threads_checked(capsys):
    assert run(capsys, "--threads", "0", "psi", "--xmax", "1")[0] == 2


def test_json_is_canonical(capsys):
    _, out = run(capsys, "--format", "json", "simulate", "--pop", "28,27,27,9,9", "-N", "200")

    assert render.to_json(json.loads(out)) == out


def test_logfile(capsys, tmp_path):
    logfile = tmp_path / "alabama.log"

    code, _ = run(capsys, "-v", "--logfile", str(logfile), "apportion", "--pop", "6,3,1", "-n", "4")

    assert code == 3
    assert any("TieUnresolved" in line for line in alabama.logger.get_logdata())
    alabama.logger.start_logging("1")
    assert "TieUnresolved" in logfile.read_text()
