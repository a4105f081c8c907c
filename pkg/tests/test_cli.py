import json

import pytest

from circulant_ppt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_werner_ppt(capsys):
    code, out, _ = run(capsys, "check", "--zoo", "werner", "--param", "p=0.2", "--masks", "all")
    assert code == 0
    doc = json.loads(out)
    assert doc["header"]["version"] and doc["header"]["tolerances"]["psd_rtol"] == 1e-10
    assert doc["result"]["fully_ppt"] is True


def test_check_ghz_not_ppt(capsys):
    code, out, _ = run(capsys, "check", "--zoo", "ghz", "--d", "2", "--n", "3")
    assert code == 1
    assert json.loads(out)["result"]["min_eigenvalue"] == pytest.approx(-0.5)


def test_check_file_single_mask(tmp_path, capsys):
    path = tmp_path / "state.json"
    assert main(["export", "--zoo", "ghz", "--d", "2", "--n", "3", "--out", str(path)]) == 0
    code, out, _ = run(capsys, "check", "--file", str(path), "--mask", "01", "--oracle")
    doc = json.loads(out)["result"]
    assert code == 1 and doc["verdict_mask"] == "01" and len(doc["masks"]) == 1
    assert doc["masks"][0]["oracle_deviation"] == 0.0
    code, _, _ = run(capsys, "check", "--file", str(path), "--mask", "00")
    assert code == 0


def test_check_errors(capsys):
    assert run(capsys, "check", "--zoo", "nope")[0] == 2
    assert run(capsys, "check", "--zoo", "werner", "--param", "p=2")[0] == 2
    assert run(capsys, "check", "--zoo", "werner", "--param", "p=0.1", "--mask", "11")[0] == 2
    assert run(capsys, "check", "--zoo", "werner", "--param", "p=0.1", "--d", "3")[0] == 2
    assert run(capsys, "check", "--zoo", "ghz", "--d", "5", "--n", "2")[0] == 2
    assert run(capsys, "check", "--zoo", "ghz", "--d", "2", "--n", "9")[0] == 2
    assert run(capsys, "check", "--zoo", "werner", "--param", "p=0.1", "--format", "csv")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--file", "/nonexistent.json")[0] == 2


def test_exit_code_independent_of_format(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["check", "--zoo", "ghz", "--out", str(out)]) == 1
    assert json.loads(out.read_text())["result"]["fully_ppt"] is False


def test_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "--zoo", "ghz_isotropic", "--d", "3", "--n", "2")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["estimate"] == pytest.approx(1 / 4, abs=1e-7)
    assert res["bracket"][1] - res["bracket"][0] <= 1e-8
    assert res["error"] < 1e-7


def test_threshold_no_sign_change(capsys):
    code, _, err = run(capsys, "threshold", "--zoo", "werner", "--bracket", "0", "0.2")
    assert code == 2 and "no sign change" in err


def test_threshold_needs_parameter(capsys):
    assert run(capsys, "threshold", "--zoo", "ghz")[0] == 2


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--zoo", "two_param", "--n", "3",
                       "--grid", "c=-0.125:0.125:3", "--grid", "d=0:0:1", "--format", "csv")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines[0] == "c,d,fully_ppt,min_eigenvalue,error"
    assert len(lines) == 4
    assert any(l.startswith("# version") for l in out.splitlines())


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--zoo", "werner", "--grid", "p=0,0.5")
    pts = json.loads(out)["result"]["points"]
    assert code == 0 and [p["fully_ppt"] for p in pts] == [True, False]


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--d", "2", "--n", "4", "--count", "10", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and doc["header"]["seed"] == 7 and doc["result"]["max_deviation"] <= 1e-12
    code, out, _ = run(capsys, "oracle", "--d", "3", "--n", "3", "--count", "4", "--scheme", "all")
    assert code == 0 and len(json.loads(out)["result"]["suites"]) == 4


def test_oracle_refuses_large(capsys):
    code, _, err = run(capsys, "oracle", "--d", "5", "--n", "4")
    assert code == 2 and "limits" in err


def test_export_round_trip(tmp_path, capsys):
    path = tmp_path / "w.json"
    assert main(["export", "--zoo", "werner", "--param", "p=0.25", "--out", str(path)]) == 0
    code, out, _ = run(capsys, "check", "--file", str(path))
    assert code == 0
    assert main(["export", "--zoo", "bogus"]) == 2
    code, out, _ = run(capsys, "export", "--zoo", "bell", "--d", "3", "--n", "3", "--param", "nu=21")
    doc = json.loads(out)
    assert doc["params"]["nu"] == [2, 1]
    assert abs(doc["blocks"]["21"][0][0] - 1 / 3) < 1e-15
