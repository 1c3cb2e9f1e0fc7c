import json
import subprocess
import sys

import pytest

from pqt.cli import load_config, main, parse_depths


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_depths():
    assert parse_depths("0,2") == (0, 2)
    assert parse_depths("0-3") == (0, 1, 2, 3)
    assert parse_depths("1, 4-5") == (1, 4, 5)


def test_run_perfect_channel_depth_zero(capsys):
    code, out, _ = run_cli(capsys, "run", "--a", "1", "--b", "0", "--depth", "0",
                           "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["total_success"] == pytest.approx(0.5, abs=1e-12)


def test_run_depth_two_has_sixteen_third_attempt_outcomes(capsys):
    code, out, _ = run_cli(capsys, "run", "--chi", "0.4", "--depth", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["pair_outcomes_per_attempt"] == [4, 8, 16]


def test_run_text_report(capsys):
    code, out, _ = run_cli(capsys, "run", "--a", "0.6", "--b", "0.8j", "--c", "0.5",
                           "--depth", "1")
    assert code == 0
    assert "success after attempt 2" in out
    assert "path" in out and "fidelity" in out


def test_sample_json_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "one.json", tmp_path / "two.json"]
    for p in paths:
        code = main(["run", "--mode", "sample", "--trials", "2000", "--seed", "11",
                     "--depth", "1", "--format", "json", "--out", str(p)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert json.loads(paths[0].read_text())["sample"]["seed"] == 11


def test_invalid_inputs_exit_two(capsys, monkeypatch):
    assert run_cli(capsys, "run", "--a", "1", "--b", "1")[0] == 2
    assert run_cli(capsys, "run", "--chi", "2")[0] == 2
    assert run_cli(capsys, "sweep", "--c-min", "0.9", "--c-max", "0.1")[0] == 2
    assert run_cli(capsys, "sweep", "--depths", "20", "--points", "2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--strategy", "sometimes"])
    assert exc.value.code == 2
    monkeypatch.setenv("PQT_MAX_QUBITS", "2")
    code, _, err = run_cli(capsys, "run")
    assert code == 2 and "capacity" in err


def test_sweep_to_file(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, stdout, _ = run_cli(capsys, "sweep", "--points", "3", "--depths", "0,1",
                              "--jobs", "1", "--out", str(out))
    assert code == 0 and stdout == ""
    lines = out.read_bytes().split(b"\n")
    assert lines[0] == b"c,chi,depth,strategy,p_analytic,p_enum,maf,delta"
    assert len(lines) == 1 + 3 * 2 + 1


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "pqt.conf"
    cfg.write_text("# sweep settings\npoints = 4\ndepths = [0, 1]\nformat = \"json\"\n"
                   "strategy = plain-vnm\n")
    assert load_config(cfg)["depths"] == "0,1"
    code, out, _ = run_cli(capsys, "maf", "--config", str(cfg), "--jobs", "1")
    data = json.loads(out)
    assert code == 0 and len(data) == 4 * 2
    assert {d["strategy"] for d in data} == {"plain-vnm"}
    code, out, _ = run_cli(capsys, "maf", "--config", str(cfg), "--points", "2",
                           "--format", "csv", "--jobs", "1")
    assert code == 0 and len(out.strip().split("\n")) == 1 + 2 * 2


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("wibble = 3\n")
    assert run_cli(capsys, "sweep", "--config", str(cfg))[0] == 2
    assert run_cli(capsys, "sweep", "--config", str(tmp_path / "missing"))[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pqt", "run", "--depth", "0", "--format", "csv"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("path,attempts,probability")


def test_verify_exit_codes(monkeypatch, capsys):
    from pqt import verification
    from pqt.verification import SuiteResult

    passing = [lambda: SuiteResult("quick", True, "ok")]
    monkeypatch.setattr(verification, "SUITES", tuple(passing))
    code, out, _ = run_cli(capsys, "verify")
    assert code == 0 and "[PASS] quick" in out
    monkeypatch.setattr(verification, "SUITES",
                        tuple(passing + [lambda: SuiteResult("broken", False, "no")]))
    code, out, _ = run_cli(capsys, "verify")
    assert code == 1 and "[FAIL] broken" in out and "1/2 suites passed" in out
