import subprocess
import sys

import numpy as np
import pytest

from sleraman import cli
from sleraman.errors import NoConvergence, NonFiniteResult


def run(*argv):
    return cli.main(list(argv))


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def test_missing_scenario_exits_one_with_usage(capsys):
    with pytest.raises(SystemExit) as info:
        run("fsrs", "--out", "x.csv")
    assert info.value.code == 1
    assert "usage:" in capsys.readouterr().err


def test_no_command_exits_one():
    with pytest.raises(SystemExit) as info:
        run()
    assert info.value.code == 1


def test_unknown_preset_exits_one(tmp_path, capsys):
    assert run("fsrs", "--scenario", "regime-IX", "--out", str(tmp_path / "a.csv")) == 1
    assert "regime-IX" in capsys.readouterr().err


def test_bad_delays_exit_one(tmp_path, capsys):
    assert run("fsrs", "--scenario", "regime-I", "--delays", "2fs,3xs",
               "--out", str(tmp_path / "a.csv")) == 1
    assert "column 5" in capsys.readouterr().err


def test_malformed_scenario_file_exits_one(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"bath": ')
    assert run("tasp", "--scenario", str(p), "--delays", "0", "--out", str(tmp_path / "a.csv")) == 1


def test_fsrs_writes_csv(tmp_path):
    out = tmp_path / "a.csv"
    assert run("fsrs", "--scenario", "regime-I", "--delays", "2fs,1ps", "--out", str(out)) == 0
    header, rows = read_csv(out)
    assert header == ["raman_shift_cm", "delay_fs", "intensity", "path"]
    assert len(rows) == 2 * 1201
    assert {r[1] for r in rows} == {"2", "1000"}


def test_fsrs_static_limit_column(tmp_path):
    out = tmp_path / "a.csv"
    assert run("fsrs", "--scenario", "regime-I", "--delays", "5ps", "--static-limit",
               "--out", str(out)) == 0
    header, rows = read_csv(out)
    assert header[-1] == "static_intensity"
    assert all(float(r[4]) >= 0 for r in rows)


def test_fsrs_path_flag(tmp_path):
    out = tmp_path / "a.csv"
    assert run("fsrs", "--scenario", "regime-II", "--delays", "1ps", "--path", "quadrature",
               "--out", str(out)) == 0
    _, rows = read_csv(out)
    assert {r[3] for r in rows} == {"quadrature"}


def test_fsrs_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ("fsrs", "--scenario", "regime-I", "--delays", "2fs,500fs:2ps:500fs")
    assert run(*args, "--out", str(a), "--threads", "1") == 0
    assert run(*args, "--out", str(b), "--threads", "3") == 0
    assert a.read_bytes() == b.read_bytes()


def test_tasp_zero_delay_is_finite(tmp_path):
    out = tmp_path / "t.csv"
    assert run("tasp", "--scenario", "regime-I", "--delays", "0", "--out", str(out)) == 0
    _, rows = read_csv(out)
    values = np.array([float(r[2]) for r in rows])
    assert values.size == 1201 and np.all(np.isfinite(values))


def test_populations_rows_sum_to_one(tmp_path):
    out = tmp_path / "p.csv"
    assert run("populations", "--scenario", "regime-I", "--times", "0:20ps:100fs",
               "--out", str(out)) == 0
    header, rows = read_csv(out)
    assert header == ["time_fs"] + [f"p{i}" for i in range(1, 11)]
    data = np.array(rows, dtype=float)
    assert data.shape == (201, 11)
    np.testing.assert_allclose(data[:, 1:].sum(axis=1), 1.0, atol=1e-8)
    assert data[0, 1] == 1.0


def test_stdout_sink(capfdbinary):
    assert run("populations", "--scenario", "regime-II", "--times", "0,1ps", "--out", "-") == 0
    out = capfdbinary.readouterr().out
    assert out.startswith(b"time_fs,p1,") and out.count(b"\n") == 3


def test_numeric_failure_exits_two(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise NonFiniteResult("bad", shift_cm=1234.0, delay=2e-15)

    monkeypatch.setattr(cli, "fsrs_spectra", boom)
    assert run("fsrs", "--scenario", "regime-I", "--delays", "2fs", "--out", str(tmp_path / "a.csv")) == 2
    err = capsys.readouterr().err
    assert "1234" in err and "2 fs" in err

    def stuck(*a, **k):
        raise NoConvergence("no")

    monkeypatch.setattr(cli, "fsrs_spectra", stuck)
    assert run("fsrs", "--scenario", "regime-I", "--delays", "2fs", "--out", str(tmp_path / "a.csv")) == 2


def test_validate_quick(capsys):
    assert run("validate", "--quick") == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") == 6


def test_validate_reports_failure(monkeypatch, capsys):
    import sleraman.validation as validation

    monkeypatch.setattr(validation, "run_all", lambda quick: [("broken", 1.0, 1e-6)])
    assert run("validate") == 2
    assert "FAIL" in capsys.readouterr().out


def test_console_entry_point(tmp_path):
    out = tmp_path / "a.csv"
    proc = subprocess.run([sys.executable, "-m", "sleraman.cli", "tasp", "--scenario", "regime-II",
                           "--delays", "0", "--out", str(out)], capture_output=True)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "sleraman.cli", "fsrs"], capture_output=True)
    assert proc.returncode == 1
