import json
import os
import subprocess
import sys

import numpy as np
import pytest

from paretogof.cli import main, read_observations, UsageError
from paretogof.distributions import ShiftedWeibull, pareto_rvs


def run_cli(*args, env=None):
    full_env = dict(os.environ, PARETO_GOF_REPS="2000")
    full_env.pop("SOURCE_DATE_EPOCH", None)
    full_env.update(env or {})
    return subprocess.run(
        [sys.executable, "-m", "paretogof", *args],
        capture_output=True,
        text=True,
        env=full_env,
    )


@pytest.fixture
def write_data(tmp_path):
    def _write(values, name="data.txt", header="# observations\n"):
        p = tmp_path / name
        p.write_text(header + "\n".join(str(v) for v in values) + "\n")
        return str(p)

    return _write


def test_two_point_file_vn(write_data):
    r = run_cli("test", write_data([2, 8]), "--statistic", "vn")
    assert r.returncode == 0, r.stderr
    assert "V_n = 0.500000" in r.stdout
    assert "decision: retain" in r.stdout


def test_value_below_support(write_data):
    r = run_cli("test", write_data([2.0, 0.5, 3.0]))
    assert r.returncode == 1
    assert "[1, inf)" in r.stderr and ":3:" in r.stderr


def test_parse_error_names_line(write_data):
    r = run_cli("test", write_data(["2.0", "x1", "3.0"], header=""))
    assert r.returncode == 1
    assert ":2:" in r.stderr and "x1" in r.stderr


def test_bad_flag_is_an_error_not_a_rejection(write_data):
    r = run_cli("test", write_data([2, 3]), "--level", "1.5")
    assert r.returncode == 1
    r = run_cli("test", write_data([2, 3]), "--statistic", "zz")
    assert r.returncode == 1


def test_missing_file():
    r = run_cli("test", "/nonexistent/file.txt")
    assert r.returncode == 1 and "cannot read" in r.stderr


def test_weibull_data_rejected(write_data):
    x = ShiftedWeibull(2.0).rvs(50, np.random.default_rng(1))
    r = run_cli("test", write_data(x), "--alternative", "two-sided")
    assert r.returncode == 2, r.stdout + r.stderr
    assert "decision: reject" in r.stdout


def test_pareto_data_retained_json(write_data):
    x = pareto_rvs(2.0, 50, np.random.default_rng(2))
    r = run_cli("test", write_data(x), "--format", "json")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["decision"] == "retain" and doc["p_value"] > 0.05
    m = doc["manifest"]
    assert m["subcommand"] == "test" and m["seed"] == doc["seed"]
    assert m["flags"]["reps"] == 2000
    assert m["timestamp"] is None and m["version"]


def test_tie_warning_on_stderr(write_data):
    r = run_cli("test", write_data([2, 2, 3, 5]))
    assert r.returncode in (0, 2)
    assert r.stderr.count("tied") == 1


def test_source_date_epoch_sets_timestamp(write_data):
    r = run_cli("test", write_data([2, 8]), "--format", "json", env={"SOURCE_DATE_EPOCH": "0"})
    assert json.loads(r.stdout)["manifest"]["timestamp"] == "1970-01-01T00:00:00+00:00"


def test_critical_values_json_and_determinism(tmp_path):
    args = ["critical-values", "--statistic", "vn", "--n", "10", "20", "--format", "json", "--compare-paper"]
    a = run_cli(*args, "--threads", "1")
    b = run_cli(*args, "--threads", "3")
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert len(doc["rows"]) == 6 and len(doc["paper_comparison"]) == 6
    assert doc["manifest"]["flags"]["statistic"] == "vn"
    assert "threads" not in doc["manifest"]["flags"]


def test_critical_values_tsv_to_file(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PARETO_GOF_REPS", "1000")
    out = tmp_path / "cv.tsv"
    assert main(["critical-values", "--n", "10", "--format", "tsv", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest: ")
    assert lines[1] == "n\tlevel\tcritical_value\treps\tseed"
    assert len(lines) == 5


def test_env_reps_default(monkeypatch, capsys, write_data):
    monkeypatch.setenv("PARETO_GOF_REPS", "500")
    assert main(["test", write_data([2, 8]), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["reps"] == 500
    monkeypatch.setenv("PARETO_GOF_REPS", "many")
    assert main(["test", write_data([2, 8])]) == 1


def test_power_size_row(capsys, monkeypatch):
    monkeypatch.setenv("PARETO_GOF_REPS", "1000")
    assert main(["power", "--alternative", "pareto", "--n", "20", "--format", "tsv"]) == 0
    rows = [l.split("\t") for l in capsys.readouterr().out.splitlines()[2:]]
    assert len(rows) == 4
    assert all(0.0 <= float(r[3]) <= 0.12 for r in rows)


def test_power_compare_paper(capsys, monkeypatch):
    monkeypatch.setenv("PARETO_GOF_REPS", "500")
    assert main(["power", "--alternative", "weibull", "--n", "20", "--compare-paper"]) == 0
    out = capsys.readouterr().out
    assert "test\talternative\tn\tsimulated\tprinted\tdelta\tse" in out


def test_verify_quick(capsys):
    assert main(["verify", "--profile", "quick"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "checks passed" in out


def test_read_observations_skips_comments(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("# header\n\n1.5  # first\n2e0\n")
    assert read_observations(str(p)) == [1.5, 2.0]
    p.write_text("2.0\n")
    with pytest.raises(UsageError):
        read_observations(str(p))
