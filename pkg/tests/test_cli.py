import json
import subprocess
import sys

import pytest

from gvlp.cli import COMMANDS, build_parser, main
from gvlp.harness import ExperimentConfig

SMALL = [{"kind": "hermite", "nu": [1]}, {"kind": "bump", "center": [0.0], "width": 1.0}]


def write_config(tmp_path, **kw):
    path = tmp_path / "cfg.json"
    path.write_text(ExperimentConfig(**kw).to_json())
    return str(path)


def test_subcommands_present():
    assert {"check-exponent", "norms", "semigroup", "covering", "verify-all"} <= set(COMMANDS)
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])


def test_check_exponent_passes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["check-exponent", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == "gvlp-report/1" and rep["command"] == "check-exponent"
    assert "PASS" in capsys.readouterr().out


def test_oscillating_exponent_exits_nonzero(tmp_path):
    cfg = write_config(tmp_path, exponent={"name": "oscillating", "params": {"p0": 3.0, "a": 0.5}})
    out = tmp_path / "r.json"
    assert main(["check-exponent", "--config", cfg, "--out", str(out), "--quiet"]) == 1
    assert "hypotheses unverified" in json.loads(out.read_text())["flags"]


def test_same_config_gives_identical_bytes(tmp_path):
    cfg = write_config(tmp_path, suite=SMALL)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["boundedness", "--config", cfg, "--out", str(a), "--quiet"])
    main(["boundedness", "--config", cfg, "--out", str(b), "--quiet"])
    assert a.read_bytes() == b.read_bytes()


def test_csv_format(tmp_path):
    cfg = write_config(tmp_path, suite=SMALL)
    out = tmp_path / "r.csv"
    main(["boundedness", "--config", cfg, "--out", str(out), "--format", "csv", "--quiet"])
    lines = out.read_text().splitlines()
    assert lines[0] == "function_id,operator,param,ratio,verdict"
    assert len(lines) > 1


def test_seed_override_changes_provenance(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["check-exponent", "--out", str(a), "--quiet", "--seed", "1"])
    main(["check-exponent", "--out", str(b), "--quiet", "--seed", "2"])
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert (ra["seed"], rb["seed"]) == (1, 2) and ra["config_hash"] != rb["config_hash"]
    with pytest.raises(SystemExit):
        main(["check-exponent", "--seed", str(2**64), "--out", str(a)])


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    res = subprocess.run([sys.executable, "-m", "gvlp.cli", "covering", "--out", str(out), "--quiet"],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert json.loads(out.read_text())["command"] == "covering"
