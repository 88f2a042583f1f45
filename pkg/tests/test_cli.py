import json
import subprocess
import sys

import numpy as np
import pytest

from gaussdyn import serialization
from gaussdyn.channels import GaussianChannel
from gaussdyn.cli import run_cli
from gaussdyn.dynamics import DriftDiffusion
from gaussdyn.states import GaussianState


def write(path, text):
    path.write_text(text)
    return str(path)


def error_of(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_steady_state_unmonitored_opo(capsys):
    assert run_cli(["steady-state", "--preset", "opo"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert np.allclose(out["cov"], np.diag([2 / 3, 2.0]), atol=1e-10)
    assert all(c["ok"] for c in out["certification"])
    assert np.allclose(out["reference"]["unconditional"], out["cov"], atol=1e-10)


def test_steady_state_monitored_from_config(tmp_path, capsys):
    cfg = write(tmp_path / "c.toml", '[measurement]\ntype = "homodyne_p"\ns = 1e-14\n')
    assert run_cli(["steady-state", "--config", cfg, "--out", str(tmp_path / "ss.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["monitored"] and np.allclose(out["cov"], np.diag([0.5, 2.0]), atol=1e-10)
    assert json.loads((tmp_path / "ss.json").read_text())["cov"] == out["cov"]


def test_steady_state_unstable_scattering(capsys):
    assert run_cli(["steady-state", "--preset", "scattering"]) == 3
    assert error_of(capsys)["error"] == "unstable"


def test_simulate_is_deterministic(tmp_path, capsys):
    cfg = write(tmp_path / "c.toml", '[measurement]\ntype = "heterodyne"\n[run]\nduration = 0.5\ndt = 0.01\n')
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run_cli(["simulate", "--config", cfg, "--seed", "5", "--trajectories", "3", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.cov.csv").read_bytes() == (tmp_path / "b.cov.csv").read_bytes()
    c = tmp_path / "c.csv"
    assert run_cli(["simulate", "--config", cfg, "--seed", "6", "--trajectories", "3", "--out", str(c)]) == 0
    assert a.read_bytes() != c.read_bytes()
    assert len(serialization.read_trajectories(a)) == 3
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["count"] == 3


def test_output_directory_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("GAUSSDYN_OUTPUT_DIR", str(tmp_path / "runs"))
    assert run_cli(["simulate", "--duration", "0.05", "--dt", "0.01", "--out", "x.csv"]) == 0
    assert (tmp_path / "runs" / "x.csv").exists()
    assert (tmp_path / "runs" / "x.cov.csv").exists()


def test_validate_state(tmp_path, capsys):
    good = write(tmp_path / "g.json", serialization.dumps(GaussianState(np.zeros(2), np.eye(2))))
    assert run_cli(["validate", good]) == 0
    bad = write(tmp_path / "b.json", serialization.dumps(GaussianState(np.zeros(2), 0.5 * np.eye(2))))
    capsys.readouterr()
    assert run_cli(["validate", bad]) == 3
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert report["ok"] is False and "uncertainty" in report["constraint"]
    assert "uncertainty" in json.loads(captured.err)["error"]


def test_validate_channel_and_diffusion(tmp_path, capsys):
    ch = write(tmp_path / "ch.json", serialization.dumps(GaussianChannel(2 * np.eye(2), 0.1 * np.eye(2))))
    assert run_cli(["validate", ch]) == 3
    dd = write(tmp_path / "dd.json", serialization.dumps(DriftDiffusion(-0.5 * np.eye(2), np.eye(2))))
    assert run_cli(["validate", dd]) == 0
    bad = write(tmp_path / "bad.json", serialization.dumps(DriftDiffusion(-0.5 * np.eye(2), 0.1 * np.eye(2))))
    assert run_cli(["validate", bad]) == 3


def test_dilate_and_validate_result(tmp_path, capsys):
    ch = write(tmp_path / "loss.json", serialization.dumps(GaussianChannel.loss(0.4)))
    out = tmp_path / "dil.json"
    assert run_cli(["dilate", ch, "--out", str(out)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["symplectic_residual"] < 1e-10
    assert run_cli(["validate", str(out)]) == 0
    state = write(tmp_path / "s.json", serialization.dumps(GaussianState(np.zeros(2), np.eye(2))))
    assert run_cli(["dilate", state]) == 2


@pytest.mark.parametrize(
    "argv_tail, text",
    [
        (["--config"], '[run\nseed = 1\n'),
        (["--config"], '[run]\nseed = "one"\n'),
        (["--trajectories", "0", "--config"], ""),
    ],
)
def test_bad_configuration_exits_2(tmp_path, capsys, argv_tail, text):
    cfg = write(tmp_path / "c.toml", text)
    assert run_cli(["simulate"] + argv_tail + [cfg]) == 2
    assert error_of(capsys)["error"] == "config"


def test_missing_files_and_bad_usage(tmp_path, capsys):
    assert run_cli(["validate", str(tmp_path / "none.json")]) == 2
    assert run_cli(["steady-state", "--config", str(tmp_path / "none.toml")]) == 2
    assert run_cli(["frobnicate"]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gaussdyn", "steady-state", "--preset", "opo"],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert proc.returncode == 0
    assert np.allclose(json.loads(proc.stdout)["cov"], np.diag([2 / 3, 2.0]), atol=1e-10)
