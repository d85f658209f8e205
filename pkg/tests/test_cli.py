from __future__ import annotations

import json
import subprocess
import sys

import pytest

from smoothiso import cli
from smoothiso.core import builtin_function, simulate_regression


@pytest.fixture()
def sample_csv(tmp_path):
    path = tmp_path / "sample.csv"
    simulate_regression(builtin_function("lambda_a", {"a": 0.0}), 100, 0.1, 1).to_csv(path)
    return path


def run(capsys, *argv):
    code = cli.run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_load_config(tmp_path):
    assert cli.load_config(None) == cli.defaults()
    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    assert cli.load_config(str(empty)) == cli.defaults()
    f = tmp_path / "b.json"
    f.write_text('{"b": 0.1}')
    cfg = cli.load_config(str(f))
    assert cfg["b"] == 0.1
    assert cli.bandwidth_rule(cfg, None)(1000) == 0.1
    f.write_text('{"bandwith": 0.1}')
    with pytest.raises(cli.ConfigError, match="bandwith"):
        cli.load_config(str(f))
    f.write_text('{"M": "ten"}')
    with pytest.raises(cli.ConfigError, match="'M'"):
        cli.load_config(str(f))
    f.write_text("[1, 2]")
    with pytest.raises(cli.ConfigError):
        cli.load_config(str(f))
    f.write_text("{not json")
    with pytest.raises(cli.ConfigError):
        cli.load_config(str(f))
    f.write_text('{"kernel": "gaussian"}')
    with pytest.raises(cli.ConfigError, match="kernel"):
        cli.load_config(str(f))


def test_exit_codes(capsys, tmp_path, sample_csv):
    assert run(capsys, "bogus")[0] == cli.EXIT_USAGE
    assert run(capsys, "constants", "--p", "two")[0] == cli.EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text('{"bandwith": 0.1}')
    code, _, err = run(capsys, "constants", "--config", bad, "--seed", 1)
    assert code == cli.EXIT_CONFIG and "bandwith" in err
    code, _, err = run(capsys, "estimate", "--seed", 1)
    assert code == cli.EXIT_CONFIG and "--in" in err
    code, _, err = run(capsys, "estimate", "--in", tmp_path / "missing.csv", "--seed", 1)
    assert code == cli.EXIT_RUNTIME
    code, _, _ = run(capsys, "chernoff", "--c", 1, "--step", 0.01, "--M", 2, "--seed", 1)
    assert code == cli.EXIT_RUNTIME


def test_estimate_csv(capsys, tmp_path, sample_csv):
    out = tmp_path / "est.csv"
    code, _, _ = run(capsys, "estimate", "--in", sample_csv, "--method", "sg", "--b", 0.1, "--grid", 513,
                     "--out", out, "--seed", 0)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,value" and len(lines) == 514
    code, text, _ = run(capsys, "estimate", "--in", sample_csv, "--method", "kernel", "--b", 0.2, "--grid", 11,
                        "--seed", 0)
    assert text.splitlines()[1].startswith("0.2,")


def test_constants(capsys, caplog):
    caplog.set_level("INFO", logger="smoothiso")
    code, text, err = run(capsys, "constants", "--scenario", "linear-regression", "--p", 2, "--seed", 3)
    assert code == 0
    d = json.loads(text)
    for key in ("sigma1", "Dsq", "m_n", "m_c", "m_limit", "sigma2", "theta2", "theta1", "theta_tilde2", "alpha0"):
        assert key in d
    assert d["Dsq"] == pytest.approx(350 / 429)
    assert "seed 3" in caplog.text and '"scenario": "linear-regression"' in caplog.text


def test_generated_seed_is_printed(capsys):
    code, _, err = run(capsys, "chernoff", "--M", 2, "--c", 1, "--step", 1e-3)
    assert code == 0
    assert any(line.startswith("seed: ") for line in err.splitlines())


def test_errors_command(capsys, sample_csv):
    code, text, _ = run(capsys, "errors", "--in", sample_csv, "--scenario", "lambda_a-regression", "--a", 0,
                        "--method", "kernel_corrected", "--b", 0.1, "--seed", 0)
    assert code == 0
    d = json.loads(text)
    assert d["lp_error"] > 0 and d["hellinger"] is None


def test_test_command_exit_codes(capsys, tmp_path, sample_csv):
    code, text, _ = run(capsys, "test", "--in", sample_csv, "--B", 50, "--seed", 2)
    assert code == 0 and json.loads(text)["reject"] is False
    bumpy = tmp_path / "bumpy.csv"
    simulate_regression(builtin_function("lambda_a", {"a": 0.45}), 100, 0.025, 1).to_csv(bumpy)
    code, text, _ = run(capsys, "test", "--in", bumpy, "--B", 50, "--seed", 2, "--p", 1)
    assert code == cli.EXIT_REJECT and json.loads(text)["reject"] is True


def test_power_row(capsys):
    code, text, _ = run(capsys, "power", "--fn", "lambda_a", "--a", 0, "--sigma", 0.1, "--n", 50, "--N", 3,
                        "--B", 20, "--alpha", 0.1, "--seed", 7)
    assert code == 0
    lines = text.splitlines()
    assert len(lines) == 2 and lines[1].startswith("lambda_a,a=0.0,50,0.1,0.1,0.1,3,20,2,7,")


@pytest.mark.parametrize("argv", [
    ["chernoff", "--M", 6, "--c", 2, "--step", 1e-3],
    ["clt", "--n", 300, "--M", 4, "--estimator", "sg"],
    ["boundary", "--n-ladder", 200, 400, "--M", 3],
    ["sgdist", "--scenario", "quadratic-regression", "--n", 300, "--M", 3, "--c", 2, "--step", 1e-3],
    ["power", "--n", 40, "--N", 3, "--B", 20, "--alpha", 0.1],
])
def test_workers_do_not_change_output(capsys, tmp_path, argv):
    outs = []
    for w in (1, 3):
        path = tmp_path / f"out{w}"
        assert run(capsys, *argv, "--seed", 13, "--workers", w, "--out", path)[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_flags_override_config(capsys, tmp_path):
    f = tmp_path / "c.json"
    f.write_text('{"M": 5, "c": 1.0, "step": 0.001, "seed": 4}')
    code, text, _ = run(capsys, "chernoff", "--config", f, "--M", 3)
    d = json.loads(text)
    assert d["M"] == 3 and d["c"] == 1.0 and d["seed"] == 4


def test_env_workers(monkeypatch):
    from smoothiso._parallel import WORKERS_ENV, default_workers

    monkeypatch.setenv(WORKERS_ENV, "3")
    assert default_workers() == 3
    args = cli.build_parser().parse_args(["chernoff", "--seed", "1"])
    assert cli.resolve(args)["workers"] == 3
    args = cli.build_parser().parse_args(["chernoff", "--seed", "1", "--workers", "2"])
    assert cli.resolve(args)["workers"] == 2


def test_console_script_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "smoothiso.cli", "chernoff", "--M", "2", "--c", "1",
                           "--step", "0.001", "--seed", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["M"] == 2
