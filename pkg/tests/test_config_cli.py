import json

import pytest
from click.testing import CliRunner

from divap.cli import main
from divap.config import ExperimentConfig


def test_config_roundtrip():
    cfg = ExperimentConfig(seed=9, X_grid=[100.0, 200.0], theta_list=[0.4])
    text = cfg.to_json()
    cfg2 = ExperimentConfig.from_json(text)
    assert cfg2 == cfg


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(theta_list=[1.5]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(X_grid=[200.0, 100.0]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig.from_json('{"no_such_key": 1}')


def test_config_env_override():
    cfg = ExperimentConfig()
    cfg.apply_env({"DIVAP_SEED": "77", "DIVAP_X_GRID": "[10.0, 20.0]", "DIVAP_OUT_DIR": "zzz"})
    assert cfg.seed == 77
    assert cfg.X_grid == [10.0, 20.0]
    assert cfg.out_dir == "zzz"


@pytest.fixture()
def small_cfg(tmp_path):
    cfg = {
        "seed": 5,
        "X_grid": [3000.0, 10000.0],
        "theta_list": [0.5],
        "prime_range": [11, 23],
        "samples_A": 3,
        "p_max": 23,
        "out_dir": str(tmp_path / "out"),
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def test_cli_usage_error_on_corrupt_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    runner = CliRunner()
    res = runner.invoke(main, ["level-fit", "--config", str(bad)])
    assert res.exit_code == 2


def test_cli_resource_guard(tmp_path):
    cfg = tmp_path / "big.json"
    cfg.write_text(json.dumps({"X_grid": [1e9], "out_dir": str(tmp_path / "o")}))
    runner = CliRunner()
    res = runner.invoke(main, ["level-fit", "--config", str(cfg)])
    assert res.exit_code == 3


def test_cli_weil_scan(small_cfg, tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["weil-scan", "--config", str(small_cfg), "--pmax", "31"])
    assert res.exit_code == 0
    assert "PASS" in res.output
    csv = (tmp_path / "out" / "weil_scan.csv").read_text().splitlines()
    assert csv[0] == "p,worst_ratio,m,n"
    assert len(csv) == 1 + 11  # primes up to 31


def test_cli_level_fit_and_determinism(small_cfg, tmp_path):
    runner = CliRunner()
    res1 = runner.invoke(main, ["level-fit", "--config", str(small_cfg), "--out", str(tmp_path / "a"), "--threads", "1"])
    assert res1.exit_code == 0, res1.output
    res2 = runner.invoke(main, ["level-fit", "--config", str(small_cfg), "--out", str(tmp_path / "b"), "--threads", "2"])
    assert res2.exit_code == 0
    for name in ("level_fits.csv", "level_theta0.5.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    header = (tmp_path / "a" / "level_theta0.5.csv").read_text().splitlines()[0]
    assert header == "X,p,a,theta,delta,normalized,weight_tag"


def test_cli_bilinear_partial(small_cfg, tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["bilinear-partial", "--config", str(small_cfg)])
    assert res.exit_code == 0
    lines = (tmp_path / "out" / "bilinear_partial.csv").read_text().splitlines()
    assert lines[0] == "p,a,N1,N,abs_S,bound_ratio"
    assert len(lines) > 1


def test_cli_convexity(small_cfg, tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["convexity", "--config", str(small_cfg)])
    assert res.exit_code == 0
    lines = (tmp_path / "out" / "convexity.csv").read_text().splitlines()
    assert lines[0] == "p,sigma,t,A,abs_D2,convexity_ratio"


def test_cli_conjecture_probe(small_cfg, tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["conjecture-probe", "--config", str(small_cfg)])
    assert res.exit_code == 0, res.output
    rows = (tmp_path / "out" / "conjecture_probe.csv").read_text().splitlines()
    assert rows[0] == "q,A,t,abs_B0,abs_B1,tail_bound"
    # one row per (prime, sampled A): primes {11,13,17,19,23}, 3 samples each
    assert len(rows) == 1 + 5 * 3
    fits = (tmp_path / "out" / "conjecture_fits.csv").read_text().splitlines()
    assert fits[0] == "q,slope,stderr,r2"
    assert len(fits) >= 2
    primes = (tmp_path / "out" / "conjecture_primes.csv").read_text().splitlines()
    assert primes[0] == "q,max_absB,mean_absB"
    assert len(primes) == 1 + 5  # one row per prime
