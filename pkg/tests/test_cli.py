import json
import math

import numpy as np
import pytest

from hexsum.cli import (
    ConfigError,
    ExperimentConfig,
    _build_parser,
    _csv_text,
    _fit_slope,
    _format_cell,
    _json_safe,
    build_config,
    main,
    rho_ladder,
    validate_config,
)
from hexsum.families import random_spectrum
from hexsum.fourier import save_spectral


def _cfg(argv):
    return build_config(_build_parser().parse_args(argv))


def _write_input(tmp_path, degree=3, seed=0, name="f.json"):
    f = random_spectrum(degree, np.random.default_rng(seed))
    path = tmp_path / name
    save_spectral(f, path)
    return str(path)


# ------------------------------------------------------------- configuration


def test_config_defaults():
    cfg = _cfg(["bernstein"])
    assert cfg == ExperimentConfig(command="bernstein")
    assert cfg.k_min == 1 and cfg.k_max == 7 and cfg.p == 2.0
    assert cfg.grid_n == "auto" and cfg.fmt == "csv" and cfg.seed == 0


def test_config_file_then_flags_precedence(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"rho-kmax": 3, "r": 2, "seed": 9}))
    cfg = _cfg(["bernstein", "--config", str(conf), "--r", "4"])
    assert cfg.k_max == 3      # from file
    assert cfg.seed == 9       # from file
    assert cfg.r == 4          # flag overrides file


def test_config_file_unknown_key(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"rho_kmax": 3}))
    with pytest.raises(ConfigError, match="unknown keys"):
        _cfg(["bernstein", "--config", str(conf)])


def test_config_file_not_object(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="JSON object"):
        _cfg(["bernstein", "--config", str(conf)])


def test_config_file_missing():
    with pytest.raises(ConfigError, match="cannot read"):
        _cfg(["bernstein", "--config", "/nonexistent/conf.json"])


def test_p_coercion():
    assert _cfg(["approximate", "--p", "inf", "--grid", "32"]).p == math.inf
    assert _cfg(["approximate", "--p", "1.5", "--grid", "32"]).p == 1.5
    with pytest.raises(ConfigError):
        _cfg(["approximate", "--p", "0.5"])
    with pytest.raises(ConfigError):
        _cfg(["approximate", "--p", "two"])


def test_grid_coercion():
    assert _cfg(["approximate", "--grid", "auto"]).grid_n == "auto"
    assert _cfg(["approximate", "--grid", "48"]).grid_n == 48
    with pytest.raises(ConfigError):
        _cfg(["approximate", "--grid", "3"])
    with pytest.raises(ConfigError):
        _cfg(["approximate", "--grid", "big"])


def test_validate_config_rules():
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("bernstein", k_min=5, k_max=2))
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("bernstein", k_min=-1, k_max=2))
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("bernstein", r=99))
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("approximate", r=0))
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("kfun", n=0))
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("kfun", k_min=0))
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("rates", p=3.0))
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig("bernstein", fmt="xml"))


def test_rho_ladder_values():
    cfg = ExperimentConfig("bernstein", k_min=1, k_max=3)
    assert rho_ladder(cfg) == [(1, 0.5), (2, 0.75), (3, 0.875)]


# ------------------------------------------------------------------ formatting


def test_format_cell():
    assert _format_cell(None) == ""
    assert _format_cell(True) == "true"
    assert _format_cell(False) == "false"
    assert _format_cell(7) == "7"
    assert _format_cell(0.1) == "0.10000000000000001"
    assert _format_cell("plain") == "plain"
    assert _format_cell("a,b") == '"a,b"'
    assert _format_cell('say "hi"') == '"say ""hi"""'


def test_csv_text_union_header():
    rows = [{"a": 1, "b": 2.5}, {"a": 3, "c": "x"}]
    text = _csv_text(rows)
    lines = text.splitlines()
    assert lines[0] == "a,b,c"
    assert lines[1] == "1,2.5,"
    assert lines[2] == "3,,x"
    assert text.endswith("\n")


def test_json_safe_nonfinite():
    assert _json_safe(math.nan) == "nan"
    assert _json_safe(math.inf) == "inf"
    assert _json_safe(1.5) == 1.5
    assert _json_safe(np.int64(3)) == 3


def test_fit_slope_exact_power():
    ks = [1, 2, 3, 4, 5]
    devs = [2.0 ** (-2 * k) for k in ks]
    slope, stderr = _fit_slope(ks, devs)
    assert slope == pytest.approx(2.0, abs=1e-12)
    assert stderr == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------- end to end


def test_main_rates_with_input(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path, degree=4)
    rc = main(["rates", "--input", inp, "--rho-kmax", "5", "--r", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS" in out and "FAIL" not in out
    report = tmp_path / "rates_report.csv"
    assert report.exists()
    lines = report.read_text().splitlines()
    assert lines[0].startswith("row_type,family,k,rho,r,deviation")
    # 5 point rows + 1 summary row
    assert len(lines) == 7
    assert "summary" in lines[-1] and ",ok" in lines[-1]


def test_main_rates_exact_zero(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path, degree=1)
    rc = main(["rates", "--input", inp, "--r", "2", "--rho-kmax", "4"])
    assert rc == 0
    text = (tmp_path / "rates_report.csv").read_text()
    assert "exact-zero" in text


def test_main_rates_needs_four_points(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path)
    rc = main(["rates", "--input", inp, "--rho-kmin", "2", "--rho-kmax", "4"])
    assert rc == 2
    assert "at least 4 ladder points" in capsys.readouterr().err


def test_main_rejects_bad_input_file(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    doc = {
        "max_degree": 2,
        "entries": [{"k": [1, 1, 0], "re": 1.0, "im": 0.0}],
    }
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    rc = main(["approximate", "--input", str(bad)])
    err = capsys.readouterr().err
    assert rc == 2
    assert "invalid spectral input" in err
    assert "(1, 1, 0)" in err


def test_main_argparse_error_is_exit_2():
    assert main(["frobnicate"]) == 2


def test_main_kfun_kmin_zero_rejected(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    rc = main(["kfun", "--rho-kmin", "0"])
    assert rc == 2
    assert "rho-kmin" in capsys.readouterr().err


def test_main_approximate_p_not_two_needs_grid(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path)
    rc = main(["approximate", "--input", inp, "--p", "4"])
    assert rc == 2
    assert "--grid" in capsys.readouterr().err


def test_main_approximate_spectral_and_grid_paths(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path, degree=3)
    rc = main(
        ["approximate", "--input", inp, "--rho-kmax", "4", "--out", "a.csv"]
    )
    assert rc == 0
    spectral = (tmp_path / "a.csv").read_text()
    assert ",0," in spectral.splitlines()[1]  # grid_n column is 0: exact path
    rc = main(
        [
            "approximate", "--input", inp, "--rho-kmax", "4",
            "--p", "inf", "--grid", "32", "--out", "b.csv",
        ]
    )
    assert rc == 0
    gridded = (tmp_path / "b.csv").read_text()
    assert "32" in gridded


def test_main_bernstein_single_point_json(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = main(
        [
            "bernstein", "--r", "1", "--rho-kmin", "1", "--rho-kmax", "1",
            "--format", "json",
        ]
    )
    assert rc == 0
    doc = json.loads((tmp_path / "bernstein_report.json").read_text())
    assert doc["command"] == "bernstein"
    assert doc["config"]["r"] == 1
    assert doc["config"]["grid_n"] == "auto"
    summary = doc["rows"][-1]
    assert summary["row_type"] == "summary"
    assert summary["ratio_last_two"] == "nan"  # JSON-safe encoding
    assert summary["status"] == "ok"


def test_main_bernstein_order_zero_ladder(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    rc = main(["bernstein", "--r", "0", "--rho-kmax", "2"])
    assert rc == 0
    assert "order-0" in capsys.readouterr().out
    lines = (tmp_path / "bernstein_report.csv").read_text().splitlines()
    assert len(lines) == 4  # header + 2 points + summary


def test_main_kernel_command(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    rc = main(["kernel", "--rho-kmin", "1", "--rho-kmax", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "kernel: 2/2 assertions passed" in out
    text = (tmp_path / "kernel_report.csv").read_text()
    assert "mean_abs_err" in text.splitlines()[0]


def test_main_kernel_coarse_grid_is_config_error(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    rc = main(["kernel", "--rho-kmax", "2", "--grid", "16"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_main_kfun_with_input(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path, degree=5)
    rc = main(["kfun", "--input", inp, "--rho-kmax", "4", "--n", "2"])
    assert rc == 0
    text = (tmp_path / "kfun_report.csv").read_text()
    assert "lower_proxy" in text.splitlines()[0]
    assert "violated" not in text


def test_main_verify_with_input_roundtrip(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path, degree=2)
    rc = main(["verify", "--input", inp])
    assert rc == 0
    text = (tmp_path / "verify_report.csv").read_text()
    assert "input.serialization_roundtrip" in text


def test_reports_are_byte_identical_across_reruns(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path, degree=4, seed=3)
    argv = ["rates", "--input", inp, "--out", "rep.csv", "--r", "2"]
    assert main(argv) == 0
    first = (tmp_path / "rep.csv").read_bytes()
    assert main(argv) == 0
    second = (tmp_path / "rep.csv").read_bytes()
    assert first == second
    assert b"\r" not in first


def test_default_report_name_uses_format(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path)
    assert main(["rates", "--input", inp, "--format", "json"]) == 0
    assert (tmp_path / "rates_report.json").exists()


def test_unwritable_report_is_exit_2(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    inp = _write_input(tmp_path)
    rc = main(["rates", "--input", inp, "--out", "no/such/dir/rep.csv"])
    assert rc == 2
    assert "cannot write report" in capsys.readouterr().err
