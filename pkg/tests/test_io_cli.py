"""CSV ingestion, output formats, and the command line surface."""

import json
import re

import numpy as np
import pytest

from fracsmooth import build_basis, ols_fit
from fracsmooth.cli import main
from fracsmooth.io import input_digest, load_series, write_series_csv


@pytest.fixture
def data_csv(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("t,level,rate\n1,100.0,2.5\n2,110.0,2.0\n3,121.0,1.5\n4,133.1,1.0\n")
    return str(path)


def test_load_plain_column(data_csv):
    values = load_series(data_csv, column="rate")
    np.testing.assert_allclose(values, [2.5, 2.0, 1.5, 1.0])


def test_load_log_column(data_csv):
    values = load_series(data_csv, column="level", transform="log")
    np.testing.assert_allclose(values, np.log([100.0, 110.0, 121.0, 133.1]))


def test_load_log_ratio(data_csv):
    values = load_series(data_csv, transform="log_ratio", ratio=("level", "rate"))
    np.testing.assert_allclose(values, np.log(np.array([100, 110, 121, 133.1]) / [2.5, 2, 1.5, 1]))


def test_load_missing_column_lists_available(data_csv):
    with pytest.raises(ValueError, match="available columns: t, level, rate"):
        load_series(data_csv, column="gdp")


def test_load_missing_values_hard_error(tmp_path):
    path = tmp_path / "gappy.csv"
    path.write_text("y,x\n1.0,1\n,2\n3.0,3\n")
    with pytest.raises(ValueError, match="missing"):
        load_series(str(path), column="y")


def test_load_log_requires_positive(tmp_path):
    path = tmp_path / "neg.csv"
    path.write_text("y\n1.0\n-2.0\n3.0\n")
    with pytest.raises(ValueError, match="positive"):
        load_series(str(path), column="y", transform="log")


def test_series_csv_round_trip(tmp_path):
    values = np.random.default_rng(0).standard_normal(16)
    path = tmp_path / "series.csv"
    write_series_csv(values, str(path))
    back = load_series(str(path), column="y")
    np.testing.assert_array_equal(back, values)


def test_input_digest_changes_with_content(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("y\n1\n")
    b.write_text("y\n2\n")
    assert input_digest(str(a)) != input_digest(str(b))
    assert len(input_digest(str(a))) == 64


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_is_byte_deterministic(capsys):
    args = ["simulate", "--T", "8", "--delta", "0", "--seed", "1"]
    code1, out1, _ = run_cli(args, capsys)
    code2, out2, _ = run_cli(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.startswith("t,y\n")


def test_simulate_with_trend_recovers_coefficients(tmp_path, capsys):
    out = tmp_path / "sim.csv"
    code, _, _ = run_cli(
        ["simulate", "--T", "256", "--delta", "0", "--seed", "3", "--beta", "0,1",
         "--out", str(out)],
        capsys,
    )
    assert code == 0
    y = load_series(str(out), column="y")
    assert abs(y.mean()) < 0.25
    fit = ols_fit(y, 1)
    assert fit.beta_hat[1] == pytest.approx(1.0, abs=0.25)


def test_simulate_rejects_wide_delta_by_default(capsys):
    code, _, err = run_cli(["simulate", "--T", "8", "--delta", "0.6"], capsys)
    assert code == 2
    assert "delta" in err


def test_simulate_wide_delta_override(capsys):
    code, out, _ = run_cli(
        ["simulate", "--T", "8", "--delta", "0.6", "--method", "type2",
         "--allow-wide-delta"],
        capsys,
    )
    assert code == 0
    assert len(out.strip().splitlines()) == 9


def test_simulate_wide_delta_still_bounded(capsys):
    code, _, _ = run_cli(
        ["simulate", "--T", "8", "--delta", "1.0", "--method", "type2",
         "--allow-wide-delta"],
        capsys,
    )
    assert code == 2


def _write_trended_series(tmp_path, capsys, seed=11):
    path = tmp_path / f"fixture{seed}.csv"
    code, _, _ = run_cli(
        ["simulate", "--T", "260", "--delta", "0.3", "--method", "type2",
         "--seed", str(seed), "--beta", "0,1", "--out", str(path)],
        capsys,
    )
    assert code == 0
    return str(path)


def test_cmd_test_json_mirrors_human_output(tmp_path, capsys):
    path = _write_trended_series(tmp_path, capsys)
    json_path = tmp_path / "result.json"
    code, out, _ = run_cli(
        ["test", "--input", path, "--column", "y", "--alternative", "greater",
         "--json", str(json_path)],
        capsys,
    )
    assert code == 0
    payload = json.loads(json_path.read_text())
    human = {
        "t_stat": float(re.search(r"t statistic\s+(\S+)", out).group(1)),
        "lm_stat": float(re.search(r"LM statistic\s+(\S+)", out).group(1)),
        "p_value": float(re.search(r"p-value\s+(\S+)", out).group(1)),
        "m": int(re.search(r"bandwidth m\s+(\d+)", out).group(1)),
        "k_used": int(re.search(r"trend order k\s+(\d+)", out).group(1)),
    }
    for key, value in human.items():
        assert value == pytest.approx(payload[key], rel=1e-12)
    assert payload["T"] == 260
    assert payload["m"] == 37
    assert payload["input_digest"] == input_digest(path)


def test_cmd_test_smoke_semantics(tmp_path, capsys):
    # Trended long-memory fixtures should usually give positive t and a
    # selected order in 1..k*; exact values are seed dependent.
    positives = 0
    p_values = []
    for seed in range(5):
        path = _write_trended_series(tmp_path, capsys, seed=100 + seed)
        json_path = tmp_path / f"res{seed}.json"
        code, _, _ = run_cli(
            ["test", "--input", path, "--column", "y", "--alternative", "greater",
             "--json", str(json_path)],
            capsys,
        )
        assert code == 0
        payload = json.loads(json_path.read_text())
        assert 1 <= payload["k_used"] <= 10
        positives += payload["t_stat"] > 0
        p_values.append(payload["p_value"])
    assert positives >= 3
    assert np.median(p_values) < 0.5


def test_cmd_test_log_ratio_pipeline(tmp_path, capsys):
    rng = np.random.default_rng(17)
    num = np.exp(rng.standard_normal(64) * 0.1 + 5.0)
    den = np.exp(rng.standard_normal(64) * 0.1 + 4.0)
    path = tmp_path / "ratios.csv"
    lines = ["num,den"] + [f"{a:.17g},{b:.17g}" for a, b in zip(num, den)]
    path.write_text("\n".join(lines) + "\n")
    json_path = tmp_path / "ratio.json"
    code, _, _ = run_cli(
        ["test", "--input", str(path), "--log-ratio", "num", "den", "--k", "0",
         "--m", "8", "--json", str(json_path)],
        capsys,
    )
    assert code == 0
    payload = json.loads(json_path.read_text())
    from fracsmooth import TestConfig, test_with_detrend

    want = test_with_detrend(np.log(num / den), TestConfig(trend_order=0, m=8))
    assert payload["t_stat"] == pytest.approx(want.t_stat, rel=1e-12)


def test_cmd_test_log_and_log_ratio_conflict(tmp_path, capsys):
    path = _write_trended_series(tmp_path, capsys)
    code, _, err = run_cli(
        ["test", "--input", path, "--column", "y", "--log", "--log-ratio", "a", "b"],
        capsys,
    )
    assert code == 2
    assert "log" in err


def test_cmd_test_missing_column_exit_code(tmp_path, capsys):
    path = _write_trended_series(tmp_path, capsys)
    code, _, err = run_cli(["test", "--input", path, "--column", "oops"], capsys)
    assert code == 2
    assert "available columns" in err


def test_cmd_test_bandwidth_too_large(tmp_path, capsys):
    path = _write_trended_series(tmp_path, capsys)
    code, _, err = run_cli(["test", "--input", path, "--column", "y", "--m", "200"], capsys)
    assert code == 2
    assert "bandwidth" in err


def test_cmd_test_fixed_order_and_figure(tmp_path, capsys):
    path = _write_trended_series(tmp_path, capsys)
    figure = tmp_path / "trend.png"
    code, out, _ = run_cli(
        ["test", "--input", path, "--column", "y", "--k", "1", "--figure", str(figure)],
        capsys,
    )
    assert code == 0
    assert "(fixed)" in out
    assert figure.exists() and figure.stat().st_size > 0


def test_cmd_select_flags_exact_fit(tmp_path, capsys):
    T = 64
    values = build_basis(T, 1).columns[:, 1]
    path = tmp_path / "exact.csv"
    write_series_csv(values, str(path))
    json_path = tmp_path / "trace.json"
    code, out, _ = run_cli(
        ["select", "--input", str(path), "--column", "y", "--k-star", "4",
         "--json", str(json_path)],
        capsys,
    )
    assert code == 0
    assert "exact fit" in out
    payload = json.loads(json_path.read_text())
    assert payload["k_hat"] == 1
    assert 1 in payload["exact_fit_orders"]


def test_cmd_select_matches_library(tmp_path, capsys):
    from fracsmooth import select_order

    path = _write_trended_series(tmp_path, capsys)
    json_path = tmp_path / "trace.json"
    code, _, _ = run_cli(
        ["select", "--input", str(path), "--column", "y", "--json", str(json_path)], capsys
    )
    assert code == 0
    payload = json.loads(json_path.read_text())
    trace = select_order(load_series(path, column="y"), 10, "bic")
    assert payload["k_hat"] == trace.k_hat
    np.testing.assert_allclose(payload["ic_values"], trace.ic_values, rtol=1e-12)


def test_cmd_select_k_star_too_large(tmp_path, capsys):
    path = _write_trended_series(tmp_path, capsys)
    code, _, _ = run_cli(
        ["select", "--input", path, "--column", "y", "--k-star", "300"], capsys
    )
    assert code == 2


def test_cmd_size_outputs(tmp_path, capsys):
    code, out, _ = run_cli(
        ["size", "--T", "128", "--reps", "150", "--k", "1", "--seed", "2",
         "--out-dir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    assert "null rejection frequency" in out
    assert (tmp_path / "size_T128_seed2.csv").exists()
    manifest = json.loads((tmp_path / "size_T128_seed2_manifest.json").read_text())
    assert manifest["seed"] == 2
    assert manifest["config"]["T"] == 128


def test_cmd_power_custom_grid(tmp_path, capsys):
    code, out, _ = run_cli(
        ["power", "--T", "128", "--reps", "120", "--k", "1",
         "--delta-grid=-0.2,0,0.2", "--seed", "4", "--out-dir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    csv_path = tmp_path / "power_T128_seed4.csv"
    assert csv_path.exists()
    assert (tmp_path / "power_T128_seed4.png").exists()
    rows = np.loadtxt(csv_path, delimiter=",", skiprows=1)
    assert rows.shape == (3, 5)


def test_cmd_power_preset_desk_scale(tmp_path, capsys):
    code, _, _ = run_cli(
        ["power", "--figure", "s1", "--reps", "30", "--seed", "1",
         "--out-dir", str(tmp_path), "--no-plot"],
        capsys,
    )
    assert code == 0
    csvs = sorted(tmp_path.glob("fig_s1_*.csv"))
    assert len(csvs) == 8
    assert (tmp_path / "fig_s1_manifest.json").exists()


def test_cmd_power_requires_grid_or_preset(capsys):
    code, _, err = run_cli(["power", "--T", "64", "--reps", "10"], capsys)
    assert code == 2
    assert "delta-grid" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["test"])
    assert err.value.code == 2
