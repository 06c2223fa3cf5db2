"""Experiment harness: config handling, CSV output, CLI, reproducibility.

Small populations and short horizons keep these runs fast; the full-size
default configuration is exercised by the acceptance tests.
"""

import filecmp
from pathlib import Path

import numpy as np
import pytest

from normsim.cli import main
from normsim.experiment import (
    ConfigError,
    ScenarioConfig,
    make_config,
    read_config_file,
    read_csv,
    regenerate_derived,
    run_matrix,
    run_scenario,
)

SMALL = dict(n_agents=20, iterations=30)


def small_config(**extra):
    values = dict(SMALL)
    values.update(extra)
    return make_config({}, values)


def all_csvs(root):
    return sorted(p.relative_to(root) for p in Path(root).rglob("*.csv"))


def assert_trees_byte_identical(dir_a, dir_b):
    rel = all_csvs(dir_a)
    assert rel == all_csvs(dir_b)
    for r in rel:
        a, b = Path(dir_a) / r, Path(dir_b) / r
        assert a.read_bytes() == b.read_bytes(), f"{r} differs"


# ---------------------------------------------------------------- config


def test_defaults_round_numbers():
    cfg = ScenarioConfig()
    assert cfg.n_agents == 100
    assert cfg.iterations == 100
    assert (cfg.b, cfg.c, cfg.r, cfg.s, cfg.delta) == (0.001, 1.0, 2.0, 0.5, 0.05)
    assert (cfg.mu, cfg.sigma) == (0.5, 0.1)
    assert (cfg.k, cfg.median) == (2.0, 0.5)
    assert cfg.ba_m == 2


def test_precedence_flags_over_file_over_defaults():
    cfg = make_config({"seed": 7, "iterations": 50}, {"iterations": 60})
    assert cfg.seed == 7  # from file
    assert cfg.iterations == 60  # flag wins
    assert cfg.n_agents == 100  # default


def test_unknown_key_is_named():
    with pytest.raises(ConfigError, match="no_such_knob"):
        make_config({"no_such_knob": 1}, {})


@pytest.mark.parametrize(
    "values",
    [
        {"distribution": "uniform"},
        {"regime": "flat"},
        {"sigma": 0.0},
        {"mu": -0.5},
        {"k": 1.0},
        {"median": 0.0},
        {"a_max": 0.1},
        {"n2": -1.0},
        {"n3": -1.0},
        {"ba_m": 0},
        {"replicates": 0},
        {"early_stop": 0.0},
        {"s": 1.5},
        {"n_agents": 1},
    ],
)
def test_invalid_values_rejected(values):
    with pytest.raises(ConfigError):
        make_config({}, values)


def test_config_file_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "seed = 42\n"
        "distribution = powerlaw\n"
        "a_max = none\n"
        "\n"
        "sigma = 0.2\n"
    )
    values = read_config_file(path)
    cfg = make_config(values, {})
    assert cfg.seed == 42
    assert cfg.distribution == "powerlaw"
    assert cfg.a_max is None
    assert cfg.sigma == 0.2


def test_config_file_malformed_line_reports_position(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("seed = 1\nnot a pair\n")
    with pytest.raises(ConfigError, match=r"bad\.cfg:2"):
        read_config_file(path)


def test_config_file_bad_number(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("seed = lots\n")
    with pytest.raises(ConfigError):
        make_config(read_config_file(path), {})


# ---------------------------------------------------------------- run


def test_run_scenario_writes_expected_files(tmp_path):
    cfg = small_config(out=str(tmp_path / "r"), regime="proportional", n2=0.1)
    run_scenario(cfg)
    names = {p.name for p in (tmp_path / "r").iterdir()}
    assert names == {
        "config.txt",
        "edges.csv",
        "agents.csv",
        "actions_hist.csv",
        "trace.csv",
        "steps.csv",
        "values_hist.csv",
        "fit.csv",
        "summary.csv",
    }


def test_trace_and_steps_schemas(tmp_path):
    n, t = SMALL["n_agents"], SMALL["iterations"]
    cfg = small_config(out=str(tmp_path / "r"))
    run_scenario(cfg)
    meta, cols, rows = read_csv(tmp_path / "r" / "trace.csv")
    assert cols == ["t", "agent_id", "a", "x", "n", "v"]
    assert len(rows) == n * (t + 1)
    assert [r[0] for r in rows[:n]] == ["0"] * n  # step-major order
    assert meta["regime"] == "progressive"

    meta, cols, rows = read_csv(tmp_path / "r" / "steps.csv")
    assert cols == ["t", "z", "p"]
    assert len(rows) == t + 1
    assert rows[0][1] == "1.0"  # seed total

    meta, cols, rows = read_csv(tmp_path / "r" / "agents.csv")
    assert cols == ["agent_id", "a", "degree"]
    assert len(rows) == n
    degrees = np.array([int(r[2]) for r in rows])
    assert degrees.min() >= cfg.ba_m


def test_trace_floats_round_trip(tmp_path):
    cfg = small_config(out=str(tmp_path / "r"), regime="fixed", n3=0.01)
    result = run_scenario(cfg)
    _, _, rows = read_csv(tmp_path / "r" / "trace.csv")
    last = [r for r in rows if r[0] == str(SMALL["iterations"])]
    v = np.array([float(r[5]) for r in last])
    assert float(np.sum(v)) == result.total_value  # repr round-trips exactly


def test_zero_iteration_outputs(tmp_path):
    cfg = small_config(out=str(tmp_path / "r"), iterations=0)
    run_scenario(cfg)
    _, _, rows = read_csv(tmp_path / "r" / "steps.csv")
    assert len(rows) == 1
    _, _, trace_rows = read_csv(tmp_path / "r" / "trace.csv")
    assert len(trace_rows) == SMALL["n_agents"]


def test_summary_row_matches_result(tmp_path):
    cfg = small_config(out=str(tmp_path / "r"), regime="proportional", n2=0.2)
    result = run_scenario(cfg)
    _, cols, rows = read_csv(tmp_path / "r" / "summary.csv")
    row = dict(zip(cols, rows[0]))
    assert row["regime"] == "proportional"
    assert float(row["total_value"]) == result.total_value
    assert float(row["norm_param"]) == 0.2
    assert row["values_negative"] in ("true", "false")


def test_config_echo_round_trips(tmp_path):
    cfg = small_config(out=str(tmp_path / "r"), distribution="powerlaw")
    run_scenario(cfg)
    echoed = make_config(read_config_file(tmp_path / "r" / "config.txt"), {})
    assert echoed == cfg


def test_graph_file_reuse(tmp_path):
    cfg1 = small_config(out=str(tmp_path / "a"))
    run_scenario(cfg1)
    cfg2 = small_config(
        out=str(tmp_path / "b"), graph_file=str(tmp_path / "a" / "edges.csv")
    )
    run_scenario(cfg2)
    assert (tmp_path / "a" / "agents.csv").read_bytes() == (
        tmp_path / "b" / "agents.csv"
    ).read_bytes()


def test_graph_file_node_count_mismatch(tmp_path):
    path = tmp_path / "edges.csv"
    path.write_text("# i j\n0 1\n1 2\n")
    with pytest.raises(ConfigError):
        run_scenario(small_config(out=str(tmp_path / "r"), graph_file=str(path)))


# ---------------------------------------------------------------- matrix


@pytest.fixture(scope="module")
def small_matrix(tmp_path_factory):
    out = tmp_path_factory.mktemp("matrix") / "m"
    cfg = make_config({}, dict(SMALL, out=str(out)))
    results = run_matrix(cfg)
    return out, results


def test_matrix_layout(small_matrix):
    out, results = small_matrix
    assert len(results) == 6
    for dist in ("normal", "powerlaw"):
        assert (out / dist / "agents.csv").exists()
        for regime in ("progressive", "proportional", "fixed"):
            assert (out / dist / regime / "trace.csv").exists()
    _, _, rows = read_csv(out / "summary.csv")
    assert len(rows) == 6
    _, cols, rows = read_csv(out / "comparison.csv")
    assert len(rows) == 6
    assert cols[:3] == ["distribution", "regime", "norm_param"]


def test_matrix_shares_population_and_graph(small_matrix):
    out, _ = small_matrix
    # one graph for the whole matrix; one population per distribution
    assert (out / "edges.csv").exists()
    for dist in ("normal", "powerlaw"):
        _, _, rows = read_csv(out / dist / "agents.csv")
        a = [r[1] for r in rows]
        for regime in ("progressive", "proportional", "fixed"):
            _, _, trace = read_csv(out / dist / regime / "trace.csv")
            assert [r[2] for r in trace[: len(a)]] == a


def test_matrix_calibration_matches_progressive_cost(small_matrix):
    _, results = small_matrix
    by_key = {(r.distribution, r.regime): r for r in results}
    for dist in ("normal", "powerlaw"):
        w1 = by_key[(dist, "progressive")].normative_cost
        for regime in ("proportional", "fixed"):
            w = by_key[(dist, regime)].normative_cost
            assert w == pytest.approx(w1, rel=1e-3)


def test_replicated_matrix_layout(tmp_path):
    cfg = make_config({}, dict(SMALL, replicates=2, out=str(tmp_path / "m")))
    results = run_matrix(cfg)
    assert len(results) == 12
    root = tmp_path / "m"
    assert (root / "rep-00" / "comparison.csv").exists()
    assert (root / "rep-01" / "comparison.csv").exists()
    _, cols, rows = read_csv(root / "replicates.csv")
    assert cols == ["distribution", "regime", "metric", "median", "q25", "q75", "min", "max"]
    assert len(rows) == 2 * 3 * 8  # distribution x regime x metric
    _, _, summary = read_csv(root / "summary.csv")
    assert len(summary) == 12
    # replicate seeds derive from the base seed
    _, _, rep1 = read_csv(root / "rep-01" / "summary.csv")
    seeds = {r[2] for r in rep1}
    assert seeds == {str(cfg.seed + 1)}


def test_matrix_determinism_byte_identical(tmp_path):
    cfg_a = make_config({}, dict(SMALL, out=str(tmp_path / "a")))
    cfg_b = make_config({}, dict(SMALL, out=str(tmp_path / "b")))
    run_matrix(cfg_a)
    run_matrix(cfg_b)
    assert_trees_byte_identical(tmp_path / "a", tmp_path / "b")


def test_seed_changes_output(tmp_path):
    run_scenario(small_config(out=str(tmp_path / "a")))
    run_scenario(small_config(out=str(tmp_path / "b"), seed=12345))
    assert (tmp_path / "a" / "trace.csv").read_bytes() != (
        tmp_path / "b" / "trace.csv"
    ).read_bytes()


# ---------------------------------------------------------- regeneration


def test_regenerate_single_run_is_identity(tmp_path):
    cfg = small_config(out=str(tmp_path / "r"), regime="proportional", n2=0.1)
    run_scenario(cfg)
    before = {p: p.read_bytes() for p in (tmp_path / "r").rglob("*.csv")}
    regenerate_derived(tmp_path / "r")
    for p, blob in before.items():
        assert p.read_bytes() == blob, f"{p.name} changed"


def test_regenerate_matrix_is_identity(tmp_path):
    cfg = make_config({}, dict(SMALL, out=str(tmp_path / "m")))
    run_matrix(cfg)
    before = {p: p.read_bytes() for p in (tmp_path / "m").rglob("*.csv")}
    # clobber a derived file to prove it is rebuilt, not merely left alone
    victim = tmp_path / "m" / "comparison.csv"
    victim.write_bytes(b"garbage\n")
    regenerate_derived(tmp_path / "m")
    for p, blob in before.items():
        assert p.read_bytes() == blob, f"{p.name} changed"


def test_regenerate_missing_dir_raises(tmp_path):
    with pytest.raises(ConfigError):
        regenerate_derived(tmp_path / "nope")


# ---------------------------------------------------------------- cli


def test_cli_run_exits_zero_and_prints_summary(tmp_path, capsys):
    rc = main(
        [
            "run",
            "--regime",
            "fixed",
            "--iterations",
            "20",
            "--seed",
            "5",
            "--out",
            str(tmp_path / "r"),
            "--config",
            str(_small_cfg_file(tmp_path)),
        ]
    )
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("distribution,regime,seed")
    assert len(lines) == 2
    assert ",fixed," in lines[1]


def _small_cfg_file(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text("n_agents = 20\niterations = 30\n")
    return path


def test_cli_flag_overrides_config_file(tmp_path):
    out = tmp_path / "r"
    rc = main(
        [
            "run",
            "--config",
            str(_small_cfg_file(tmp_path)),
            "--iterations",
            "10",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    _, _, rows = read_csv(out / "steps.csv")
    assert len(rows) == 11


def test_cli_unknown_config_key_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mystery = 1\n")
    rc = main(["run", "--config", str(bad), "--out", str(tmp_path / "r")])
    assert rc == 2
    assert "mystery" in capsys.readouterr().err


def test_cli_missing_run_dir_exit_2(tmp_path, capsys):
    rc = main(["figures-data", str(tmp_path / "missing")])
    assert rc == 2
    assert "missing" in capsys.readouterr().err


def test_cli_figures_data_round_trip(tmp_path, capsys):
    out = tmp_path / "r"
    assert main(["run", "--config", str(_small_cfg_file(tmp_path)), "--out", str(out)]) == 0
    before = (out / "summary.csv").read_bytes()
    assert main(["figures-data", str(out)]) == 0
    assert (out / "summary.csv").read_bytes() == before


def test_cli_out_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("NORMSIM_OUT", str(tmp_path / "via-env"))
    rc = main(["run", "--config", str(_small_cfg_file(tmp_path))])
    assert rc == 0
    assert (tmp_path / "via-env" / "summary.csv").exists()


def test_cli_out_flag_beats_env(tmp_path, monkeypatch):
    monkeypatch.setenv("NORMSIM_OUT", str(tmp_path / "via-env"))
    rc = main(
        [
            "run",
            "--config",
            str(_small_cfg_file(tmp_path)),
            "--out",
            str(tmp_path / "via-flag"),
        ]
    )
    assert rc == 0
    assert (tmp_path / "via-flag" / "summary.csv").exists()
    assert not (tmp_path / "via-env").exists()
