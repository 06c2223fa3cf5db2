"""Scenario configuration, matrix orchestration, and deterministic file output.

A scenario is one (distribution, regime) run; a matrix is the full 2 x 3
grid sharing one population sample per distribution and one graph.  Within
a matrix the progressive run goes first, its run-end total normative cost
becomes the target the other two regimes are calibrated to, so regime
comparisons are never confounded by different tax totals.

All CSV output is deterministic: float cells use repr (shortest round-trip
form), headers carry the seeds, and nothing date- or host-dependent is
written.  Rerunning any command with the same config reproduces identical
bytes.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import (
    SimulationTrace,
    calibrate_fixed,
    calibrate_proportional,
    run,
    total_normative_cost,
)
from .metrics import SUMMARY_COLUMNS, ScenarioResult, gini, resource_productivity, shape_fit, totals
from .model import Fixed, ModelParams, NormRegime, Progressive, Proportional
from .network import SocialGraph, generate_ba, load_edgelist
from .sampling import AgentPopulation, histogram, sample_normal_actions, sample_powerlaw_actions

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "DISTRIBUTIONS",
    "REGIMES",
    "HIST_BIN_WIDTH",
    "read_config_file",
    "make_config",
    "model_params",
    "sample_population",
    "build_graph",
    "make_regime",
    "run_scenario",
    "run_matrix",
    "regenerate_derived",
    "read_csv",
]

DISTRIBUTIONS = ("normal", "powerlaw")
REGIMES = ("progressive", "proportional", "fixed")

# action/value histogram resolution shared by all outputs
HIST_BIN_WIDTH = 0.025

COMPARISON_COLUMNS = [
    "distribution",
    "regime",
    "norm_param",
    "total_value",
    "total_resources",
    "resource_productivity",
    "gini_values",
    "gini_actions",
    "normative_cost",
]

REPLICATE_METRICS = [
    "norm_param",
    "total_value",
    "total_resources",
    "resource_productivity",
    "gini_values",
    "gini_actions",
    "normative_cost",
    "final_price",
]


class ConfigError(ValueError):
    """Bad key, malformed line, or out-of-domain value in a configuration."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Resolved run settings; defaults are the reference parameter set."""

    n_agents: int = 100
    b: float = 0.001
    c: float = 1.0
    r: float = 2.0
    s: float = 0.5
    delta: float = 0.05
    iterations: int = 100
    distribution: str = "normal"
    regime: str = "progressive"
    mu: float = 0.5
    sigma: float = 0.1
    k: float = 2.0
    median: float = 0.5
    # power-law cap: keeps the fostered tax total on the scale the untaxed
    # economy can pay; set to none to sample the full tail
    a_max: float | None = 1.5
    n2: float = 0.0
    n3: float = 0.0
    seed: int = 1000
    graph_seed: int = 2000
    ba_m: int = 2
    graph_file: str | None = None
    replicates: int = 1
    out: str = "normsim-out"
    early_stop: float | None = None


_INT_KEYS = {"n_agents", "iterations", "seed", "graph_seed", "ba_m", "replicates"}
_FLOAT_KEYS = {"b", "c", "r", "s", "delta", "mu", "sigma", "k", "median", "n2", "n3"}
_OPT_FLOAT_KEYS = {"a_max", "early_stop"}
_STR_KEYS = {"distribution", "regime", "out"}
_OPT_STR_KEYS = {"graph_file"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _OPT_FLOAT_KEYS | _STR_KEYS | _OPT_STR_KEYS


def _convert(key: str, raw) -> object:
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(text)
        if key in _FLOAT_KEYS:
            return float(text)
        if key in _OPT_FLOAT_KEYS:
            return None if text.lower() in ("none", "") else float(text)
        if key in _OPT_STR_KEYS:
            return None if text.lower() in ("none", "") else text
        return text
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def read_config_file(path) -> dict:
    """Parse a flat `key = value` text file; '#' starts a comment."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.rstrip()!r}")
            key, _, value = text.partition("=")
            values[key.strip()] = value.strip()
    return values


def make_config(file_values: dict | None = None, flag_values: dict | None = None) -> ScenarioConfig:
    """Merge defaults, config-file values, then flag values (highest wins)."""
    merged = {}
    for source in (file_values or {}), (flag_values or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in _ALL_KEYS:
                raise ConfigError(f"unknown configuration key: {key}")
            merged[key] = _convert(key, value)
    config = ScenarioConfig(**merged)
    _validate(config)
    return config


def _validate(config: ScenarioConfig) -> None:
    try:
        model_params(config)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if config.distribution not in DISTRIBUTIONS:
        raise ConfigError(f"distribution must be one of {DISTRIBUTIONS}, got {config.distribution!r}")
    if config.regime not in REGIMES:
        raise ConfigError(f"regime must be one of {REGIMES}, got {config.regime!r}")
    if config.sigma <= 0:
        raise ConfigError(f"sigma must be > 0, got {config.sigma}")
    if config.mu <= 0:
        raise ConfigError(f"mu must be > 0, got {config.mu}")
    if config.k <= 1:
        raise ConfigError(f"power-law exponent k must be > 1, got {config.k}")
    if config.median <= 0:
        raise ConfigError(f"median must be > 0, got {config.median}")
    if config.a_max is not None and config.a_max <= config.median:
        raise ConfigError(f"a_max must exceed the median, got {config.a_max}")
    if config.n2 < 0 or config.n3 < 0:
        raise ConfigError("norm charges n2 and n3 must be >= 0")
    if config.ba_m < 1:
        raise ConfigError(f"ba_m must be >= 1, got {config.ba_m}")
    if config.replicates < 1:
        raise ConfigError(f"replicates must be >= 1, got {config.replicates}")
    if config.early_stop is not None and config.early_stop <= 0:
        raise ConfigError(f"early_stop must be > 0, got {config.early_stop}")


def model_params(config: ScenarioConfig) -> ModelParams:
    return ModelParams(
        b=config.b,
        c=config.c,
        r=config.r,
        s=config.s,
        delta=config.delta,
        n_agents=config.n_agents,
        t_max=config.iterations,
    )


def sample_population(config: ScenarioConfig, distribution: str | None = None) -> AgentPopulation:
    distribution = distribution or config.distribution
    if distribution == "normal":
        return sample_normal_actions(config.n_agents, config.mu, config.sigma, seed=config.seed)
    if distribution == "powerlaw":
        return sample_powerlaw_actions(
            config.n_agents, config.k, config.median, seed=config.seed, a_max=config.a_max
        )
    raise ConfigError(f"unknown distribution {distribution!r}")


def build_graph(config: ScenarioConfig) -> SocialGraph:
    if config.graph_file is not None:
        graph = load_edgelist(config.graph_file)
        if graph.n_nodes != config.n_agents:
            raise ConfigError(
                f"graph file has {graph.n_nodes} nodes, config wants {config.n_agents}"
            )
        return graph
    return generate_ba(config.n_agents, config.ba_m, seed=config.graph_seed)


def make_regime(config: ScenarioConfig, regime: str | None = None) -> NormRegime:
    regime = regime or config.regime
    if regime == "progressive":
        return Progressive()
    if regime == "proportional":
        return Proportional(n2=config.n2)
    if regime == "fixed":
        return Fixed(n3=config.n3)
    raise ConfigError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# CSV output.  Every file starts with one '#' metadata line carrying the
# seeds and scenario tags, then a plain header row.

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _meta_line(pairs: dict) -> str:
    return "# " + " ".join(f"{k}={_fmt(v)}" for k, v in pairs.items())


def _parse_meta(line: str) -> dict:
    if not line.startswith("#"):
        return {}
    pairs = {}
    for token in line[1:].split():
        if "=" in token:
            key, _, value = token.partition("=")
            pairs[key] = value
    return pairs


def _write_csv(path, meta: dict, columns, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_meta_line(meta) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(cell) for cell in row) + "\n")


def read_csv(path) -> tuple[dict, list, list]:
    """Read back one of our CSVs: (metadata, columns, rows of strings)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    meta = _parse_meta(lines[0]) if lines else {}
    body = lines[1:] if meta or (lines and lines[0].startswith("#")) else lines
    if not body:
        raise ConfigError(f"{path}: missing header row")
    columns = body[0].split(",")
    rows = [line.split(",") for line in body[1:] if line]
    return meta, columns, rows


def _scenario_meta(config: ScenarioConfig, distribution: str, regime: str, norm_param) -> dict:
    meta = {
        "distribution": distribution,
        "regime": regime,
        "seed": config.seed,
        "graph_seed": config.graph_seed,
        "iterations": config.iterations,
    }
    if norm_param is not None:
        meta["norm_param"] = norm_param
    return meta


def _write_agents(dirpath, meta, population: AgentPopulation, graph: SocialGraph) -> None:
    degrees = graph.degrees
    rows = [(i, population.actions[i], int(degrees[i])) for i in range(population.actions.size)]
    _write_csv(Path(dirpath) / "agents.csv", meta, ["agent_id", "a", "degree"], rows)


def _write_hist(path, meta, values) -> None:
    hist = histogram(values, bin_width=HIST_BIN_WIDTH)
    _write_csv(path, meta, ["bin_lower", "bin_upper", "count"], hist.rows())


def _write_trace(dirpath, meta, trace: SimulationTrace) -> None:
    rows = []
    n_agents = trace.actions.size
    for t in range(trace.t_final + 1):
        for i in range(n_agents):
            rows.append((t, i, trace.actions[i], trace.x[t, i], trace.n[t, i], trace.v[t, i]))
    _write_csv(Path(dirpath) / "trace.csv", meta, ["t", "agent_id", "a", "x", "n", "v"], rows)


def _write_steps(dirpath, meta, trace: SimulationTrace) -> None:
    rows = [(t, trace.z[t], trace.p[t]) for t in range(trace.t_final + 1)]
    _write_csv(Path(dirpath) / "steps.csv", meta, ["t", "z", "p"], rows)


def _write_fit(dirpath, meta, actions, values) -> None:
    fit = shape_fit(actions, values)
    columns = list(fit.keys())
    _write_csv(Path(dirpath) / "fit.csv", meta, columns, [[fit[c] for c in columns]])


def _write_edges(path, config: ScenarioConfig, graph: SocialGraph) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {"graph_seed": config.graph_seed, "ba_m": config.ba_m, "n_nodes": graph.n_nodes}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_meta_line(meta) + "\n")
        fh.write("# i j\n")
        for i, j in graph.edges():
            fh.write(f"{i} {j}\n")


def _write_config_echo(path, config: ScenarioConfig) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# resolved configuration\n")
        for field in dataclasses.fields(config):
            value = getattr(config, field.name)
            fh.write(f"{field.name} = {'none' if value is None else _fmt(value)}\n")


def _write_summary(path, rows) -> None:
    meta = {"table": "scenario-summary"}
    _write_csv(path, meta, SUMMARY_COLUMNS, [r.row() if isinstance(r, ScenarioResult) else r for r in rows])


def _write_comparison(path, results) -> None:
    rows = [[getattr(res, c) for c in COMPARISON_COLUMNS] for res in results]
    _write_csv(path, {"table": "regime-comparison"}, COMPARISON_COLUMNS, rows)


def build_result(
    config: ScenarioConfig,
    distribution: str,
    regime_name: str,
    regime: NormRegime,
    population: AgentPopulation,
    trace: SimulationTrace,
) -> ScenarioResult:
    final = trace.final_state()
    total_value, total_resources = totals(final)
    if regime_name == "proportional":
        norm_param = regime.n2
    elif regime_name == "fixed":
        norm_param = regime.n3
    else:
        norm_param = None
    return ScenarioResult(
        regime=regime_name,
        distribution=distribution,
        seed=config.seed,
        graph_seed=config.graph_seed,
        norm_param=norm_param,
        total_value=total_value,
        total_resources=total_resources,
        resource_productivity=resource_productivity(total_value, total_resources),
        gini_values=gini(final.v),
        gini_actions=gini(population.actions),
        values_negative=bool(np.any(final.v < 0)),
        normative_cost=total_normative_cost(regime, final),
        final_price=final.p,
    )


def _write_scenario_dir(dirpath, config, distribution, regime_name, regime, population, trace, result) -> None:
    meta = _scenario_meta(
        config, distribution, regime_name, result.norm_param if regime_name != "progressive" else None
    )
    dirpath = Path(dirpath)
    _write_trace(dirpath, meta, trace)
    _write_steps(dirpath, meta, trace)
    _write_hist(dirpath / "values_hist.csv", meta, trace.v[trace.t_final])
    _write_fit(dirpath, meta, trace.actions, trace.v[trace.t_final])
    _write_summary(dirpath / "summary.csv", [result])


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run one (distribution, regime) scenario and write its directory."""
    params = model_params(config)
    population = sample_population(config)
    graph = build_graph(config)
    regime = make_regime(config)
    trace = run(params, population, regime, graph=graph, early_stop_tol=config.early_stop)
    result = build_result(config, config.distribution, config.regime, regime, population, trace)

    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _scenario_meta(config, config.distribution, config.regime, result.norm_param)
    _write_config_echo(out / "config.txt", config)
    _write_edges(out / "edges.csv", config, graph)
    _write_agents(out, meta, population, graph)
    _write_hist(out / "actions_hist.csv", meta, population.actions)
    _write_scenario_dir(out, config, config.distribution, config.regime, regime, population, trace, result)
    return result


# target totals below this are treated as exactly zero, skipping calibration
_COST_FLOOR = 1e-12


def _matrix_one(config: ScenarioConfig, out: Path) -> list:
    """One full 2 x 3 matrix sharing a single graph; returns 6 results."""
    params = model_params(config)
    graph = build_graph(config)
    _write_config_echo(out / "config.txt", config)
    _write_edges(out / "edges.csv", config, graph)

    results = []
    for distribution in DISTRIBUTIONS:
        population = sample_population(config, distribution)
        dist_dir = out / distribution
        dist_meta = _scenario_meta(config, distribution, "all", None)
        _write_agents(dist_dir, dist_meta, population, graph)
        _write_hist(dist_dir / "actions_hist.csv", dist_meta, population.actions)

        progressive = Progressive()
        prog_trace = run(params, population, progressive, graph=graph, early_stop_tol=config.early_stop)
        target = total_normative_cost(progressive, prog_trace.final_state())

        if target > _COST_FLOOR:
            proportional = calibrate_proportional(params, population, target)
            fixed = calibrate_fixed(target, params)
        else:
            proportional, fixed = Proportional(n2=0.0), Fixed(n3=0.0)

        runs = [
            ("progressive", progressive, prog_trace),
            ("proportional", proportional, run(params, population, proportional, early_stop_tol=config.early_stop)),
            ("fixed", fixed, run(params, population, fixed, early_stop_tol=config.early_stop)),
        ]
        for regime_name, regime, trace in runs:
            result = build_result(config, distribution, regime_name, regime, population, trace)
            _write_scenario_dir(
                dist_dir / regime_name, config, distribution, regime_name, regime, population, trace, result
            )
            results.append(result)

    _write_summary(out / "summary.csv", results)
    _write_comparison(out / "comparison.csv", results)
    return results


def _replicate_config(config: ScenarioConfig, index: int) -> ScenarioConfig:
    if index == 0:
        return config
    return dataclasses.replace(
        config, seed=config.seed + index, graph_seed=config.graph_seed + index
    )


def _aggregate_rows(all_results: list) -> list:
    rows = []
    for distribution in DISTRIBUTIONS:
        for regime_name in REGIMES:
            group = [r for r in all_results if r.distribution == distribution and r.regime == regime_name]
            if not group:
                continue
            for metric in REPLICATE_METRICS:
                data = np.array([0.0 if getattr(r, metric) is None else getattr(r, metric) for r in group])
                rows.append(
                    [
                        distribution,
                        regime_name,
                        metric,
                        float(np.median(data)),
                        float(np.percentile(data, 25)),
                        float(np.percentile(data, 75)),
                        float(np.min(data)),
                        float(np.max(data)),
                    ]
                )
    return rows


def run_matrix(config: ScenarioConfig) -> list:
    """Full matrix (all replicates); returns every ScenarioResult."""
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    if config.replicates == 1:
        return _matrix_one(config, out)
    all_results = []
    for index in range(config.replicates):
        rep_config = _replicate_config(config, index)
        rep_dir = out / f"rep-{index:02d}"
        rep_dir.mkdir(parents=True, exist_ok=True)
        all_results.extend(_matrix_one(dataclasses.replace(rep_config, out=str(rep_dir)), rep_dir))
    _write_config_echo(out / "config.txt", config)
    _write_summary(out / "summary.csv", all_results)
    _write_csv(
        out / "replicates.csv",
        {"replicates": config.replicates, "seed": config.seed, "graph_seed": config.graph_seed},
        ["distribution", "regime", "metric", "median", "q25", "q75", "min", "max"],
        _aggregate_rows(all_results),
    )
    return all_results


# ---------------------------------------------------------------------------
# Rebuilding derived CSVs (histograms, fit, summaries) from raw traces.

def _read_trace_arrays(path):
    meta, columns, rows = read_csv(path)
    expect = ["t", "agent_id", "a", "x", "n", "v"]
    if columns != expect:
        raise ConfigError(f"{path}: expected columns {expect}, got {columns}")
    data = np.array([[float(cell) for cell in row] for row in rows])
    if data.size == 0:
        raise ConfigError(f"{path}: no rows")
    n_agents = int(data[:, 1].max()) + 1
    t_count = data.shape[0] // n_agents
    shaped = data.reshape(t_count, n_agents, 6)
    # contiguous copies so downstream linear algebra matches the original
    # in-memory layout bit for bit
    return meta, SimulationTrace(
        actions=np.ascontiguousarray(data[:n_agents, 2]),
        z=np.zeros(t_count),
        p=np.zeros(t_count),
        x=np.ascontiguousarray(shaped[:, :, 3]),
        n=np.ascontiguousarray(shaped[:, :, 4]),
        v=np.ascontiguousarray(shaped[:, :, 5]),
    )


def _regenerate_scenario(dirpath: Path) -> ScenarioResult | None:
    trace_path = dirpath / "trace.csv"
    steps_path = dirpath / "steps.csv"
    if not trace_path.exists() or not steps_path.exists():
        return None
    meta, trace = _read_trace_arrays(trace_path)
    steps_meta, steps_cols, steps_rows = read_csv(steps_path)
    if steps_cols != ["t", "z", "p"]:
        raise ConfigError(f"{steps_path}: expected columns ['t', 'z', 'p'], got {steps_cols}")
    trace.z = np.array([float(r[1]) for r in steps_rows])
    trace.p = np.array([float(r[2]) for r in steps_rows])

    regime_name = meta.get("regime", "progressive")
    norm_param = float(meta["norm_param"]) if "norm_param" in meta else None
    if regime_name == "proportional":
        regime = Proportional(n2=norm_param or 0.0)
    elif regime_name == "fixed":
        regime = Fixed(n3=norm_param or 0.0)
    else:
        regime = Progressive()

    final = trace.final_state()
    total_value, total_resources = totals(final)
    result = ScenarioResult(
        regime=regime_name,
        distribution=meta.get("distribution", "normal"),
        seed=int(meta.get("seed", 0)),
        graph_seed=int(meta.get("graph_seed", 0)),
        norm_param=norm_param,
        total_value=total_value,
        total_resources=total_resources,
        resource_productivity=resource_productivity(total_value, total_resources),
        gini_values=gini(final.v),
        gini_actions=gini(trace.actions),
        values_negative=bool(np.any(final.v < 0)),
        normative_cost=total_normative_cost(regime, final),
        final_price=final.p,
    )
    out_meta = dict(meta)
    _write_hist(dirpath / "values_hist.csv", out_meta, final.v)
    _write_fit(dirpath, out_meta, trace.actions, final.v)
    _write_summary(dirpath / "summary.csv", [result])
    return result


def _regenerate_dist_dir(dist_dir: Path) -> list:
    agents_path = dist_dir / "agents.csv"
    if agents_path.exists():
        meta, columns, rows = read_csv(agents_path)
        if "a" not in columns:
            raise ConfigError(f"{agents_path}: missing column 'a'")
        actions = np.array([float(row[columns.index("a")]) for row in rows])
        _write_hist(dist_dir / "actions_hist.csv", meta, actions)
    results = []
    for regime_name in REGIMES:
        result = _regenerate_scenario(dist_dir / regime_name)
        if result is not None:
            results.append(result)
    return results


def regenerate_derived(run_dir) -> list:
    """Rebuild histogram, fit, summary, and comparison CSVs from raw traces.

    Handles single-run, matrix, and replicated-matrix directory layouts;
    never reruns the dynamics.
    """
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise ConfigError(f"not a directory: {run_dir}")

    rep_dirs = sorted(d for d in run_dir.iterdir() if d.is_dir() and d.name.startswith("rep-"))
    if rep_dirs:
        all_results = []
        for rep in rep_dirs:
            all_results.extend(regenerate_derived(rep))
        if all_results:
            _write_summary(run_dir / "summary.csv", all_results)
            meta, _, _ = (
                read_csv(run_dir / "replicates.csv")
                if (run_dir / "replicates.csv").exists()
                else ({}, None, None)
            )
            _write_csv(
                run_dir / "replicates.csv",
                meta or {"replicates": len(rep_dirs)},
                ["distribution", "regime", "metric", "median", "q25", "q75", "min", "max"],
                _aggregate_rows(all_results),
            )
        return all_results

    dist_results = []
    for distribution in DISTRIBUTIONS:
        dist_dir = run_dir / distribution
        if dist_dir.is_dir():
            dist_results.extend(_regenerate_dist_dir(dist_dir))
    if dist_results:
        _write_summary(run_dir / "summary.csv", dist_results)
        _write_comparison(run_dir / "comparison.csv", dist_results)
        return dist_results

    # flat single-run layout
    result = _regenerate_scenario(run_dir)
    if result is None:
        raise ConfigError(f"{run_dir}: no trace.csv found in any known layout")
    agents_path = run_dir / "agents.csv"
    if agents_path.exists():
        meta, columns, rows = read_csv(agents_path)
        actions = np.array([float(row[columns.index("a")]) for row in rows])
        _write_hist(run_dir / "actions_hist.csv", meta, actions)
    _write_summary(run_dir / "summary.csv", [result])
    return [result]
