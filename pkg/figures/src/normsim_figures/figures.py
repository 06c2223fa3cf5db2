"""Eight figure analogues rendered from a matrix run directory.

Every number shown is read from the CSVs; the only transforms here are
binning, pivoting, and evaluating the already-fitted overlay coefficients.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data import SchemaError, floats, load_table, read_csv

__all__ = ["FigureSpec", "FIGURE_IDS", "plan_figures", "render_figure", "render_all"]

BIN_WIDTH = 0.025
POWERLAW_DISPLAY_MAX = 2.0  # display clip only; the CSVs keep the full tail
DISTRIBUTIONS = ("normal", "powerlaw")
REGIMES = ("progressive", "proportional", "fixed")

FIGURE_IDS = ("F4", "F5", "F6", "F7", "F8", "F9", "F10", "F11")
_SLUGS = {
    "F4": "abilities",
    "F5": "value-paths",
    "F6": "value-distributions",
    "F7": "value-vs-ability",
    "F8": "charge-vs-ability",
    "F9": "coefficient-vs-ability",
    "F10": "group-totals",
    "F11": "productivity-inequality",
}

# identical inputs hash to identical SVG ids
plt.rcParams["svg.hashsalt"] = "normsim-figures"


@dataclass(frozen=True)
class FigureSpec:
    """One renderable figure: id, the CSVs it reads, where it goes."""

    figure_id: str
    inputs: tuple
    output: Path
    xlabel: str
    ylabel: str
    distributions: tuple
    log_scale: bool = False


def _trace_paths(run_dir, dists, regimes=REGIMES):
    return tuple(run_dir / d / r / "trace.csv" for d in dists for r in regimes)


def plan_figures(run_dir, fmt="svg", only=None, log=False):
    """Figure specs for a matrix directory (or a rep-00 inside one)."""
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise SchemaError(f"not a run directory: {run_dir}")
    if (run_dir / "rep-00").is_dir():
        run_dir = run_dir / "rep-00"
    dists = tuple(d for d in DISTRIBUTIONS if (run_dir / d).is_dir())
    if not dists:
        raise SchemaError(f"{run_dir}: no normal/ or powerlaw/ scenario directories")
    missing = [d for d in DISTRIBUTIONS if d not in dists]
    if missing:
        warnings.warn(
            f"{run_dir}: missing {' and '.join(missing)} runs; "
            f"rendering {' and '.join(dists)} panels only",
            stacklevel=2,
        )
    wanted = list(FIGURE_IDS)
    if only:
        unknown = [fid for fid in only if fid not in FIGURE_IDS]
        if unknown:
            raise SchemaError(f"unknown figure id: {', '.join(unknown)}")
        wanted = [fid for fid in FIGURE_IDS if fid in set(only)]

    out_dir = run_dir / "figures"
    inputs = {
        "F4": tuple(run_dir / d / "agents.csv" for d in dists),
        "F5": tuple(run_dir / d / "progressive" / "trace.csv" for d in dists),
        "F6": _trace_paths(run_dir, dists),
        "F7": _trace_paths(run_dir, dists)
        + tuple(run_dir / d / r / "fit.csv" for d in dists for r in REGIMES),
        "F8": _trace_paths(run_dir, dists),
        "F9": _trace_paths(run_dir, dists),
        "F10": (run_dir / "comparison.csv",),
        "F11": (run_dir / "comparison.csv",),
    }
    labels = {
        "F4": ("ability a", "agents"),
        "F5": ("repetition t", "value v"),
        "F6": ("value v", "agents"),
        "F7": ("ability a", "value v"),
        "F8": ("ability a", "charge paid"),
        "F9": ("ability a", "per-unit coefficient n"),
        "F10": ("", "group total"),
        "F11": ("", "metric"),
    }
    specs = []
    for fid in wanted:
        xlabel, ylabel = labels[fid]
        specs.append(
            FigureSpec(
                figure_id=fid,
                inputs=inputs[fid],
                output=out_dir / f"{fid}-{_SLUGS[fid]}.{fmt}",
                xlabel=xlabel,
                ylabel=ylabel,
                distributions=dists,
                log_scale=log,
            )
        )
    return specs


# ------------------------------------------------------------- helpers


def _bin_edges(values):
    lo = np.floor(values.min() / BIN_WIDTH)
    hi = np.floor(values.max() / BIN_WIDTH) + 1.0
    return np.arange(lo, hi + 1.0) * BIN_WIDTH


def _bars(ax, values):
    counts, edges = np.histogram(values, bins=_bin_edges(values))
    ax.bar(edges[:-1], counts, width=BIN_WIDTH, align="edge", edgecolor="none")


def _trace_grid(path):
    """trace.csv pivoted to (t array, per-step value matrix [T+1, N])."""
    table = load_table(path, required=("t", "agent_id", "a", "x", "n", "v"))
    t = floats(table, "t").astype(int)
    n_agents = int(t[t == 0].size)
    n_steps = t.max() + 1
    if n_agents * n_steps != t.size or np.any(t[:n_agents] != 0):
        raise SchemaError(f"{Path(path).name}: rows do not form a step-major grid")
    return table, n_agents, n_steps


def _final_rows(path):
    """Columns of the last step of a trace as float arrays."""
    table, n_agents, n_steps = _trace_grid(path)
    out = {}
    for column in ("a", "x", "n", "v"):
        out[column] = floats(table, column)[(n_steps - 1) * n_agents :]
    return out


def _comparison_rows(path, dists):
    required = (
        "distribution",
        "regime",
        "total_value",
        "total_resources",
        "resource_productivity",
        "gini_values",
        "gini_actions",
    )
    table = load_table(path, required=required)
    rows = {}
    for i, (dist, regime) in enumerate(zip(table["distribution"], table["regime"])):
        if dist in dists:
            rows[(dist, regime)] = {c: table[c][i] for c in table}
    for dist in dists:
        for regime in REGIMES:
            if (dist, regime) not in rows:
                raise SchemaError(f"{Path(path).name}: no row for {dist}/{regime}")
    return rows


def _maybe_log_x(ax, spec, dist):
    if spec.log_scale and dist == "powerlaw":
        ax.set_xscale("log")


def _grouped_bars(ax, rows, dists, column):
    width = 0.25
    base = np.arange(len(dists), dtype=float)
    for k, regime in enumerate(REGIMES):
        heights = [float(rows[(d, regime)][column]) for d in dists]
        ax.bar(base + (k - 1) * width, heights, width=width, label=regime)
    ax.set_xticks(base)
    ax.set_xticklabels(dists)


# ------------------------------------------------------------- builders


def _build_f4(spec):
    fig, axes = plt.subplots(
        1, len(spec.distributions), figsize=(5.0 * len(spec.distributions), 3.4), layout="constrained"
    )
    axes = np.atleast_1d(axes)
    for ax, dist, path in zip(axes, spec.distributions, spec.inputs):
        table = load_table(path, required=("agent_id", "a", "degree"))
        _bars(ax, floats(table, "a"))
        if dist == "powerlaw":
            ax.set_xlim(0.0, POWERLAW_DISPLAY_MAX)
        _maybe_log_x(ax, spec, dist)
        ax.set_title(f"{dist} abilities")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
    return fig


def _build_f5(spec):
    fig, axes = plt.subplots(
        1, len(spec.distributions), figsize=(5.0 * len(spec.distributions), 3.4), layout="constrained"
    )
    axes = np.atleast_1d(axes)
    for ax, dist, path in zip(axes, spec.distributions, spec.inputs):
        table, n_agents, n_steps = _trace_grid(path)
        v = floats(table, "v").reshape(n_steps, n_agents)
        t = np.arange(n_steps)
        for i in range(n_agents):
            ax.plot(t, v[:, i], color="steelblue", linewidth=0.5, alpha=0.35)
        ax.set_title(f"{dist}, fostered charge")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
    return fig


def _per_regime_panels(spec):
    n_rows = len(spec.distributions)
    fig, axes = plt.subplots(
        n_rows, len(REGIMES), figsize=(12.0, 3.2 * n_rows), layout="constrained", squeeze=False
    )
    panels = []
    for i, dist in enumerate(spec.distributions):
        for j, regime in enumerate(REGIMES):
            panels.append((axes[i][j], dist, regime, spec.inputs[i * len(REGIMES) + j]))
    return fig, panels


def _build_f6(spec):
    fig, panels = _per_regime_panels(spec)
    for ax, dist, regime, path in panels:
        _bars(ax, _final_rows(path)["v"])
        ax.set_title(f"{dist}, {regime}")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
    return fig


def _build_f7(spec):
    fig, panels = _per_regime_panels(spec)
    n_traces = len(spec.distributions) * len(REGIMES)
    for k, (ax, dist, regime, path) in enumerate(panels):
        final = _final_rows(path)
        fit_table = load_table(spec.inputs[n_traces + k], required=("alpha", "beta", "gamma"))
        a, v = final["a"], final["v"]
        ax.plot(a, v, ".", markersize=3.5, color="#444444")
        grid = np.linspace(a.min(), a.max(), 128)
        alpha = floats(fit_table, "alpha")[0]
        beta = floats(fit_table, "beta")[0]
        gamma = floats(fit_table, "gamma")[0]
        ax.plot(grid, alpha * grid, "-", linewidth=1.0, label="linear fit")
        ax.plot(grid, beta * grid * grid + gamma, "--", linewidth=1.0, label="quadratic fit")
        _maybe_log_x(ax, spec, dist)
        ax.set_title(f"{dist}, {regime}")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        if k == 0:
            ax.legend(fontsize=8)
    return fig


def _build_f8(spec):
    fig, panels = _per_regime_panels(spec)
    for ax, dist, regime, path in panels:
        final = _final_rows(path)
        # lump charges are paid regardless of use; per-unit ones scale with x
        charge = final["n"] if regime == "fixed" else final["n"] * final["x"]
        ax.plot(final["a"], charge, ".", markersize=3.5, color="#aa3333")
        _maybe_log_x(ax, spec, dist)
        ax.set_title(f"{dist}, {regime}")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
    return fig


def _build_f9(spec):
    fig, panels = _per_regime_panels(spec)
    for ax, dist, regime, path in panels:
        final = _final_rows(path)
        ax.plot(final["a"], final["n"], ".", markersize=3.5, color="#336699")
        _maybe_log_x(ax, spec, dist)
        ax.set_title(f"{dist}, {regime}")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
    return fig


def _build_f10(spec):
    rows = _comparison_rows(spec.inputs[0], spec.distributions)
    fig, axes = plt.subplots(1, 2, figsize=(10.0, 3.6), layout="constrained")
    for ax, column, title in zip(axes, ("total_value", "total_resources"), ("total value", "total resources")):
        _grouped_bars(ax, rows, spec.distributions, column)
        ax.set_title(title)
        ax.set_ylabel(spec.ylabel)
    axes[0].legend(fontsize=8)
    return fig


def _build_f11(spec):
    rows = _comparison_rows(spec.inputs[0], spec.distributions)
    fig, axes = plt.subplots(1, 2, figsize=(10.0, 3.6), layout="constrained")
    for ax, column, title in zip(
        axes, ("resource_productivity", "gini_values"), ("value per resource", "Gini of values")
    ):
        _grouped_bars(ax, rows, spec.distributions, column)
        ax.set_title(title)
    # the fairness yardstick: inequality of the abilities themselves
    base = np.arange(len(spec.distributions), dtype=float)
    for i, dist in enumerate(spec.distributions):
        reference = float(rows[(dist, "progressive")]["gini_actions"])
        axes[1].hlines(
            reference, base[i] - 0.4, base[i] + 0.4, linestyles="dotted", colors="black",
            label="ability Gini" if i == 0 else None,
        )
    axes[0].legend(fontsize=8)
    axes[1].legend(fontsize=8)
    return fig


_BUILDERS = {
    "F4": _build_f4,
    "F5": _build_f5,
    "F6": _build_f6,
    "F7": _build_f7,
    "F8": _build_f8,
    "F9": _build_f9,
    "F10": _build_f10,
    "F11": _build_f11,
}


def render_figure(spec: FigureSpec) -> Path:
    """Build and write one figure; inputs are fully validated before the
    output file is created, so failures never leave partial images."""
    fig = _BUILDERS[spec.figure_id](spec)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    kwargs = {}
    if spec.output.suffix == ".svg":
        kwargs["metadata"] = {"Date": None}  # reruns must be byte-identical
    fig.savefig(spec.output, **kwargs)
    plt.close(fig)
    return spec.output


def render_all(run_dir, fmt="svg", only=None, log=False):
    """Render every planned figure for a run directory; returns the paths."""
    return [render_figure(spec) for spec in plan_figures(run_dir, fmt=fmt, only=only, log=log)]
