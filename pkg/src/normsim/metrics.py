"""Group-level outcome statistics for converged runs.

The Gini coefficient uses the mean-absolute-difference definition
G = sum_ij |v_i - v_j| / (2 n^2 mean(v)), computed in O(n log n) from the
sorted values.  Negative inputs (possible under the fixed lump charge) are
fed to the same formula; the result can then exceed 1 and is flagged
rather than truncated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ScenarioResult",
    "SUMMARY_COLUMNS",
    "gini",
    "totals",
    "resource_productivity",
    "group_objective",
    "shape_fit",
    "equity_dispersion",
]

# fixed column order of every summary.csv row
SUMMARY_COLUMNS = [
    "distribution",
    "regime",
    "seed",
    "graph_seed",
    "norm_param",
    "total_value",
    "total_resources",
    "resource_productivity",
    "gini_values",
    "gini_actions",
    "values_negative",
    "normative_cost",
    "final_price",
]


@dataclass
class ScenarioResult:
    """Converged metrics of one scenario run."""

    regime: str
    distribution: str
    seed: int
    graph_seed: int
    norm_param: float | None  # calibrated n2 / n3; None for progressive
    total_value: float
    total_resources: float
    resource_productivity: float
    gini_values: float
    gini_actions: float
    values_negative: bool  # Gini of values computed over a vector with losses
    normative_cost: float
    final_price: float

    def row(self) -> list:
        return [getattr(self, c) for c in SUMMARY_COLUMNS]


def gini(values) -> float:
    """Mean absolute pairwise difference over twice the mean.

    0 for perfect equality; < 1 for all-positive inputs; may exceed 1 when
    negatives are present (callers flag that case).
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("need a non-empty 1-D vector")
    n = v.size
    total = float(np.sum(v))
    if total == 0.0:
        raise ValueError("Gini undefined for zero-mean values")
    vs = np.sort(v)
    weights = 2.0 * np.arange(n) - n + 1.0
    num = float(np.sum(weights * vs))  # equals sum_ij |v_i - v_j| / 2
    return num / (n * total)


def totals(final_state) -> tuple:
    """(sum of agent values, total resources) at the final step."""
    return float(np.sum(final_state.v)), float(final_state.z)


def resource_productivity(total_value: float, total_resources: float) -> float:
    """Total value per unit of total resources (sustainability metric)."""
    if total_resources <= 0:
        raise ValueError("total resources must be > 0")
    return total_value / total_resources


def group_objective(population, x, params) -> float:
    """Group surplus sum_i a_i * x_i**s - z * (b * z**r + c) with z = sum x."""
    a = np.asarray(population.actions, dtype=float)
    x = np.asarray(x, dtype=float)
    if a.shape != x.shape:
        raise ValueError("population and resource vectors must match in length")
    z = float(np.sum(x))
    return float(np.sum(a * x**params.s)) - z * (params.b * z**params.r + params.c)


def shape_fit(a_values, v_values) -> dict:
    """Least-squares fits of value against action: v ~ alpha*a (through the
    origin) and v ~ beta*a**2 + gamma.

    Returns coefficients and residuals relative to ||v||, used to classify
    whether a regime's converged values grow linearly or quadratically.
    """
    a = np.asarray(a_values, dtype=float)
    v = np.asarray(v_values, dtype=float)
    if a.size != v.size or a.size < 3:
        raise ValueError("need at least 3 matched (a, v) points")
    if np.all(a == a[0]):
        raise ValueError("degenerate fit: all actions identical")
    norm_v = float(np.linalg.norm(v))

    alpha = float(np.dot(a, v) / np.dot(a, a))
    lin_res = float(np.linalg.norm(v - alpha * a))

    design = np.column_stack([a * a, np.ones_like(a)])
    coef, *_ = np.linalg.lstsq(design, v, rcond=None)
    quad_res = float(np.linalg.norm(v - design @ coef))

    scale = norm_v if norm_v > 0 else 1.0
    return {
        "alpha": alpha,
        "linear_residual": lin_res,
        "linear_relative": lin_res / scale,
        "beta": float(coef[0]),
        "gamma": float(coef[1]),
        "quadratic_residual": quad_res,
        "quadratic_relative": quad_res / scale,
    }


def equity_dispersion(a_values, v_values) -> float:
    """Coefficient of variation of the value/action ratios."""
    a = np.asarray(a_values, dtype=float)
    v = np.asarray(v_values, dtype=float)
    if np.any(a <= 0):
        raise ValueError("actions must be > 0")
    ratios = v / a
    mean = float(np.mean(ratios))
    if mean == 0.0:
        raise ValueError("dispersion undefined for zero-mean ratios")
    return float(np.std(ratios)) / mean
