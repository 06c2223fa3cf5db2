"""Group metrics: Gini, totals, fits, dispersion.

The Gini implementation is checked against the O(n^2) pairwise definition,
exactly on integer-valued vectors (where float arithmetic is exact) and to
tight tolerance on continuous ones.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from normsim.metrics import (
    ScenarioResult,
    SUMMARY_COLUMNS,
    equity_dispersion,
    gini,
    group_objective,
    resource_productivity,
    shape_fit,
    totals,
)
from normsim.model import ModelParams
from normsim.sampling import AgentPopulation


def gini_pairwise(values):
    """Brute-force sum_ij |v_i - v_j| / (2 n^2 mean)."""
    v = np.asarray(values, dtype=float)
    n = v.size
    diff = np.abs(v[:, None] - v[None, :]).sum()
    return float(diff / (2.0 * n * v.sum()))


def test_gini_unit_cases():
    assert gini([3.0, 3.0, 3.0, 3.0]) == 0.0
    assert gini([0.0, 1.0]) == 0.5
    assert gini([1.0, 2.0, 3.0, 4.0]) == 0.25


def test_gini_matches_pairwise_exactly_on_integers():
    rng = np.random.default_rng(12)
    for _ in range(100):
        n = int(rng.integers(2, 200))
        v = rng.integers(0, 1000, size=n).astype(float)
        if v.sum() == 0:
            v[0] = 1.0
        assert gini(v) == gini_pairwise(v)


def test_gini_matches_pairwise_on_continuous():
    rng = np.random.default_rng(13)
    for _ in range(20):
        v = rng.uniform(0.01, 5.0, size=int(rng.integers(2, 300)))
        assert gini(v) == pytest.approx(gini_pairwise(v), rel=1e-12)


def test_gini_scale_invariance():
    v = np.array([0.2, 0.7, 1.3, 2.9])
    assert gini(4.0 * v) == gini(v)  # power-of-two scale: exact
    assert gini(3.7 * v) == pytest.approx(gini(v), rel=1e-12)


@settings(max_examples=100)
@given(
    hnp.arrays(
        np.float64,
        st.integers(min_value=2, max_value=30),
        elements=st.floats(min_value=0.001, max_value=100.0),
    ),
    st.randoms(),
)
def test_gini_permutation_invariance(v, rnd):
    # sorting removes order except in np.sum's rounding of the total
    idx = list(range(v.size))
    rnd.shuffle(idx)
    assert gini(v[idx]) == pytest.approx(gini(v), rel=1e-12)


def test_gini_validation():
    with pytest.raises(ValueError):
        gini([])
    with pytest.raises(ValueError):
        gini([[1.0, 2.0]])
    with pytest.raises(ValueError):
        gini([1.0, -1.0])  # zero mean


def test_gini_bounds_positive_input():
    rng = np.random.default_rng(14)
    for _ in range(20):
        v = rng.uniform(0.0, 1.0, size=50)
        assert 0.0 <= gini(v) < 1.0


class _State:
    def __init__(self, v, z):
        self.v = np.asarray(v, dtype=float)
        self.z = z


def test_totals_and_productivity():
    st_ = _State([0.1, 0.2, 0.3], 1.5)
    tv, tz = totals(st_)
    assert tv == pytest.approx(0.6)
    assert tz == 1.5
    assert resource_productivity(tv, tz) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        resource_productivity(1.0, 0.0)


def test_group_objective_hand_value():
    # two agents, b=0 so the price is flat c=1:
    # sum a*sqrt(x) - z*c = 2*(0.5*0.25) - 0.125
    params = ModelParams(b=0.0, n_agents=2)
    pop = AgentPopulation(np.array([0.5, 0.5]), "normal", 0)
    x = np.array([0.0625, 0.0625])
    assert group_objective(pop, x, params) == pytest.approx(0.25 - 0.125, rel=1e-15)


def test_group_objective_shape_mismatch():
    params = ModelParams(n_agents=2)
    pop = AgentPopulation(np.array([0.5, 0.5]), "normal", 0)
    with pytest.raises(ValueError):
        group_objective(pop, np.array([0.1]), params)


def test_shape_fit_recovers_exact_linear():
    a = np.linspace(0.2, 1.0, 40)
    fit = shape_fit(a, 2.5 * a)
    assert fit["alpha"] == pytest.approx(2.5, rel=1e-12)
    assert fit["linear_relative"] < 1e-12


def test_shape_fit_recovers_exact_quadratic():
    a = np.linspace(0.2, 1.0, 40)
    fit = shape_fit(a, 3.0 * a * a + 0.7)
    assert fit["beta"] == pytest.approx(3.0, rel=1e-9)
    assert fit["gamma"] == pytest.approx(0.7, rel=1e-9)
    assert fit["quadratic_relative"] < 1e-10


def test_shape_fit_discriminates():
    a = np.linspace(0.2, 1.0, 40)
    lin = shape_fit(a, 1.3 * a)
    quad = shape_fit(a, 0.9 * a * a + 0.1)
    assert lin["linear_relative"] < lin["quadratic_relative"] or lin["quadratic_relative"] < 1e-6
    assert quad["quadratic_relative"] < quad["linear_relative"]


def test_shape_fit_validation():
    with pytest.raises(ValueError):
        shape_fit([1.0, 2.0], [1.0, 2.0])  # too few points
    with pytest.raises(ValueError):
        shape_fit([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])  # degenerate


def test_equity_dispersion():
    a = np.array([0.4, 0.5, 0.6])
    assert equity_dispersion(a, 2.0 * a) == pytest.approx(0.0, abs=1e-15)
    uneven = np.array([0.8, 1.0, 1.8])
    assert equity_dispersion(a, uneven) > 0.1
    with pytest.raises(ValueError):
        equity_dispersion(np.array([0.0, 0.5, 0.5]), uneven)


def test_result_row_follows_column_order():
    res = ScenarioResult(
        regime="fixed",
        distribution="normal",
        seed=1,
        graph_seed=2,
        norm_param=0.01,
        total_value=1.0,
        total_resources=2.0,
        resource_productivity=0.5,
        gini_values=0.1,
        gini_actions=0.11,
        values_negative=False,
        normative_cost=1.0,
        final_price=1.01,
    )
    row = res.row()
    assert len(row) == len(SUMMARY_COLUMNS)
    assert row[SUMMARY_COLUMNS.index("regime")] == "fixed"
    assert row[SUMMARY_COLUMNS.index("gini_actions")] == 0.11
