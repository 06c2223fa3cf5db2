"""Closed-form layer: price, utility, value, best response.

The best response and the equilibrium value have independent oracles here:
a bounded 1-D numeric maximizer (scipy) and hand-computed examples.
"""

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from normsim.model import (
    Fixed,
    ModelParams,
    Progressive,
    Proportional,
    best_response,
    equilibrium_value_oracle,
    unit_price,
    utility,
    value,
)

PARAMS = ModelParams()


def test_unit_price_hand_values():
    # b=0.001, c=1, r=2: p(z) = 0.001 z^2 + 1
    assert unit_price(0.0, PARAMS) == 1.0
    assert unit_price(1.0, PARAMS) == 1.001
    assert unit_price(10.0, PARAMS) == 1.1
    p = ModelParams(b=0.5, c=2.0, r=3.0)
    assert unit_price(2.0, p) == 0.5 * 8.0 + 2.0


def test_unit_price_vectorized():
    z = np.array([0.0, 1.0, 10.0])
    np.testing.assert_array_equal(unit_price(z, PARAMS), [1.0, 1.001, 1.1])


def test_unit_price_rejects_negative_total():
    with pytest.raises(ValueError):
        unit_price(-0.1, PARAMS)


def test_utility_hand_value():
    # a=0.5, x=0.04, p=1.001: 0.5*0.2 - 1.001*0.04
    u = utility(0.5, 0.04, 1.001, PARAMS)
    assert u == pytest.approx(0.1 - 0.04004, rel=1e-15)


def test_utility_domain_errors():
    with pytest.raises(ValueError):
        utility(0.0, 0.1, 1.0, PARAMS)
    with pytest.raises(ValueError):
        utility(0.5, -0.1, 1.0, PARAMS)
    with pytest.raises(ValueError):
        utility(0.5, 0.1, 0.0, PARAMS)


def test_value_per_unit_vs_lump():
    a, x, p = 0.5, 0.04, 1.001
    u = utility(a, x, p, PARAMS)
    assert value(Progressive(), a, x, p, 0.3, PARAMS) == pytest.approx(u - 0.3 * x)
    assert value(Proportional(0.3), a, x, p, 0.3, PARAMS) == pytest.approx(u - 0.3 * x)
    # lump charge does not scale with x
    assert value(Fixed(0.3), a, x, p, 0.3, PARAMS) == pytest.approx(u - 0.3)


def test_value_rejects_negative_norm():
    with pytest.raises(ValueError):
        value(Proportional(0.0), 0.5, 0.04, 1.0, -0.01, PARAMS)


def test_best_response_closed_form_s_half():
    # s=0.5: x* = (a / (2q))^2
    a, p, n = 0.5, 1.001, 0.2
    q = p + n
    assert best_response(a, p, n, PARAMS) == pytest.approx((0.5 * a / q) ** 2, rel=1e-15)


def test_best_response_quarter_scaling_exact():
    # doubling the effective price quarters the response, exactly at s=0.5
    a = 0.7
    x1 = best_response(a, 1.0, 0.0, PARAMS)
    x2 = best_response(a, 2.0, 0.0, PARAMS)
    assert x2 == x1 / 4.0


def test_best_response_matches_numeric_maximizer():
    rng = np.random.default_rng(42)
    for _ in range(100):
        a = rng.uniform(0.1, 3.0)
        p = rng.uniform(0.5, 3.0)
        n = rng.uniform(0.0, 1.0)
        xcf = best_response(a, p, n, PARAMS)
        res = minimize_scalar(
            lambda x: -(a * np.sqrt(x) - (p + n) * x),
            bounds=(0.0, 16.0),
            method="bounded",
            options={"xatol": 1e-13},
        )
        assert res.x == pytest.approx(xcf, rel=1e-6)


def test_equilibrium_value_matches_value_at_best_response():
    rng = np.random.default_rng(7)
    a = rng.uniform(0.1, 3.0, size=500)
    p = rng.uniform(0.5, 3.0, size=500)
    n = rng.uniform(0.0, 1.0, size=500)
    x = best_response(a, p, n, PARAMS)
    v = value(Proportional(0.0), a, x, p, n, PARAMS)
    np.testing.assert_allclose(v, equilibrium_value_oracle(a, p, n, 0.0, PARAMS), rtol=1e-12)


def test_equilibrium_value_s_half_quadratic():
    # v* = a^2 / (4q) - fixed charge
    a, p, n, f = 0.8, 1.2, 0.1, 0.05
    v = equilibrium_value_oracle(a, p, n, f, PARAMS)
    assert v == pytest.approx(0.25 * a * a / (p + n) - f, rel=1e-15)


def test_equilibrium_value_general_s():
    # numeric maximum of a*x^s - q*x for s != 0.5
    params = ModelParams(s=0.7)
    a, p, n = 1.3, 1.1, 0.2
    q = p + n
    res = minimize_scalar(
        lambda x: -(a * x**0.7 - q * x),
        bounds=(0.0, 10.0),
        method="bounded",
        options={"xatol": 1e-13},
    )
    assert best_response(a, p, n, params) == pytest.approx(res.x, rel=1e-6)
    assert equilibrium_value_oracle(a, p, n, 0.0, params) == pytest.approx(-res.fun, rel=1e-9)


def test_fixed_charge_ignored_by_best_response():
    a, p = 0.5, 1.001
    assert best_response(a, p, 0.0, PARAMS) == best_response(a, p, 0.0, ModelParams(t_max=7))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(r=1.0),
        dict(r=0.5),
        dict(s=0.0),
        dict(s=1.0),
        dict(s=1.5),
        dict(b=-0.001),
        dict(c=0.0),
        dict(delta=0.0),
        dict(n_agents=1),
        dict(t_max=-1),
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


def test_params_allow_zero_iterations():
    # T=0 is a legal init-only run
    assert ModelParams(t_max=0).t_max == 0


def test_regime_validation():
    with pytest.raises(ValueError):
        Proportional(-0.1)
    with pytest.raises(ValueError):
        Fixed(-0.1)
    assert Progressive().tag == "progressive"
    assert Proportional(0.2).tag == "proportional"
    assert Fixed(0.1).tag == "fixed"
