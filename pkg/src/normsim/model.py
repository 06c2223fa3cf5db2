"""Closed-form economics of the resource-sharing game.

Price, utility, the three tax-like value functions, and the best response
of a single agent given the current price and norm charge.  Everything here
is a pure function of its arguments; the recursion lives in `dynamics`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "NormRegime",
    "Progressive",
    "Proportional",
    "Fixed",
    "unit_price",
    "utility",
    "value",
    "best_response",
    "equilibrium_value_oracle",
]


@dataclass(frozen=True)
class ModelParams:
    """Global constants of the game.

    b, c, r parameterize the congestion price p = b * z**r + c; s < 1 is the
    diminishing-returns exponent of production; delta is the additive step of
    the norm-fostering update.  Defaults are the reference experiment setting.
    """

    b: float = 0.001
    c: float = 1.0
    r: float = 2.0
    s: float = 0.5
    delta: float = 0.05
    n_agents: int = 100
    t_max: int = 100

    def __post_init__(self):
        if not self.r > 1:
            raise ValueError(f"congestion exponent r must be > 1, got {self.r}")
        if not 0 < self.s < 1:
            raise ValueError(f"returns exponent s must be in (0, 1), got {self.s}")
        if self.b < 0:
            raise ValueError(f"price coefficient b must be >= 0, got {self.b}")
        if not self.c > 0:
            raise ValueError(f"price constant c must be > 0, got {self.c}")
        if not self.delta > 0:
            raise ValueError(f"norm step delta must be > 0, got {self.delta}")
        if self.n_agents < 2:
            raise ValueError(f"need at least 2 agents, got {self.n_agents}")
        if self.t_max < 0:
            raise ValueError(f"iteration count t_max must be >= 0, got {self.t_max}")


class NormRegime:
    """Base tag for the three norm regimes."""

    tag: str = "base"


@dataclass(frozen=True)
class Progressive(NormRegime):
    """Per-agent per-unit charge, fostered by the equity comparison."""

    tag = "progressive"


@dataclass(frozen=True)
class Proportional(NormRegime):
    """Shared per-unit charge n2 on resource use (consumption-tax-like)."""

    n2: float = 0.0
    tag = "proportional"

    def __post_init__(self):
        if self.n2 < 0:
            raise ValueError(f"proportional coefficient n2 must be >= 0, got {self.n2}")


@dataclass(frozen=True)
class Fixed(NormRegime):
    """Shared lump charge n3 independent of resource use."""

    n3: float = 0.0
    tag = "fixed"

    def __post_init__(self):
        if self.n3 < 0:
            raise ValueError(f"fixed charge n3 must be >= 0, got {self.n3}")


def unit_price(z_effective, params: ModelParams):
    """Resource unit price b * z**r + c at total demand z_effective (>= 0)."""
    z = np.asarray(z_effective, dtype=float)
    if np.any(z < 0):
        raise ValueError("total resource must be >= 0")
    p = params.b * z**params.r + params.c
    return float(p) if np.isscalar(z_effective) else p


def utility(a, x, p, params: ModelParams):
    """Profit a * x**s - p * x from using resource x at price p."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(a <= 0):
        raise ValueError("action must be > 0")
    if np.any(x < 0):
        raise ValueError("used resource must be >= 0")
    if np.any(np.asarray(p) <= 0):
        raise ValueError("price must be > 0")
    u = a * x**params.s - p * x
    return float(u) if u.ndim == 0 else u


def value(regime: NormRegime, a, x, p, norm, params: ModelParams):
    """Utility minus the regime's normative cost.

    `norm` is the per-unit coefficient for Progressive/Proportional (cost
    norm * x) and the lump charge for Fixed (cost norm regardless of x).
    """
    if np.any(np.asarray(norm) < 0):
        raise ValueError("norm charge must be >= 0")
    u = utility(a, x, p, params)
    if isinstance(regime, Fixed):
        v = u - np.asarray(norm, dtype=float)
    else:
        v = u - np.asarray(norm, dtype=float) * np.asarray(x, dtype=float)
    return float(v) if np.ndim(v) == 0 else v


def _power(base, expo: float):
    # s = 0.5 gives an integer exponent; squaring directly keeps the
    # quarter-scaling identity x(2q) = x(q)/4 exact in floating point.
    if expo == 2.0:
        return base * base
    if expo == 1.0:
        return base
    return base**expo


def best_response(a, p, linear_norm, params: ModelParams):
    """Value-maximizing resource use x = (s*a / (p + linear_norm))**(1/(1-s)).

    `linear_norm` is the per-unit charge seen by the agent: the progressive
    coefficient, the shared n2, or 0 under the fixed regime (a lump charge
    does not move the maximizer).
    """
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise ValueError("action must be > 0")
    q = np.asarray(p, dtype=float) + np.asarray(linear_norm, dtype=float)
    if np.any(q <= 0):
        raise ValueError("price plus per-unit norm must be > 0")
    x = _power(params.s * a / q, 1.0 / (1.0 - params.s))
    return float(x) if np.ndim(x) == 0 else x


def equilibrium_value_oracle(a, p, linear_norm, fixed_charge, params: ModelParams):
    """Value attained at the best response, in closed form.

    Substituting the best response back into the value function gives
    (1-s) * a * (s*a / (p + linear_norm))**(s/(1-s)) - fixed_charge,
    which for s = 0.5 is the quadratic s*(1-s)*a**2 / (p + linear_norm).
    """
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise ValueError("action must be > 0")
    q = np.asarray(p, dtype=float) + np.asarray(linear_norm, dtype=float)
    if np.any(q <= 0):
        raise ValueError("price plus per-unit norm must be > 0")
    s = params.s
    v = (1.0 - s) * a * _power(s * a / q, s / (1.0 - s)) - fixed_charge
    return float(v) if np.ndim(v) == 0 else v
