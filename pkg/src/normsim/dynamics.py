"""Recursive best-response dynamics with norm fostering.

One repetition t -> t+1, executed synchronously for all agents:

  1. total demand     z[t+1] = sum_i x_i[t]
  2. smoothed price   p[t+1] = unit_price((z[t] + z[t+1]) / 2)
  3. (progressive)    each agent compares its value/action ratio with the
                      mean ratio of its network neighbors at step t and
                      moves its norm coefficient by +delta if it is at or
                      above that mean, -delta otherwise, clamped at 0
  4. best responses   x_i[t+1] from the new price and norm charge
  5. values           v_i[t+1] at the new allocation

Averaging consecutive totals in step 2 damps price swings but leaves the
stationary price exactly b * z**r + c.  Steps 3-4 read only the step-t
snapshot, so results do not depend on agent order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    Fixed,
    ModelParams,
    NormRegime,
    Progressive,
    Proportional,
    best_response,
    unit_price,
    value,
)

__all__ = [
    "Z_INIT",
    "SimulationState",
    "SimulationTrace",
    "NumericError",
    "CalibrationError",
    "init_state",
    "smoothed_price",
    "norm_update",
    "step",
    "run",
    "fixed_point_residual",
    "solve_total_resource",
    "total_normative_cost",
    "calibrate_proportional",
    "calibrate_fixed",
]

# seed value of the total resource before any allocation exists
Z_INIT = 1.0


class NumericError(RuntimeError):
    """A non-finite quantity appeared during the recursion."""


class CalibrationError(RuntimeError):
    """The normative-cost target could not be bracketed or met."""


def _as_actions(population) -> np.ndarray:
    """Accept an AgentPopulation or a bare array of action parameters."""
    a = np.asarray(getattr(population, "actions", population), dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("actions must be a non-empty 1-d array")
    if not np.all(a > 0):
        raise ValueError("action parameters must be positive")
    return a


def _norm_vector(regime: NormRegime, n_agents: int) -> np.ndarray:
    """Initial per-agent norm coefficients (progressive starts at zero)."""
    if isinstance(regime, Progressive):
        return np.zeros(n_agents)
    if isinstance(regime, Proportional):
        return np.full(n_agents, regime.n2)
    if isinstance(regime, Fixed):
        return np.full(n_agents, regime.n3)
    raise TypeError(f"unknown regime {regime!r}")


def _linear_norm(regime: NormRegime, norms: np.ndarray):
    """Per-unit charge entering the best response; lump charges drop out."""
    return 0.0 if isinstance(regime, Fixed) else norms


@dataclass
class SimulationState:
    """Snapshot of one repetition.

    z is the total demand that set the current price: the seed value at
    t = 0, afterwards the sum of the previous step's allocations.
    """

    t: int
    x: np.ndarray
    n: np.ndarray
    v: np.ndarray
    z: float
    p: float

    def require_finite(self) -> None:
        finite = (
            np.isfinite(self.z)
            and np.isfinite(self.p)
            and np.all(np.isfinite(self.x))
            and np.all(np.isfinite(self.n))
            and np.all(np.isfinite(self.v))
        )
        if not finite:
            raise NumericError(f"non-finite state at step {self.t}")


@dataclass
class SimulationTrace:
    """Stacked history of a run; row t of each array is the state at step t."""

    actions: np.ndarray
    z: np.ndarray  # (T+1,)
    p: np.ndarray  # (T+1,)
    x: np.ndarray  # (T+1, N)
    n: np.ndarray  # (T+1, N)
    v: np.ndarray  # (T+1, N)

    @property
    def t_final(self) -> int:
        return self.z.size - 1

    def state_at(self, t: int) -> SimulationState:
        if not 0 <= t <= self.t_final:
            raise ValueError(f"step {t} outside trace range [0, {self.t_final}]")
        return SimulationState(
            t, self.x[t], self.n[t], self.v[t], float(self.z[t]), float(self.p[t])
        )

    def final_state(self) -> SimulationState:
        return self.state_at(self.t_final)


def init_state(params: ModelParams, population, regime: NormRegime) -> SimulationState:
    """State at step 0: seed total Z_INIT, initial norms, best responses and
    values at the seed price."""
    a = _as_actions(population)
    if a.size != params.n_agents:
        raise ValueError(f"population size {a.size} != n_agents {params.n_agents}")
    n0 = _norm_vector(regime, params.n_agents)
    p0 = unit_price(Z_INIT, params)
    x0 = best_response(a, p0, _linear_norm(regime, n0), params)
    v0 = value(regime, a, x0, p0, n0, params)
    state = SimulationState(0, x0, n0, v0, Z_INIT, p0)
    state.require_finite()
    return state


def smoothed_price(z_prev: float, z_curr: float, params: ModelParams) -> float:
    """Price at the mean of two consecutive totals; equals the plain price
    whenever the total is stationary."""
    if z_prev < 0 or z_curr < 0:
        raise ValueError("totals must be >= 0")
    return unit_price((z_prev + z_curr) / 2.0, params)


def norm_update(state: SimulationState, actions: np.ndarray, graph, params: ModelParams) -> np.ndarray:
    """One synchronous equity-comparison update of per-agent norms.

    An agent whose value/action ratio is at or above the mean ratio of its
    neighbors pays delta more per unit next step, the rest pay delta less,
    never below zero.  Isolated agents keep their coefficient.
    """
    if graph.n_nodes != state.n.size:
        raise ValueError(f"graph has {graph.n_nodes} nodes for {state.n.size} agents")
    ratios = state.v / actions
    flat, owners = graph.flat_neighbors()
    sums = np.bincount(owners, weights=ratios[flat], minlength=graph.n_nodes)
    degrees = graph.degrees
    linked = degrees > 0
    neighbor_mean = np.zeros(graph.n_nodes)
    neighbor_mean[linked] = sums[linked] / degrees[linked]
    shift = np.where(ratios >= neighbor_mean, params.delta, -params.delta)
    return np.maximum(np.where(linked, state.n + shift, state.n), 0.0)


def step(
    state: SimulationState,
    actions: np.ndarray,
    regime: NormRegime,
    params: ModelParams,
    graph=None,
) -> SimulationState:
    """Advance one repetition; graph is required only for Progressive."""
    z_new = float(state.x.sum())
    # divergent parameter sets overflow here; require_finite turns that
    # into a NumericError instead of a warning storm
    with np.errstate(over="ignore", invalid="ignore"):
        p_new = smoothed_price(state.z, z_new, params)
        if isinstance(regime, Progressive):
            if graph is None:
                raise ValueError("progressive runs need a social graph")
            n_new = norm_update(state, actions, graph, params)
        else:
            n_new = state.n
        x_new = best_response(actions, p_new, _linear_norm(regime, n_new), params)
        v_new = value(regime, actions, x_new, p_new, n_new, params)
    out = SimulationState(state.t + 1, x_new, n_new, v_new, z_new, p_new)
    out.require_finite()
    return out


def run(
    params: ModelParams,
    population,
    regime: NormRegime,
    graph=None,
    early_stop_tol: float | None = None,
) -> SimulationTrace:
    """Run the recursion for params.t_max repetitions and stack the history.

    With early_stop_tol set, the run ends once the total demand moves less
    than the tolerance in one step (progressive norms keep drifting, so
    their runs rarely stop early).  Raises NumericError as soon as any
    quantity turns non-finite.
    """
    a = _as_actions(population)
    state = init_state(params, population, regime)
    states = [state]
    for _ in range(params.t_max):
        new = step(state, a, regime, params, graph)
        states.append(new)
        stalled = early_stop_tol is not None and abs(new.z - state.z) < early_stop_tol
        state = new
        if stalled:
            break
    return SimulationTrace(
        actions=a,
        z=np.array([s.z for s in states]),
        p=np.array([s.p for s in states]),
        x=np.stack([s.x for s in states]),
        n=np.stack([s.n for s in states]),
        v=np.stack([s.v for s in states]),
    )


def fixed_point_residual(actions, z: float, linear_norm, params: ModelParams) -> float:
    """Self-consistency gap |sum_i BR_i(price(z)) - z| of a candidate total."""
    demand = best_response(np.asarray(actions, dtype=float), unit_price(z, params), linear_norm, params)
    return abs(float(np.sum(demand)) - z)


def solve_total_resource(
    actions,
    linear_norm,
    params: ModelParams,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Stationary total demand z = sum_i BR_i(price(z)), found by bisection.

    Total demand at a given price falls as z rises while the left side grows,
    so the gap function is strictly decreasing and the root unique.
    """
    a = _as_actions(actions)

    def gap(z: float) -> float:
        demand = best_response(a, unit_price(z, params), linear_norm, params)
        return float(np.sum(demand)) - z

    lo, hi = 0.0, 1.0
    while gap(hi) > 0:
        lo, hi = hi, hi * 2.0
        if hi > 1e12:
            raise NumericError("stationary total demand exceeds 1e12")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def total_normative_cost(regime: NormRegime, state: SimulationState) -> float:
    """Total norm payment at a state: sum of n_i * x_i per-unit charges, or
    the sum of lump charges under Fixed."""
    if isinstance(regime, Fixed):
        return float(state.n.sum())
    return float((state.n * state.x).sum())


def calibrate_fixed(target: float, params: ModelParams) -> Fixed:
    """Lump charge splitting the target cost evenly: n3 = target / N."""
    if target < 0:
        raise ValueError("target cost must be >= 0")
    return Fixed(n3=target / params.n_agents)


def calibrate_proportional(
    params: ModelParams,
    population,
    target: float,
    tol_rel: float = 1e-3,
    n2_max: float = 1e3,
    max_iter: int = 200,
) -> Proportional:
    """Shared per-unit charge whose run-end total cost matches the target.

    The cost n2 * z(n2) rises with small n2 but falls once the charge chokes
    demand, so the search doubles n2 along the rising branch and bisects the
    first crossing.  Raises CalibrationError if the cost peaks below the
    target or no crossing exists under n2_max.
    """
    if target <= 0:
        raise ValueError("target cost must be > 0")
    a = _as_actions(population)

    def cost(n2: float) -> float:
        trace = run(params, a, Proportional(n2=n2), graph=None)
        return total_normative_cost(Proportional(n2=n2), trace.final_state())

    tol = tol_rel * target
    lo, lo_cost = 0.0, 0.0
    n2 = 1e-3
    prev_cost = 0.0
    while True:
        c = cost(n2)
        if abs(c - target) <= tol:
            return Proportional(n2=n2)
        if c >= target:
            break
        if c < prev_cost:
            raise CalibrationError(
                f"normative cost peaked near {prev_cost:.6g} below target {target:.6g}"
            )
        lo, lo_cost, prev_cost = n2, c, c
        n2 *= 2.0
        if n2 > n2_max:
            raise CalibrationError(f"no charge under {n2_max:g} reaches target {target:.6g}")
    hi = n2
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        c = cost(mid)
        if abs(c - target) <= tol:
            return Proportional(n2=mid)
        if c < target:
            lo = mid
        else:
            hi = mid
    raise CalibrationError(
        f"bisection stalled at bracket [{lo:.6g}, {hi:.6g}] for target {target:.6g}"
    )
