"""Seedable simulations of resource sharing under three norm regimes.

Agents share a priced resource, each maximizing a value function (utility
minus a norm charge).  A progressive charge is fostered per agent through
equity comparison over a social network; proportional and fixed charges are
calibrated so all three regimes collect the same total, making sustainability
(resource productivity) and fairness (Gini of values) comparable across
regimes and across normal versus power-law action distributions.
"""

from .dynamics import (
    CalibrationError,
    NumericError,
    SimulationState,
    SimulationTrace,
    calibrate_fixed,
    calibrate_proportional,
    fixed_point_residual,
    init_state,
    norm_update,
    run,
    smoothed_price,
    solve_total_resource,
    step,
    total_normative_cost,
)
from .experiment import (
    ConfigError,
    ScenarioConfig,
    make_config,
    read_config_file,
    regenerate_derived,
    run_matrix,
    run_scenario,
)
from .metrics import (
    SUMMARY_COLUMNS,
    ScenarioResult,
    equity_dispersion,
    gini,
    group_objective,
    resource_productivity,
    shape_fit,
    totals,
)
from .model import (
    Fixed,
    ModelParams,
    NormRegime,
    Progressive,
    Proportional,
    best_response,
    equilibrium_value_oracle,
    unit_price,
    utility,
    value,
)
from .network import (
    SocialGraph,
    degree_histogram,
    generate_ba,
    load_edgelist,
    save_edgelist,
)
from .sampling import (
    AgentPopulation,
    Histogram,
    histogram,
    powerlaw_min,
    powerlaw_quantile,
    sample_normal_actions,
    sample_powerlaw_actions,
)

__version__ = "0.1.0"
