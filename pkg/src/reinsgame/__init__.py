"""Optimal reinsurance bargaining under strategically chosen risk aversion.

Distortion-risk-measure pricing, Pareto-optimal covers, asymmetric Nash
bargaining premiums, best-response analysis, and complete Nash / Stackelberg
equilibrium sets, each backed by independent brute-force cross-checks.
"""

from .bargaining import (
    GameSpec,
    WelfareReport,
    bargaining_product_oracle,
    nash_premium,
    optimal_gains_nonstrategic,
    total_welfare,
    welfare,
)
from .contract import (
    Contract,
    Indemnity,
    full_cover,
    is_full_cover_selection,
    null_cover,
    pareto_indemnity_general,
    pareto_indemnity_parametric,
    quantile_grid,
)
from .distributions import (
    Empirical,
    Exponential,
    Lognormal,
    LossDistribution,
    Uniform,
    parse_distribution,
)
from .errors import (
    GrammarError,
    IntegrationAccuracyError,
    OracleInapplicableError,
    ScenarioError,
)
from .game import (
    BestResponse,
    EquilibriumPoint,
    EquilibriumReport,
    GridReport,
    StackelbergResult,
    TrivialRegion,
    best_response_insurer,
    best_response_reinsurer,
    f1,
    f2,
    gamma_bar_1,
    gamma_bar_2,
    is_grid_nash_point,
    nash_equilibria,
    stackelberg,
    verify_equilibria_bruteforce,
    welfare_grid,
)
from .riskmeasure import (
    DistortionFamily,
    MeanCVaRMix,
    PayoutSlice,
    ProportionalHazard,
    TabulatedFamily,
    distortion,
    layer_values,
    parse_family,
    rho,
    rho_total,
)
from .scenario import Scenario, parse_number, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "BestResponse",
    "Contract",
    "DistortionFamily",
    "Empirical",
    "EquilibriumPoint",
    "EquilibriumReport",
    "Exponential",
    "GameSpec",
    "GrammarError",
    "GridReport",
    "Indemnity",
    "IntegrationAccuracyError",
    "Lognormal",
    "LossDistribution",
    "MeanCVaRMix",
    "OracleInapplicableError",
    "PayoutSlice",
    "ProportionalHazard",
    "Scenario",
    "ScenarioError",
    "StackelbergResult",
    "TabulatedFamily",
    "TrivialRegion",
    "Uniform",
    "WelfareReport",
    "bargaining_product_oracle",
    "best_response_insurer",
    "best_response_reinsurer",
    "distortion",
    "f1",
    "f2",
    "full_cover",
    "gamma_bar_1",
    "gamma_bar_2",
    "is_full_cover_selection",
    "is_grid_nash_point",
    "layer_values",
    "nash_equilibria",
    "nash_premium",
    "null_cover",
    "optimal_gains_nonstrategic",
    "pareto_indemnity_general",
    "pareto_indemnity_parametric",
    "parse_distribution",
    "parse_family",
    "parse_number",
    "parse_scenario",
    "quantile_grid",
    "rho",
    "rho_total",
    "stackelberg",
    "total_welfare",
    "verify_equilibria_bruteforce",
    "welfare",
    "welfare_grid",
]
