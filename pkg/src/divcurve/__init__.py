"""Closed-form mean-variance diversification curves.

The efficient diversification measure EDM(w) = sum_i w_i s2_i - w' S w is
traced along the MV efficient set, as a function of risk tolerance and of
portfolio variance, with and without a risk-free asset.
"""

__version__ = "0.1.0"

from .analysis import (
    Plane,
    Regime,
    RegimeLabel,
    Setting,
    classify_riskfree,
    classify_risky,
    edm_of_tau_riskfree,
    edm_of_tau_risky,
    edm_of_variance_riskfree,
    edm_of_variance_risky,
    sample_curve,
    tau_from_variance,
    variance_from_tau,
)
from .market import (
    AssetUniverse,
    ReturnsSample,
    ScalarSummary,
    SharpeScalar,
    compute_scalars,
    estimate_universe,
    load_universe,
    paper4_universe,
    sharpe_scalar,
    solve_spd,
    validate_universe,
)
from .portfolio import (
    PortfolioKind,
    PortfolioWeights,
    RiskTolerance,
    composite_portfolio,
    edm,
    edm_decomposition,
    optimal_weights,
    portfolio_variance,
    tangent_weights,
)
