"""Closed-form mean-variance portfolios and the efficient diversification measure.

EDM(w) = sum_i w_i s2_i - w' S w: the weighted average of asset variances
minus the portfolio variance. Under MV utility the gain from holding ``w``
instead of the individual assets is exactly (gamma / 2) * EDM(w).

Short sales are unrestricted throughout; weights may be negative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionMismatch, InputError, NonPositiveGamma, TangentUndefined
from .market import AssetUniverse, ScalarSummary, solve_spd

BUDGET_ATOL = 1e-10
TANGENT_RTOL = 1e-10


class PortfolioKind(str, enum.Enum):
    RISKY_ONLY = "risky_only"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class PortfolioWeights:
    """Risky weights plus, for composite portfolios, a risk-free leg.

    For ``COMPOSITE`` the risky vector is already scaled by ``1 - w_f``, so
    treating the risk-free asset as a zero-variance, zero-covariance asset
    makes every risky-only formula apply unchanged.
    """

    weights: NDArray[np.float64]
    kind: PortfolioKind = PortfolioKind.RISKY_ONLY
    risk_free_weight: float = 0.0
    risk_free_rate: Optional[float] = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "kind", PortfolioKind(self.kind))
        if self.kind is PortfolioKind.RISKY_ONLY and self.risk_free_weight != 0.0:
            raise InputError("risky-only portfolio cannot hold the risk-free asset")
        # absolute budget tolerance, widened only by the gross exposure
        gross = max(1.0, float(np.abs(w).sum()) + abs(self.risk_free_weight))
        if abs(self.total - 1.0) > BUDGET_ATOL * gross:
            raise InputError(f"weights sum to {self.total!r}, expected 1")

    @property
    def total(self) -> float:
        return float(self.weights.sum()) + self.risk_free_weight


@dataclass(frozen=True)
class RiskTolerance:
    tau: float

    def __post_init__(self):
        tau = float(self.tau)
        if not np.isfinite(tau) or tau < 0:
            raise InputError(f"risk tolerance must be finite and >= 0, got {self.tau}")
        object.__setattr__(self, "tau", tau)

    @property
    def gamma(self) -> float:
        if self.tau == 0:
            raise NonPositiveGamma("risk aversion is undefined at tau = 0")
        return 1.0 / self.tau


def _tau(tau) -> float:
    return tau.tau if isinstance(tau, RiskTolerance) else RiskTolerance(tau).tau


def _risky_leg(u: AssetUniverse, w: PortfolioWeights) -> NDArray[np.float64]:
    if w.weights.shape != (u.n,):
        raise DimensionMismatch(f"{w.weights.shape[0]} weights for {u.n} assets")
    return w.weights


def optimal_weights(s: ScalarSummary, u: AssetUniverse, tau) -> PortfolioWeights:
    """MV-optimal risky portfolio for risk tolerance ``tau`` (= 1 / gamma).

    At ``tau = 0`` this is the global minimum-variance portfolio.
    """
    t = _tau(tau)
    x, y = solve_spd(u.sigma, np.column_stack([u.mu, np.ones(u.n)])).T
    w = t * (x - (s.B / s.C) * y) + y / s.C
    return PortfolioWeights(w)


def portfolio_variance(u: AssetUniverse, w: PortfolioWeights) -> float:
    v = _risky_leg(u, w)
    return float(v @ u.sigma @ v)


def expected_return(u: AssetUniverse, w: PortfolioWeights) -> float:
    r = float(_risky_leg(u, w) @ u.mu)
    if w.kind is PortfolioKind.COMPOSITE and w.risk_free_weight != 0.0:
        rate = w.risk_free_rate if w.risk_free_rate is not None else u.risk_free
        if rate is None:
            raise InputError("composite portfolio needs a risk-free rate")
        r += w.risk_free_weight * rate
    return r


def mv_utility(u: AssetUniverse, w: PortfolioWeights, gamma: float) -> float:
    """E(R_w) - (gamma / 2) V(R_w)."""
    if not gamma > 0:
        raise NonPositiveGamma(f"gamma must be > 0, got {gamma}")
    return expected_return(u, w) - 0.5 * gamma * portfolio_variance(u, w)


def edm(u: AssetUniverse, w: PortfolioWeights) -> float:
    v = _risky_leg(u, w)
    return float(v @ u.variances) - portfolio_variance(u, w)


def edm_decomposition(u: AssetUniverse, w: PortfolioWeights) -> NDArray[np.float64]:
    """Per-asset terms w_i (s2_i - s2(w)); they sum to :func:`edm`.

    Composite portfolios get one extra trailing entry for the risk-free asset,
    whose own variance is zero: w_f * (0 - s2(w)).
    """
    v = _risky_leg(u, w)
    pv = portfolio_variance(u, w)
    terms = v * (u.variances - pv)
    if w.kind is PortfolioKind.COMPOSITE:
        terms = np.append(terms, -w.risk_free_weight * pv)
    return terms


def diversification_gain(u: AssetUniverse, w: PortfolioWeights, gamma: float) -> float:
    if not gamma > 0:
        raise NonPositiveGamma(f"gamma must be > 0, got {gamma}")
    return 0.5 * gamma * edm(u, w)


def diversification_gain_direct(u: AssetUniverse, w: PortfolioWeights, gamma: float) -> float:
    """U(sum_i w_i R_i) - sum_i w_i U(R_i), evaluated term by term."""
    if not gamma > 0:
        raise NonPositiveGamma(f"gamma must be > 0, got {gamma}")
    v = _risky_leg(u, w)
    singles = u.mu - 0.5 * gamma * u.variances
    held = float(v @ singles)
    if w.kind is PortfolioKind.COMPOSITE and w.risk_free_weight != 0.0:
        rate = w.risk_free_rate if w.risk_free_rate is not None else u.risk_free
        held += w.risk_free_weight * rate
    return mv_utility(u, w, gamma) - held


def _check_tangent(s: ScalarSummary, mu_f: float) -> float:
    excess = s.B - s.C * mu_f
    if abs(excess) <= TANGENT_RTOL * max(abs(s.B), s.C * abs(mu_f), 1.0):
        raise TangentUndefined(
            f"mu_f = {mu_f} equals the minimum-variance return B/C = {s.B / s.C:.10g}"
        )
    return excess


def tangent_weights(s: ScalarSummary, u: AssetUniverse, mu_f: float) -> PortfolioWeights:
    excess = _check_tangent(s, mu_f)
    z = solve_spd(u.sigma, u.mu - mu_f * np.ones(u.n))
    return PortfolioWeights(z / excess)


def risk_free_weight(s: ScalarSummary, mu_f: float, tau) -> float:
    return 1.0 - (s.B - s.C * mu_f) * _tau(tau)


def composite_portfolio(s: ScalarSummary, u: AssetUniverse, mu_f: float, tau) -> PortfolioWeights:
    """Risk-free leg w_f plus (1 - w_f) times the tangent portfolio."""
    tg = tangent_weights(s, u, mu_f)
    wf = risk_free_weight(s, mu_f, tau)
    return PortfolioWeights(
        (1.0 - wf) * tg.weights,
        kind=PortfolioKind.COMPOSITE,
        risk_free_weight=wf,
        risk_free_rate=float(mu_f),
    )
