"""Brute-force oracles for cross-checking the closed forms.

None of these use the analytic derivatives or vertex formulas they are meant
to check: maxima come from grid search, optimality from random perturbation,
slopes from central differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import (
    Plane,
    Setting,
    d_edm_d_tau_riskfree,
    d_edm_d_tau_risky,
    d_edm_d_variance,
    domain_floor,
    edm_function,
)
from .errors import BoundarySingularity, InputError
from .market import AssetUniverse, ScalarSummary, SharpeScalar, compute_scalars
from .portfolio import PortfolioWeights, mv_utility, optimal_weights

PERTURBATION_SCALES = (1e-3, 1e-1)
UTILITY_ATOL = 1e-12
FD_ATOL_TAU = 1e-6
FD_ATOL_VARIANCE = 1e-4


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int = 4001
    perturbation_count: int = 100
    fd_step: float = 1e-5
    seed: int = 20240611

    def __post_init__(self):
        if self.grid_points < 101:
            raise InputError("grid_points must be >= 101")
        if self.perturbation_count < 100:
            raise InputError("perturbation_count must be >= 100")
        if not self.fd_step > 0:
            raise InputError("fd_step must be positive")
        if self.seed < 0 or self.seed >= 2**64:
            raise InputError("seed must be a 64-bit non-negative integer")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def random_universe(rng: np.random.Generator, n: int) -> AssetUniverse:
    """Sigma = M'M + 0.1 I with M ~ U[-1, 1]; mu ~ U[0, 0.2]; D > 0 enforced."""
    while True:
        m = rng.uniform(-1.0, 1.0, size=(n, n))
        sigma = m.T @ m + 0.1 * np.eye(n)
        sigma = 0.5 * (sigma + sigma.T)
        mu = rng.uniform(0.0, 0.2, size=n)
        u = AssetUniverse([f"a{i}" for i in range(n)], mu, sigma)
        if not compute_scalars(u).is_degenerate:
            return u


def random_universes(count: int, seed: int, sizes=range(2, 9)) -> list[AssetUniverse]:
    rng = np.random.default_rng(seed)
    sizes = list(sizes)
    return [random_universe(rng, sizes[k % len(sizes)]) for k in range(count)]


def grid_argmax_edm_tau(
    s: ScalarSummary,
    setting: Setting,
    domain: tuple[float, float],
    cfg: OracleConfig = OracleConfig(),
    sh: Optional[SharpeScalar] = None,
    mu_f: Optional[float] = None,
) -> float:
    """tau at the largest sampled EDM on a uniform grid over ``domain``."""
    lo, hi = domain
    if not (lo >= 0 and hi > lo):
        raise InputError(f"bad domain {domain}")
    f = edm_function(s, setting, Plane.TAU, sh=sh, mu_f=mu_f)
    grid = np.linspace(lo, hi, cfg.grid_points)
    values = np.array([f(t) for t in grid])
    return float(grid[int(np.argmax(values))])


@dataclass(frozen=True)
class OptimalityReport:
    passed: bool
    tau: float
    checked: int
    max_improvement: float
    tolerance: float = UTILITY_ATOL


def perturbation_optimality_check(
    u: AssetUniverse,
    tau: float,
    cfg: OracleConfig = OracleConfig(),
    candidate: Optional[PortfolioWeights] = None,
) -> OptimalityReport:
    """Try to beat ``candidate`` (default: the closed-form optimum) by budget-neutral moves.

    Each of ``cfg.perturbation_count`` random zero-sum directions is applied in
    both signs at every scale in ``PERTURBATION_SCALES``.
    """
    if not tau > 0:
        raise InputError("perturbation check needs tau > 0")
    gamma = 1.0 / tau
    if candidate is None:
        candidate = optimal_weights(compute_scalars(u), u, tau)
    base = mv_utility(u, candidate, gamma)
    rng = cfg.rng()
    best = -np.inf
    checked = 0
    for _ in range(cfg.perturbation_count):
        d = rng.standard_normal(u.n)
        d -= d.mean()
        d /= np.linalg.norm(d)
        for scale in PERTURBATION_SCALES:
            for sign in (1.0, -1.0):
                w = PortfolioWeights(candidate.weights + sign * scale * d)
                best = max(best, mv_utility(u, w, gamma) - base)
                checked += 1
    return OptimalityReport(best <= UTILITY_ATOL, float(tau), checked, float(best))


@dataclass(frozen=True)
class DerivativeReport:
    passed: bool
    point: float
    analytic: float
    numeric: float
    step: float
    tolerance: float

    @property
    def error(self) -> float:
        return abs(self.analytic - self.numeric)


def finite_difference_check(
    s: ScalarSummary,
    setting: Setting,
    plane: Plane,
    point: float,
    cfg: OracleConfig = OracleConfig(),
    sh: Optional[SharpeScalar] = None,
    mu_f: Optional[float] = None,
) -> DerivativeReport:
    """Central difference with step ``cfg.fd_step * max(1, |point|)``."""
    setting, plane = Setting(setting), Plane(plane)
    h = cfg.fd_step * max(1.0, abs(point))
    floor = domain_floor(s, setting, plane)
    if plane is Plane.VARIANCE and point - h <= floor:
        raise BoundarySingularity(f"point {point} is within one step of the boundary {floor}")
    if plane is Plane.TAU and point - h < floor:
        raise InputError(f"point {point} is within one step of tau = 0")
    f = edm_function(s, setting, plane, sh=sh, mu_f=mu_f)
    numeric = (f(point + h) - f(point - h)) / (2.0 * h)
    if plane is Plane.TAU:
        tol = FD_ATOL_TAU
        if setting is Setting.RISKY_ONLY:
            analytic = d_edm_d_tau_risky(s, point)
        else:
            analytic = d_edm_d_tau_riskfree(s, sh, sh.mu_f if mu_f is None else mu_f, point)
    else:
        tol = FD_ATOL_VARIANCE
        analytic = d_edm_d_variance(s, point, setting, sh=sh, mu_f=mu_f)
    return DerivativeReport(abs(analytic - numeric) <= tol, point, analytic, numeric, h, tol)
