"""Diversification of MV-optimal portfolios as a function of risk.

Two settings and two planes:

* risky-only, tau plane:   EDM(tau) = -(D/C) tau^2 + ((EC - FB)/C) tau + (F - 1)/C
* with risk-free, tau plane: EDM(tau) = (E - F mu_f) tau - S^2 tau^2
* risky-only, variance plane: EDM(v) = ((EC - FB)/C) sqrt((C v - 1)/D) - v + F/C,  v >= 1/C
* with risk-free, variance plane: EDM(v) = ((E - F mu_f)/S) sqrt(v) - v,  v >= 0

Each curve is concave in tau. The sign of EC - FB (resp. E - F mu_f) decides
whether diversification falls monotonically as risk tolerance grows or rises
to an interior maximum first.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .errors import BoundarySingularity, DegenerateSharpe, InputError, VarianceBelowMinimum
from .market import ScalarSummary, SharpeScalar
from .portfolio import _check_tangent

SIGN_DEAD_ZONE = 1e-12
VARIANCE_FLOOR_RTOL = 1e-12


class Setting(str, enum.Enum):
    RISKY_ONLY = "risky"
    WITH_RISK_FREE = "rf"


class Plane(str, enum.Enum):
    TAU = "tau"
    VARIANCE = "variance"


class RegimeLabel(str, enum.Enum):
    DECREASING_CONCAVE = "DecreasingConcaveInTau"
    INVERTED_U = "InvertedUInTau"


@dataclass(frozen=True)
class Regime:
    setting: Setting
    sign_quantity: float
    label: RegimeLabel
    tau_star: Optional[float] = None
    variance_star: Optional[float] = None
    edm_max: Optional[float] = None
    mu_f: Optional[float] = None

    @property
    def inverted_u(self) -> bool:
        return self.label is RegimeLabel.INVERTED_U

    def as_dict(self) -> dict:
        return {
            "setting": self.setting.value,
            "mu_f": self.mu_f,
            "sign_quantity": self.sign_quantity,
            "label": self.label.value,
            "tau_star": self.tau_star,
            "variance_star": self.variance_star,
            "edm_max": self.edm_max,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Regime":
        return cls(
            setting=Setting(d["setting"]),
            sign_quantity=d["sign_quantity"],
            label=RegimeLabel(d["label"]),
            tau_star=d.get("tau_star"),
            variance_star=d.get("variance_star"),
            edm_max=d.get("edm_max"),
            mu_f=d.get("mu_f"),
        )


@dataclass(frozen=True)
class CurveSample:
    abscissa: float
    edm: float
    kind: Plane


def _positive(q: float, scale: float) -> bool:
    # weak inequality: the dead zone around zero belongs to the "<= 0" branch
    return q > SIGN_DEAD_ZONE * scale


def _check_tau(tau: float) -> None:
    if not tau >= 0:
        raise InputError(f"tau must be >= 0, got {tau}")


# --- risky-only, tau plane ---------------------------------------------------


def edm_of_tau_risky(s: ScalarSummary, tau: float) -> float:
    _check_tau(tau)
    return -(s.D / s.C) * tau * tau + (s.sign_quantity / s.C) * tau + (s.F - 1.0) / s.C


def d_edm_d_tau_risky(s: ScalarSummary, tau: float) -> float:
    _check_tau(tau)
    return -2.0 * (s.D / s.C) * tau + s.sign_quantity / s.C


def d2_edm_d_tau2_risky(s: ScalarSummary) -> float:
    return -2.0 * s.D / s.C


def classify_risky(s: ScalarSummary) -> Regime:
    s.require_nondegenerate()
    q = s.sign_quantity
    if not _positive(q, abs(s.E * s.C) + abs(s.F * s.B)):
        return Regime(Setting.RISKY_ONLY, q, RegimeLabel.DECREASING_CONCAVE)
    tau_star = q / (2.0 * s.D)
    return Regime(
        Setting.RISKY_ONLY,
        q,
        RegimeLabel.INVERTED_U,
        tau_star=tau_star,
        variance_star=1.0 / s.C + q * q / (4.0 * s.D * s.C),
        edm_max=edm_of_tau_risky(s, tau_star),
    )


# --- with risk-free asset, tau plane ----------------------------------------


def _excess_sign_quantity(s: ScalarSummary, mu_f: float) -> float:
    return s.E - s.F * mu_f


def edm_of_tau_riskfree(s: ScalarSummary, sh: SharpeScalar, mu_f: float, tau: float) -> float:
    _check_tau(tau)
    _check_tangent(s, mu_f)
    return tau * _excess_sign_quantity(s, mu_f) - tau * tau * sh.s2


def d_edm_d_tau_riskfree(s: ScalarSummary, sh: SharpeScalar, mu_f: float, tau: float) -> float:
    _check_tau(tau)
    return _excess_sign_quantity(s, mu_f) - 2.0 * tau * sh.s2


def d2_edm_d_tau2_riskfree(sh: SharpeScalar) -> float:
    return -2.0 * sh.s2


def classify_riskfree(s: ScalarSummary, sh: SharpeScalar, mu_f: float) -> Regime:
    """Regime with a risk-free asset.

    The interior maximum sits at the root of (E - F mu_f) - 2 tau S^2,
    i.e. tau* = (E - F mu_f) / (2 S^2).
    """
    if not sh.s2 > 0:
        raise DegenerateSharpe(f"S^2 = {sh.s2} must be positive")
    q = _excess_sign_quantity(s, mu_f)
    if not _positive(q, abs(s.E) + abs(s.F * mu_f)):
        return Regime(Setting.WITH_RISK_FREE, q, RegimeLabel.DECREASING_CONCAVE, mu_f=float(mu_f))
    peak = q * q / (4.0 * sh.s2)
    return Regime(
        Setting.WITH_RISK_FREE,
        q,
        RegimeLabel.INVERTED_U,
        tau_star=q / (2.0 * sh.s2),
        variance_star=peak,
        edm_max=peak,
        mu_f=float(mu_f),
    )


# --- variance plane ----------------------------------------------------------


def min_variance(s: ScalarSummary) -> float:
    return 1.0 / s.C


def _excess_radicand(s: ScalarSummary, v: float) -> float:
    """C v - 1, clamped at zero inside the rounding band below v = 1/C."""
    if v < (1.0 - VARIANCE_FLOOR_RTOL) / s.C:
        raise VarianceBelowMinimum(f"variance {v} is below the minimum 1/C = {1.0 / s.C}")
    return max(s.C * v - 1.0, 0.0)


def variance_from_tau(s: ScalarSummary, tau: float) -> float:
    _check_tau(tau)
    return (s.D / s.C) * tau * tau + 1.0 / s.C


def tau_from_variance(s: ScalarSummary, v: float) -> float:
    s.require_nondegenerate()
    return math.sqrt(_excess_radicand(s, v) / s.D)


def edm_of_variance_risky(s: ScalarSummary, v: float) -> float:
    s.require_nondegenerate()
    root = math.sqrt(_excess_radicand(s, v) / s.D)
    return (s.sign_quantity / s.C) * root - v + s.F / s.C


def edm_of_variance_riskfree(s: ScalarSummary, sh: SharpeScalar, mu_f: float, v: float) -> float:
    if not sh.s2 > 0:
        raise DegenerateSharpe(f"S^2 = {sh.s2} must be positive")
    if v < 0:
        raise VarianceBelowMinimum(f"variance must be >= 0, got {v}")
    return -v + (_excess_sign_quantity(s, mu_f) / sh.s) * math.sqrt(v)


def _interior_risky(s: ScalarSummary, v: float) -> float:
    s.require_nondegenerate()
    excess = s.C * v - 1.0
    if not excess > 0:
        raise BoundarySingularity(f"derivative is singular at v <= 1/C = {1.0 / s.C} (got {v})")
    return excess


def d_edm_d_variance(
    s: ScalarSummary,
    v: float,
    setting: Setting = Setting.RISKY_ONLY,
    sh: Optional[SharpeScalar] = None,
    mu_f: Optional[float] = None,
) -> float:
    setting = Setting(setting)
    if setting is Setting.RISKY_ONLY:
        excess = _interior_risky(s, v)
        return (s.sign_quantity / (s.C * math.sqrt(s.D))) * s.C / (2.0 * math.sqrt(excess)) - 1.0
    sh, mu_f = _require_rf(sh, mu_f)
    if not v > 0:
        raise BoundarySingularity(f"derivative is singular at v <= 0 (got {v})")
    return -1.0 + (_excess_sign_quantity(s, mu_f) / (2.0 * sh.s)) / math.sqrt(v)


def d2_edm_d_variance2(
    s: ScalarSummary,
    v: float,
    setting: Setting = Setting.RISKY_ONLY,
    sh: Optional[SharpeScalar] = None,
    mu_f: Optional[float] = None,
) -> float:
    """Second derivative of EDM with respect to variance.

    Risky-only: -(C^2 / 4) (EC - FB) / (C sqrt(D)) (C v - 1)^(-3/2).
    """
    setting = Setting(setting)
    if setting is Setting.RISKY_ONLY:
        excess = _interior_risky(s, v)
        return -(s.C * s.C / 4.0) * (s.sign_quantity / (s.C * math.sqrt(s.D))) * excess**-1.5
    sh, mu_f = _require_rf(sh, mu_f)
    if not v > 0:
        raise BoundarySingularity(f"derivative is singular at v <= 0 (got {v})")
    return -(_excess_sign_quantity(s, mu_f) / (4.0 * sh.s)) * v**-1.5


def _require_rf(sh: Optional[SharpeScalar], mu_f: Optional[float]) -> tuple[SharpeScalar, float]:
    if sh is None:
        raise InputError("risk-free setting needs a Sharpe scalar")
    return sh, sh.mu_f if mu_f is None else mu_f


# --- curve sampling ------------------------------------------------------------


def edm_function(
    s: ScalarSummary,
    setting: Setting,
    plane: Plane,
    sh: Optional[SharpeScalar] = None,
    mu_f: Optional[float] = None,
):
    """Return the scalar map abscissa -> EDM for one (setting, plane) pair."""
    setting, plane = Setting(setting), Plane(plane)
    if setting is Setting.RISKY_ONLY:
        if plane is Plane.TAU:
            return lambda x: edm_of_tau_risky(s, x)
        return lambda x: edm_of_variance_risky(s, x)
    sh, mu_f = _require_rf(sh, mu_f)
    if plane is Plane.TAU:
        _check_tangent(s, mu_f)
        return lambda x: edm_of_tau_riskfree(s, sh, mu_f, x)
    return lambda x: edm_of_variance_riskfree(s, sh, mu_f, x)


def domain_floor(s: ScalarSummary, setting: Setting, plane: Plane) -> float:
    if Plane(plane) is Plane.VARIANCE and Setting(setting) is Setting.RISKY_ONLY:
        return 1.0 / s.C
    return 0.0


def default_tau_domain(regime: Regime) -> tuple[float, float]:
    if regime.inverted_u:
        return 0.0, 2.0 * regime.tau_star
    return 0.0, 50.0


def sample_curve(
    s: ScalarSummary,
    setting: Setting,
    plane: Plane,
    lo: float,
    hi: float,
    samples: int,
    sh: Optional[SharpeScalar] = None,
    mu_f: Optional[float] = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Uniform grid over ``[lo, hi]`` inclusive of both endpoints."""
    if not lo < hi:
        raise InputError(f"empty domain [{lo}, {hi}]")
    if samples < 2:
        raise InputError(f"need at least 2 samples, got {samples}")
    floor = domain_floor(s, setting, plane)
    if lo < floor * (1.0 - VARIANCE_FLOOR_RTOL):
        raise InputError(f"domain starts at {lo}, below the curve minimum {floor}")
    f = edm_function(s, setting, plane, sh=sh, mu_f=mu_f)
    xs = np.linspace(lo, hi, samples)
    ys = np.array([f(x) for x in xs])
    return xs, ys


def curve_samples(xs, ys, plane: Plane) -> list[CurveSample]:
    return [CurveSample(float(x), float(y), Plane(plane)) for x, y in zip(xs, ys)]
