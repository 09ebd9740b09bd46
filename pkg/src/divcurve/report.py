"""Serializable reports, curve files and the bundled figure datasets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .analysis import Plane, Regime, Setting, min_variance, sample_curve
from .market import AssetUniverse, ScalarSummary, compute_scalars, paper4_universe, sharpe_scalar
from .portfolio import (
    PortfolioKind,
    PortfolioWeights,
    composite_portfolio,
    edm,
    optimal_weights,
    portfolio_variance,
)

FIXTURE_RATES = (6.0, 13.0)


@dataclass
class WeightsEntry:
    tau: float
    labels: list[str]
    weights: list[float]
    risk_free_weight: float
    total: float
    variance: float
    edm: float
    mu_f: Optional[float] = None

    @classmethod
    def build(cls, u: AssetUniverse, w: PortfolioWeights, tau: float) -> "WeightsEntry":
        return cls(
            tau=float(tau),
            labels=list(u.labels),
            weights=w.weights.tolist(),
            risk_free_weight=float(w.risk_free_weight),
            total=w.total,
            variance=portfolio_variance(u, w),
            edm=edm(u, w),
            mu_f=w.risk_free_rate if w.kind is PortfolioKind.COMPOSITE else None,
        )


@dataclass
class AnalysisReport:
    scalars: dict[str, float] = field(default_factory=dict)
    sharpe: dict[str, float] = field(default_factory=dict)
    regimes: list[Regime] = field(default_factory=list)
    weights: list[WeightsEntry] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {}
        if self.scalars:
            out["scalars"] = dict(self.scalars)
        if self.sharpe:
            out["sharpe"] = dict(self.sharpe)
        if self.regimes:
            out["regimes"] = [r.as_dict() for r in self.regimes]
        if self.weights:
            out["weights"] = [vars(w).copy() for w in self.weights]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(
            scalars=dict(d.get("scalars", {})),
            sharpe=dict(d.get("sharpe", {})),
            regimes=[Regime.from_dict(r) for r in d.get("regimes", [])],
            weights=[WeightsEntry(**w) for w in d.get("weights", [])],
        )

    def to_json(self) -> str:
        # json emits floats with repr(), the shortest round-trip form
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def scalar_report(s: ScalarSummary, rates=()) -> AnalysisReport:
    sharpe = {}
    for rf in rates:
        sharpe[_rate_key(rf)] = sharpe_scalar(s, rf).s
    return AnalysisReport(scalars=s.as_dict(), sharpe=sharpe)


def weights_entry(s: ScalarSummary, u: AssetUniverse, tau: float, mu_f: Optional[float] = None) -> WeightsEntry:
    if mu_f is None:
        w = optimal_weights(s, u, tau)
    else:
        w = composite_portfolio(s, u, mu_f, tau)
    return WeightsEntry.build(u, w, tau)


def _rate_key(rf: float) -> str:
    return f"mu_f={rf:g}"


def format_float(x: float) -> str:
    return repr(float(x))


def write_curve_csv(path: str | Path, xs, ys) -> None:
    lines = ["abscissa,edm"]
    lines += [f"{format_float(x)},{format_float(y)}" for x, y in zip(xs, ys)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_curve_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


# --- figure datasets -------------------------------------------------------------


@dataclass(frozen=True)
class FigureSpec:
    name: str
    mu_set: str
    setting: Setting
    plane: Plane
    hi: float
    mu_f: Optional[float] = None


FIGURES = (
    FigureSpec("fig1_left", "MU_HI", Setting.RISKY_ONLY, Plane.TAU, 40.0),
    FigureSpec("fig1_right", "MU_LO", Setting.RISKY_ONLY, Plane.TAU, 40.0),
    FigureSpec("fig2_left", "MU_HI", Setting.WITH_RISK_FREE, Plane.TAU, 40.0, 6.0),
    FigureSpec("fig2_right", "MU_HI", Setting.WITH_RISK_FREE, Plane.TAU, 10.0, 13.0),
    FigureSpec("fig3_left", "MU_HI", Setting.RISKY_ONLY, Plane.VARIANCE, 200.0),
    FigureSpec("fig3_right", "MU_LO", Setting.RISKY_ONLY, Plane.VARIANCE, 50.0),
    FigureSpec("fig4_left", "MU_HI", Setting.WITH_RISK_FREE, Plane.VARIANCE, 300.0, 6.0),
    FigureSpec("fig4_right", "MU_HI", Setting.WITH_RISK_FREE, Plane.VARIANCE, 10.0, 13.0),
)


def figure_constants() -> dict[str, float]:
    """Plot coefficients of the four-asset figures, keyed by expression.

    Unsuffixed keys refer to the ``MU_HI`` means.
    """
    hi = compute_scalars(paper4_universe("MU_HI"))
    lo = compute_scalars(paper4_universe("MU_LO"))
    out = {
        "C": hi.C,
        "F": hi.F,
        "F/C": hi.F / hi.C,
        "(F-1)/C": (hi.F - 1.0) / hi.C,
        "D": hi.D,
        "D/C": hi.D / hi.C,
        "(EC-FB)/C": hi.sign_quantity / hi.C,
        "D, MU_LO": lo.D,
        "D/C, MU_LO": lo.D / lo.C,
        "(EC-FB)/C, MU_LO": lo.sign_quantity / lo.C,
    }
    for rf in FIXTURE_RATES:
        sh = sharpe_scalar(hi, rf)
        q = hi.E - hi.F * rf
        suffix = f", mu_f={rf:g}"
        out["S" + suffix] = sh.s
        out["E-F*mu_f" + suffix] = q
        out["(E-F*mu_f)/S" + suffix] = q / sh.s
    return out


def figure_curve(fig: FigureSpec, samples: int):
    u = paper4_universe(fig.mu_set)
    s = compute_scalars(u)
    sh = sharpe_scalar(s, fig.mu_f) if fig.mu_f is not None else None
    lo = min_variance(s) if (fig.plane is Plane.VARIANCE and fig.setting is Setting.RISKY_ONLY) else 0.0
    return sample_curve(s, fig.setting, fig.plane, lo, fig.hi, samples, sh=sh, mu_f=fig.mu_f)


def write_figures(out_dir: str | Path, samples: int = 401) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fig in FIGURES:
        xs, ys = figure_curve(fig, samples)
        path = out_dir / f"{fig.name}.csv"
        write_curve_csv(path, xs, ys)
        written.append(path)
    path = out_dir / "constants.json"
    path.write_text(json.dumps(figure_constants(), indent=2) + "\n", encoding="utf-8")
    written.append(path)
    return written

