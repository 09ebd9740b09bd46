"""Asset universe model, SPD solves and the quadratic-form scalars.

Every closed form downstream is a function of six scalars built from the
expected returns ``mu``, the vector of ones and the vector of asset variances
(the diagonal of ``sigma``), all measured in the inverse-covariance inner
product:

    A = mu' S^-1 mu     B = mu' S^-1 1     C = 1' S^-1 1
    E = mu' S^-1 s2     F = 1' S^-1 s2     D = A C - B^2

``S^-1`` is never formed; products go through a Cholesky factorization.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .errors import (
    DegenerateD,
    DegenerateSample,
    DegenerateSharpe,
    InputError,
    InsufficientData,
    InvalidUniverse,
    NotPositiveDefinite,
)

SYMMETRY_RTOL = 1e-12
DEGENERATE_D_RTOL = 1e-10


def _frozen(a: ArrayLike) -> NDArray[np.float64]:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AssetUniverse:
    """Model inputs: labels, expected returns, covariance and optional risk-free rate.

    Construction only coerces types; use :func:`validate_universe` or
    :func:`ensure_valid` before computing with an untrusted universe.
    """

    labels: tuple[str, ...]
    mu: NDArray[np.float64]
    sigma: NDArray[np.float64]
    risk_free: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "mu", _frozen(self.mu))
        object.__setattr__(self, "sigma", _frozen(self.sigma))
        if self.risk_free is not None:
            object.__setattr__(self, "risk_free", float(self.risk_free))

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def variances(self) -> NDArray[np.float64]:
        return np.diag(self.sigma).copy()

    def with_risk_free(self, mu_f: Optional[float]) -> "AssetUniverse":
        return AssetUniverse(self.labels, self.mu, self.sigma, mu_f)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "mu": self.mu.tolist(),
            "sigma": self.sigma.tolist(),
            "risk_free": self.risk_free,
        }


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Optional[str] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_universe(u: AssetUniverse) -> ValidationReport:
    """Check the preconditions every other operation relies on.

    Never raises; the first violated invariant is named in the report.
    """
    n = len(u.mu)
    if n < 2:
        return ValidationReport(False, "too_few_assets", f"need N >= 2 assets, got {n}")
    if u.sigma.shape != (n, n) or len(u.labels) != n:
        return ValidationReport(
            False,
            "dimension_mismatch",
            f"labels={len(u.labels)}, mu={n}, sigma={u.sigma.shape}",
        )
    if not (np.all(np.isfinite(u.mu)) and np.all(np.isfinite(u.sigma))):
        return ValidationReport(False, "non_finite", "mu and sigma must be finite")
    if u.risk_free is not None and not math.isfinite(u.risk_free):
        return ValidationReport(False, "non_finite", "risk_free must be finite")
    scale = np.max(np.abs(u.sigma))
    asym = np.max(np.abs(u.sigma - u.sigma.T))
    if scale == 0 or asym > SYMMETRY_RTOL * scale:
        return ValidationReport(
            False, "asymmetric", f"max |S_ij - S_ji| / max |S| = {asym / scale if scale else math.inf:.3g}"
        )
    try:
        linalg.cho_factor(0.5 * (u.sigma + u.sigma.T), lower=True)
    except linalg.LinAlgError as exc:
        return ValidationReport(False, "not_positive_definite", str(exc))
    return ValidationReport(True)


def ensure_valid(u: AssetUniverse) -> AssetUniverse:
    """Validate and return a copy with ``sigma`` exactly symmetrized."""
    report = validate_universe(u)
    if not report.ok:
        raise InvalidUniverse(report.violation, report.message)
    sym = 0.5 * (u.sigma + u.sigma.T)
    return AssetUniverse(u.labels, u.mu, sym, u.risk_free)


def solve_spd(sigma: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Solve ``sigma @ x = b`` for symmetric positive-definite ``sigma``.

    ``b`` may be a vector or an (N, k) block of right-hand sides. One step of
    iterative refinement is applied after the triangular solves.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not np.all(np.isfinite(sigma)):
        raise NotPositiveDefinite("matrix has non-finite entries")
    try:
        factor = linalg.cho_factor(sigma, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.diag(factor[0])
    if not np.all(np.isfinite(pivots)) or np.any(pivots <= 0):
        raise NotPositiveDefinite("non-positive or non-finite Cholesky pivot")
    x = linalg.cho_solve(factor, b, check_finite=False)
    x = x + linalg.cho_solve(factor, b - sigma @ x, check_finite=False)
    return x


@dataclass(frozen=True)
class ScalarSummary:
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float

    @property
    def sign_quantity(self) -> float:
        """EC - FB; its sign decides the risky-only regime."""
        return self.E * self.C - self.F * self.B

    @property
    def is_degenerate(self) -> bool:
        return self.D <= DEGENERATE_D_RTOL * self.A * self.C

    def require_nondegenerate(self) -> None:
        if self.is_degenerate:
            raise DegenerateD(
                f"D = {self.D:.6g} is numerically zero (mu proportional to the ones vector)"
            )

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in "ABCDEF"}


def compute_scalars(u: AssetUniverse) -> ScalarSummary:
    ones = np.ones(u.n)
    x, y, z = solve_spd(u.sigma, np.column_stack([u.mu, ones, u.variances])).T
    A = float(u.mu @ x)
    B = float(ones @ x)
    C = float(ones @ y)
    E = float(u.mu @ z)
    F = float(ones @ z)
    return ScalarSummary(A=A, B=B, C=C, D=A * C - B * B, E=E, F=F)


@dataclass(frozen=True)
class SharpeScalar:
    """S = sqrt(C mu_f^2 - 2 B mu_f + A) for one risk-free rate."""

    s: float
    mu_f: float

    @property
    def s2(self) -> float:
        return self.s * self.s


def sharpe_scalar(s: ScalarSummary, mu_f: float) -> SharpeScalar:
    radicand = s.C * mu_f * mu_f - 2.0 * s.B * mu_f + s.A
    # relative dead zone: the three terms cancel exactly only when D = 0
    scale = s.C * mu_f * mu_f + 2.0 * abs(s.B * mu_f) + abs(s.A)
    if not radicand > 1e-12 * scale:
        raise DegenerateSharpe(
            f"C mu_f^2 - 2 B mu_f + A = {radicand:.6g} is not positive at mu_f = {mu_f}"
        )
    return SharpeScalar(s=math.sqrt(radicand), mu_f=float(mu_f))


@dataclass(frozen=True)
class ReturnsSample:
    labels: tuple[str, ...]
    observations: NDArray[np.float64] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        obs = np.array(self.observations, dtype=np.float64)
        if obs.ndim != 2 or obs.shape[1] != len(self.labels):
            raise InputError(f"observations shape {obs.shape} does not match {len(self.labels)} labels")
        if obs.shape[0] < 2:
            raise InsufficientData(f"need at least 2 observations, got {obs.shape[0]}")
        if not np.all(np.isfinite(obs)):
            raise InputError("returns contain non-finite entries")
        obs.setflags(write=False)
        object.__setattr__(self, "observations", obs)


def estimate_universe(r: ReturnsSample, mu_f: Optional[float] = None) -> AssetUniverse:
    """Column means and unbiased (T - 1) sample covariance."""
    t, n = r.observations.shape
    if t <= n:
        raise InsufficientData(f"need T >= N + 1 observations for an SPD covariance (T={t}, N={n})")
    mu = r.observations.mean(axis=0)
    sigma = np.cov(r.observations, rowvar=False, ddof=1).reshape(n, n)
    sigma = 0.5 * (sigma + sigma.T)
    eig = np.linalg.eigvalsh(sigma)
    if eig[0] <= 1e-12 * max(eig[-1], 0.0):
        raise DegenerateSample(
            f"sample covariance is not positive definite (eigenvalues {eig[0]:.3g} .. {eig[-1]:.3g})"
        )
    return ensure_valid(AssetUniverse(r.labels, mu, sigma, mu_f))


# --- file formats -----------------------------------------------------------


def universe_from_dict(
    data: dict, mu_set: Optional[str] = None, risk_free: Optional[float] = None
) -> AssetUniverse:
    """Build a validated universe from the JSON object layout.

    ``mu_set`` picks an alternative mean vector from the optional
    ``scenarios.mu`` table of a fixture file.
    """
    try:
        mu = data["mu"]
        if mu_set is not None:
            try:
                mu = data["scenarios"]["mu"][mu_set]
            except (KeyError, TypeError):
                raise InputError(f"unknown mu set {mu_set!r}") from None
        sigma = np.asarray(data["sigma"], dtype=np.float64)
        mu = np.asarray(mu, dtype=np.float64)
        labels = data.get("labels") or [f"asset{i + 1}" for i in range(len(mu))]
        rf = data.get("risk_free") if risk_free is None else risk_free
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed universe: {exc}") from None
    if mu.ndim != 1 or sigma.ndim != 2:
        raise InvalidUniverse("dimension_mismatch", f"mu shape {mu.shape}, sigma shape {sigma.shape}")
    return ensure_valid(AssetUniverse(labels, mu, sigma, rf))


def load_universe(
    path: str | Path, mu_set: Optional[str] = None, risk_free: Optional[float] = None
) -> AssetUniverse:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return universe_from_dict(data, mu_set=mu_set, risk_free=risk_free)


def fixture_risk_free_rates(path: str | Path) -> list[float]:
    """Risk-free rates listed under ``scenarios.risk_free`` (empty if none)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    rates = (data.get("scenarios") or {}).get("risk_free") or []
    return [float(r) for r in rates]


def save_universe(u: AssetUniverse, path: str | Path) -> None:
    Path(path).write_text(json.dumps(u.to_dict(), indent=2) + "\n", encoding="utf-8")


def read_returns_csv(path: str | Path) -> ReturnsSample:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise InputError(f"{path}: empty returns file")
    labels, body = rows[0], rows[1:]
    try:
        obs = [[float(x) for x in row] for row in body]
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if any(len(row) != len(labels) for row in obs):
        raise InputError(f"{path}: ragged rows")
    return ReturnsSample(labels, np.array(obs, dtype=np.float64).reshape(len(obs), len(labels)))


def paper4_path() -> Path:
    return Path(__file__).with_name("fixtures") / "paper4.json"


def paper4_universe(mu_set: str = "MU_HI", risk_free: Optional[float] = None) -> AssetUniverse:
    """The bundled four-asset universe (``MU_HI`` or ``MU_LO`` means)."""
    return load_universe(paper4_path(), mu_set=mu_set, risk_free=risk_free)

