import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from divcurve.analysis import edm_of_tau_riskfree, variance_from_tau
from divcurve.errors import DimensionMismatch, InputError, NonPositiveGamma, TangentUndefined
from divcurve.market import AssetUniverse, compute_scalars, sharpe_scalar
from divcurve.portfolio import (
    PortfolioKind,
    PortfolioWeights,
    RiskTolerance,
    composite_portfolio,
    diversification_gain,
    diversification_gain_direct,
    edm,
    edm_decomposition,
    mv_utility,
    optimal_weights,
    portfolio_variance,
    risk_free_weight,
    tangent_weights,
)
from divcurve.verification import random_universe

S_6 = 0.6759361  # published Sharpe constant at mu_f = 6


def U(mu, sigma, rf=None):
    return AssetUniverse([f"x{i}" for i in range(len(mu))], mu, sigma, rf)


def e(i, n):
    w = np.zeros(n)
    w[i] = 1.0
    return PortfolioWeights(w)


class TestTypes:
    def test_budget_enforced(self):
        with pytest.raises(InputError):
            PortfolioWeights([0.5, 0.4])

    def test_composite_budget(self):
        w = PortfolioWeights([0.3, 0.2], kind="composite", risk_free_weight=0.5, risk_free_rate=0.01)
        assert w.kind is PortfolioKind.COMPOSITE and w.total == pytest.approx(1.0)

    def test_risky_only_rejects_rf_leg(self):
        with pytest.raises(InputError):
            PortfolioWeights([0.3, 0.2], risk_free_weight=0.5)

    def test_risk_tolerance(self):
        assert RiskTolerance(4.0).gamma == 0.25
        with pytest.raises(NonPositiveGamma):
            RiskTolerance(0.0).gamma
        with pytest.raises(InputError):
            RiskTolerance(-1.0)


class TestOptimalWeights:
    @pytest.mark.parametrize("n", [2, 5])
    def test_identity_gmv(self, n):
        u = U(np.arange(n, dtype=float), np.eye(n))
        w = optimal_weights(compute_scalars(u), u, 0.0)
        np.testing.assert_allclose(w.weights, np.full(n, 1 / n))

    def test_four_asset_gmv_variance(self, hi, s_hi):
        w = optimal_weights(s_hi, hi, 0.0)
        # 1 / 0.0483234
        assert portfolio_variance(hi, w) == pytest.approx(20.6939, rel=1e-5)

    @pytest.mark.parametrize("tau", [0.0, 1.0, 14.5])
    def test_budget_four_asset(self, hi, lo, tau):
        for u in (hi, lo):
            w = optimal_weights(compute_scalars(u), u, tau)
            assert abs(w.weights.sum() - 1.0) <= 1e-10

    def test_accepts_risk_tolerance_object(self, hi, s_hi):
        a = optimal_weights(s_hi, hi, RiskTolerance(2.0))
        b = optimal_weights(s_hi, hi, 2.0)
        assert np.array_equal(a.weights, b.weights)

    def test_budget_and_variance_closed_form_random(self, universes, rng):
        for u in universes:
            s = compute_scalars(u)
            for tau in rng.uniform(0, 20, size=20):
                w = optimal_weights(s, u, tau)
                assert abs(w.weights.sum() - 1.0) <= 1e-10
                v = portfolio_variance(u, w)
                assert v == pytest.approx(variance_from_tau(s, tau), rel=1e-9)

    def test_optimality_by_perturbation(self, universes, rng):
        for u in universes[:30]:
            s = compute_scalars(u)
            tau = float(rng.uniform(0.1, 10))
            w = optimal_weights(s, u, tau)
            base = mv_utility(u, w, 1 / tau)
            for _ in range(100):
                v = rng.normal(size=u.n)
                v -= v.mean()
                for scale in (1e-3, 1e-1):
                    p = PortfolioWeights(w.weights + scale * v / np.linalg.norm(v))
                    assert mv_utility(u, p, 1 / tau) <= base + 1e-12


class TestVarianceUtility:
    def test_single_asset(self, hi):
        assert portfolio_variance(hi, e(0, 4)) == 185.0

    @pytest.mark.parametrize("n", [2, 6])
    def test_equal_weights_identity(self, n):
        u = U(np.zeros(n), np.eye(n))
        assert portfolio_variance(u, PortfolioWeights(np.full(n, 1 / n))) == pytest.approx(1 / n)

    def test_dimension_mismatch(self, hi):
        with pytest.raises(DimensionMismatch):
            portfolio_variance(hi, PortfolioWeights([0.5, 0.5]))
        with pytest.raises(DimensionMismatch):
            edm(hi, PortfolioWeights([0.5, 0.5]))

    def test_utility_single_asset(self, hi):
        assert mv_utility(hi, e(0, 4), 1.0) == -78.5

    @pytest.mark.parametrize("gamma", [0.1, 1.0, 7.0])
    def test_utility_all_risk_free(self, hi, gamma):
        w = PortfolioWeights(np.zeros(4), kind="composite", risk_free_weight=1.0, risk_free_rate=6.0)
        assert mv_utility(hi, w, gamma) == 6.0

    def test_utility_rejects_gamma(self, hi):
        with pytest.raises(NonPositiveGamma):
            mv_utility(hi, e(0, 4), 0.0)

    def test_utility_matches_oracle(self, universes):
        for u in universes[:20]:
            w = optimal_weights(compute_scalars(u), u, 0.7)
            expected = oracles.mv_utility(w.weights.tolist(), u.mu.tolist(), u.sigma.tolist(), 2.0)
            assert mv_utility(u, w, 2.0) == pytest.approx(expected, rel=1e-12, abs=1e-14)


class TestEDM:
    @pytest.mark.parametrize("i", range(4))
    def test_single_asset_zero(self, hi, i):
        assert edm(hi, e(i, 4)) == 0.0
        assert edm_decomposition(hi, e(i, 4)).sum() == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n, var", [(2, 1.0), (5, 3.0)])
    def test_scaled_identity_equal_weights(self, n, var):
        u = U(np.zeros(n), var * np.eye(n))
        assert edm(u, PortfolioWeights(np.full(n, 1 / n))) == pytest.approx(var * (1 - 1 / n))

    def test_gmv_constant(self, hi, s_hi):
        assert edm(hi, optimal_weights(s_hi, hi, 0.0)) == pytest.approx(39.01232, rel=1e-6)

    def test_decomposition_identity_case(self):
        u = U([0.0, 0.0], np.eye(2))
        np.testing.assert_allclose(edm_decomposition(u, PortfolioWeights([0.5, 0.5])), [0.25, 0.25])

    def test_decomposition_sums_random(self, universes, rng):
        for u in universes:
            w = rng.normal(size=u.n)
            w = PortfolioWeights(w - (w.sum() - 1.0) / u.n)
            expected = oracles.edm_double_sum(w.weights.tolist(), u.sigma.tolist())
            assert edm(u, w) == pytest.approx(expected, rel=1e-10, abs=1e-12)
            assert abs(edm_decomposition(u, w).sum() - edm(u, w)) <= 1e-10

    def test_decomposition_composite_has_rf_term(self, hi, s_hi):
        w = composite_portfolio(s_hi, hi, 6.0, 1.0)
        terms = edm_decomposition(hi, w)
        assert terms.shape == (5,)
        assert abs(terms.sum() - edm(hi, w)) <= 1e-10


class TestGain:
    def test_gamma_two_is_edm(self, hi, s_hi):
        w = optimal_weights(s_hi, hi, 3.0)
        assert diversification_gain(hi, w, 2.0) == edm(hi, w)

    def test_single_asset(self, hi):
        assert diversification_gain(hi, e(2, 4), 3.0) == 0.0

    def test_rejects_gamma(self, hi):
        with pytest.raises(NonPositiveGamma):
            diversification_gain(hi, e(2, 4), -1.0)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 8), st.floats(0.05, 20.0), st.integers(0, 2**32 - 1))
    def test_direct_difference(self, n, gamma, seed):
        rng = np.random.default_rng(seed)
        u = random_universe(rng, n)
        w = rng.normal(size=n)
        w = PortfolioWeights(w - (w.sum() - 1.0) / n)
        a = diversification_gain(u, w, gamma)
        b = diversification_gain_direct(u, w, gamma)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12 * (1 + gamma * np.abs(w.weights).sum()))

    def test_direct_difference_composite(self, hi, s_hi):
        w = composite_portfolio(s_hi, hi, 6.0, 2.0)
        assert diversification_gain(hi, w, 0.5) == pytest.approx(diversification_gain_direct(hi, w, 0.5), rel=1e-12)


class TestRiskFree:
    def test_tangent_budget(self, universes):
        for u in universes[:50]:
            s = compute_scalars(u)
            assert abs(tangent_weights(s, u, 0.01).weights.sum() - 1.0) <= 1e-10

    def test_tangent_variance_four_asset(self, hi, s_hi):
        tg = tangent_weights(s_hi, hi, 6.0)
        expected = S_6**2 / (s_hi.B - 6 * s_hi.C) ** 2
        assert portfolio_variance(hi, tg) == pytest.approx(expected, rel=1e-6)

    def test_tangent_undefined(self, hi, s_hi):
        with pytest.raises(TangentUndefined):
            tangent_weights(s_hi, hi, s_hi.B / s_hi.C)
        with pytest.raises(TangentUndefined):
            composite_portfolio(s_hi, hi, s_hi.B / s_hi.C, 1.0)

    def test_risk_free_weight(self, s_hi):
        assert risk_free_weight(s_hi, 6.0, 0.0) == 1.0
        assert risk_free_weight(s_hi, 6.0, 1 / (s_hi.B - 6 * s_hi.C)) == pytest.approx(0.0, abs=1e-15)
        # 1 - 2 (B - 6C) with B, C from Gaussian elimination
        assert risk_free_weight(s_hi, 6.0, 2.0) == pytest.approx(0.8449026719772044, rel=1e-12)
        assert risk_free_weight(s_hi, 6.0, 2.0) == pytest.approx(0.844903, rel=1e-6)

    def test_composite_at_zero(self, hi, s_hi):
        w = composite_portfolio(s_hi, hi, 6.0, 0.0)
        assert w.risk_free_weight == 1.0
        assert np.all(w.weights == 0) and portfolio_variance(hi, w) == 0.0

    def test_composite_unit_tau(self, hi, s_hi):
        w = composite_portfolio(s_hi, hi, 6.0, 1.0)
        assert portfolio_variance(hi, w) == pytest.approx(S_6**2, rel=1e-6)
        assert portfolio_variance(hi, w) == pytest.approx(0.45689, rel=1e-5)

    def test_composite_variance_and_edm_random(self, universes, rng):
        for u in universes:
            s = compute_scalars(u)
            mf = float(rng.uniform(-0.05, 0.1))
            sh = sharpe_scalar(s, mf)
            tg = tangent_weights(s, u, mf)
            for tau in (0.1, 1.0, 10.0):
                w = composite_portfolio(s, u, mf, tau)
                assert w.total == pytest.approx(1.0, abs=1e-10)
                assert portfolio_variance(u, w) == pytest.approx(tau**2 * sh.s2, rel=1e-9)
                one_m_wf = 1.0 - w.risk_free_weight
                levered_form = one_m_wf * float(tg.weights @ u.variances) - one_m_wf**2 * portfolio_variance(u, tg)
                assert edm(u, w) == pytest.approx(levered_form, rel=1e-9)
                assert edm(u, w) == pytest.approx(edm_of_tau_riskfree(s, sh, mf, tau), rel=1e-9)
