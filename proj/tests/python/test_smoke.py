import math

import pytest

import tailrisk as tr


def test_survival_and_quantile():
    gpd = tr.TailLaw.generalized_pareto(shape=1.0 / 3.0, scale=1.0)
    assert gpd.survival(7.0) == pytest.approx(0.027, rel=1e-9)
    assert gpd.quantile(gpd.survival(7.0)) == pytest.approx(7.0, rel=1e-9)
    expo = tr.TailLaw.exponential()
    assert expo.quantile(0.1) == pytest.approx(math.log(10.0), rel=1e-12)


def test_risk_measure_cvar():
    expo = tr.TailLaw.exponential()
    rho = tr.risk_measure(expo, tr.Weight.cvar(), 0.1)
    assert rho == pytest.approx(1.0 + math.log(10.0), rel=1e-6)
    assert tr.weight_integral(tr.Weight.wang(1.0)) == pytest.approx(1.0, abs=1e-8)


def test_sampling_determinism():
    law = tr.TailLaw.weibull_type(c=1.0, q=1.5)
    a = law.sample(64, seed=7)
    b = law.sample(64, seed=7)
    assert a == b
    assert len(law.sample(0, seed=1)) == 0


def test_hill_hand_value():
    s = tr.EmpiricalSample([8.0, 4.0, 2.0, 1.0])
    assert tr.hill_estimate(s, 3) == pytest.approx(1.0 / (2.0 * math.log(2.0)), rel=1e-12)
    assert tr.intermediate_var(s, 0.5) == 4.0


def test_regime_and_rpev_pipeline():
    law = tr.TailLaw.survival_formula(a=3.4, b=1.0, k=0.2)
    data = law.sample(500, seed=42)
    s = tr.EmpiricalSample(data)
    decision = tr.regime_test(s, k=50, M=8.0)
    assert decision["regime"] in ("frechet", "gumbel")
    res = tr.rpev_dro_cvar(s, beta=1e-3, beta0=0.1, delta=0.1, tail_draws=2000, M=8.0, seed=3)
    assert res["status"] == "converged"
    assert res["value"] > tr.sample_cvar(data, 0.05)


def test_wasserstein_hand_value():
    expo = tr.TailLaw.exponential()
    res = tr.wasserstein_worst_cvar(expo, p=1.0, delta=0.1, beta=0.01)
    assert res["value"] == pytest.approx(1.0 + math.log(100.0) + 10.0, rel=1e-6)


def test_phi_conjugates():
    phi = tr.Phi.exp_shifted()
    e = math.exp(1.0)
    assert phi.conjugate(e - 1.0) == pytest.approx(e, rel=1e-12)
    assert math.isinf(phi.conjugate(-1.5))
    assert tr.Phi.chi_square().inverse_upper(0.02) == pytest.approx(1.2, rel=1e-12)


def test_worst_case_tail_cdf():
    gpd = tr.TailLaw.generalized_pareto(shape=1.0 / 3.0)
    chi2 = tr.Phi.chi_square()
    x = gpd.quantile(1e-4)
    wc = tr.worst_case_survival(gpd, chi2, 0.1, x)
    assert wc["fbar_wc"] > 1e-4
    assert tr.worst_case_quantile(gpd, chi2, 0.1, 1e-4) > x


def test_network_and_hedging():
    net = tr.NetworkModel(d=4, K=2, lam=1.0, p=1.0, normalize=True)
    assert net.loss([1.0, 1.0, 1.0, 1.0]) == pytest.approx(1.0)
    losses = tr.pushforward_losses(net, tr.TailLaw.generalized_pareto(shape=0.25), nu=4.0, n=50, seed=1)
    assert len(losses) == 50 and min(losses) > 0
    cfg = tr.HedgeConfig(m=4)
    errs = tr.simulate_hedging_errors(cfg, 32, seed=5)
    assert len(errs) == 32 and all(e >= 0 for e in errs)


def test_inflation_diagnostic():
    frechet = tr.TailRegime.frechet(3.0)
    d = tr.inflation_diagnostic(frechet, "wasserstein", p=1.0)
    assert d["value"] == pytest.approx(3.0)
    d2 = tr.inflation_diagnostic(frechet, "phi", phi=tr.Phi.exp_shifted())
    assert d2["type"] == "rate_preserving"
