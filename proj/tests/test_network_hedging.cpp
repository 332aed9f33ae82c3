#include <doctest.h>

#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/evt.hpp"
#include "tailrisk/hedging.hpp"
#include "tailrisk/math_util.hpp"
#include "tailrisk/network.hpp"

using namespace tailrisk;

TEST_CASE("interpolated exposure endpoints") {
    const auto a0 = interpolated_exposure(4, 2, 0.0);
    CHECK(a0.at(0, 0) == 1.0);
    CHECK(a0.at(0, 1) == 1.0);
    CHECK(a0.at(0, 2) == 0.0);
    CHECK(a0.at(1, 2) == 1.0);
    const auto a1 = interpolated_exposure(4, 2, 1.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(a1.at(i, j) == doctest::Approx(0.5));
    const auto ah = interpolated_exposure(4, 2, 0.5);
    CHECK(ah.at(0, 0) == doctest::Approx(0.75));
    CHECK(ah.at(0, 2) == doctest::Approx(0.25));
    CHECK_THROWS_AS(interpolated_exposure(5, 2, 0.0), DimensionMismatch);
}

TEST_CASE("network loss hand values") {
    const auto a1 = interpolated_exposure(4, 2, 1.0);
    const NetworkModel l1(a1, Matrix(), 1.0, true, false);
    CHECK(l1.loss({1.0, 1.0, 1.0, 1.0}) == doctest::Approx(1.0));  // ||(2,2)||_1 / 4
    const NetworkModel linf(a1, Matrix(), kInf, true, false);
    CHECK(linf.loss({1.0, 1.0, 1.0, 1.0}) == doctest::Approx(0.5));  // max component / 4
}

TEST_CASE("cross-holdings propagate losses") {
    // two firms, one asset each; firm 2 holds 40% of firm 1
    Matrix A(2, 2);
    A.at(0, 0) = 1.0;
    A.at(1, 1) = 1.0;
    Matrix C(2, 2);
    C.at(1, 0) = 0.4;  // firm 1 is owned 40% by firm 2
    const NetworkModel net(A, C, 1.0, false, false);
    // (I-C)^{-1} = [[1,0],[0.4,1]]; Chat = diag(0.6, 1)
    const double loss = net.loss({1.0, 0.0});
    CHECK(loss == doctest::Approx(0.6 * 1.0 + 1.0 * 0.4).epsilon(1e-12));
}

TEST_CASE("homogeneity and monotonicity of the network loss") {
    const auto a = interpolated_exposure(6, 3, 0.4);
    const NetworkModel net(a, Matrix(), 2.0, false, false);
    const std::vector<double> z = {0.3, 1.2, 0.1, 2.0, 0.7, 0.5};
    const double base = net.loss(z);
    for (const double c : {0.5, 2.0, 7.0}) {
        std::vector<double> scaled = z;
        for (auto& v : scaled) v *= c;
        CHECK(net.loss(scaled) == doctest::Approx(c * base).epsilon(1e-12));
    }
    std::vector<double> bumped = z;
    bumped[3] += 0.5;
    CHECK(net.loss(bumped) >= base);
}

TEST_CASE("loss is continuous in the interpolation parameter") {
    const std::vector<double> z = {1.0, 0.2, 0.4, 3.0};
    double prev = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double lambda = i / 10.0;
        const NetworkModel net(interpolated_exposure(4, 2, lambda), Matrix(), 1.0, false, false);
        const double v = net.loss(z);
        if (i > 0) CHECK(std::fabs(v - prev) < 0.5);
        prev = v;
    }
}

TEST_CASE("pushforward: identity network reproduces the marginal") {
    Matrix A(1, 1);
    A.at(0, 0) = 1.0;
    const NetworkModel net(A, Matrix(), 1.0, false, false);
    const auto law = TailLawSpec::generalized_pareto(0.25, 1.0);
    const auto factors = FactorLawSpec::independent({law});
    const auto s = pushforward_losses(factors, net, 20000, Rng::stream(21, 0));
    // Kolmogorov-Smirnov-style check at a few quantiles
    for (const double beta : {0.5, 0.1, 0.01}) {
        const double emp = s.order_stat(static_cast<std::size_t>(beta * 20000));
        CHECK(emp == doctest::Approx(law.quantile(beta)).epsilon(0.12));
    }
    CHECK(pushforward_loss_values(factors, net, 0, Rng::stream(21, 1)).empty());
}

TEST_CASE("t-copula pushforward: shape, positivity, and tail-class inheritance") {
    const std::size_t d = 48, K = 24;
    Matrix corr(d, d);
    for (std::size_t i = 0; i < d; ++i) corr.at(i, i) = 1.0;
    std::vector<TailLawSpec> marginals(d, TailLawSpec::generalized_pareto(1.0 / 3.0, 1.0));
    const auto factors = FactorLawSpec::student_t(marginals, 4.0, corr);
    const NetworkModel net(interpolated_exposure(d, K, 0.0), Matrix(), 1.0, true, false);
    const auto s = pushforward_losses(factors, net, 500, Rng::stream(22, 0));
    CHECK(s.size() == 500);
    for (std::size_t i = 1; i <= s.size(); ++i) CHECK(s.order_stat(i) > 0.0);

    // gamma inheritance (Hill on the pushforward; the marginal index is 3)
    const NetworkModel net1(interpolated_exposure(d, K, 1.0), Matrix(), 1.0, true, false);
    int in_band = 0;
    for (int seed = 0; seed < 20; ++seed) {
        const auto big = pushforward_losses(factors, net1, 100000, Rng::stream(23, seed));
        const double g = hill_estimate(big, 316);
        if (g >= 2.2 && g <= 3.8) ++in_band;
    }
    CHECK(in_band == 20);
}

TEST_CASE("black-scholes sanity") {
    // at-the-money call, tau=1: delta in (0.5, 0.7)
    const double delta = black_scholes_delta(25.0, 25.0, 0.1, std::sqrt(0.075), 1.0);
    CHECK(delta > 0.5);
    CHECK(delta < 0.8);
    CHECK(black_scholes_call(25.0, 25.0, 0.1, std::sqrt(0.075), 0.0) == doctest::Approx(0.0));
    CHECK(black_scholes_delta(30.0, 25.0, 0.1, 0.3, 0.0) == doctest::Approx(1.0));
}

namespace {

// straight-line reference implementation of the same recursion, kept
// deliberately separate from the library path; returns the signed error
double hedging_error_reference_signed(const HedgeConfig& cfg, const std::vector<double>& normals) {
    const double sigma = std::sqrt(cfg.sigma2);
    const double m = static_cast<double>(cfg.rebalances);
    std::vector<double> S(cfg.rebalances + 1);
    S[0] = cfg.S0;
    for (std::size_t i = 1; i <= cfg.rebalances; ++i)
        S[i] = S[i - 1] * std::exp((cfg.mu - 0.5 * cfg.sigma2) / m + sigma / std::sqrt(m) * normals[i - 1]);
    std::vector<double> delta(cfg.rebalances);
    for (std::size_t i = 0; i < cfg.rebalances; ++i)
        delta[i] = black_scholes_delta(S[i], cfg.strike, cfg.r, sigma, 1.0 - static_cast<double>(i) / m);
    double cash = black_scholes_call(cfg.S0, cfg.strike, cfg.r, sigma, 1.0) - delta[0] * S[0];
    for (std::size_t i = 1; i < cfg.rebalances; ++i) {
        cash = cash * std::exp(cfg.r / m) - S[i] * (delta[i] - delta[i - 1]) -
               cfg.cost_per_share * S[i] * std::fabs(delta[i] - delta[i - 1]);
    }
    cash *= std::exp(cfg.r / m);
    const double payoff = std::max(0.0, S[cfg.rebalances] - cfg.strike);
    return payoff - cash - delta[cfg.rebalances - 1] * S[cfg.rebalances];
}

double hedging_error_reference(const HedgeConfig& cfg, const std::vector<double>& normals) {
    return std::fabs(hedging_error_reference_signed(cfg, normals));
}

}  // namespace

TEST_CASE("hedging recursion matches a straight-line reference") {
    HedgeConfig cfg;
    cfg.rebalances = 2;
    // replay the library's normals: one uniform per step through the same rng
    for (int trial = 0; trial < 5; ++trial) {
        Rng rng = Rng::stream(31, trial);
        Rng replay = rng;
        std::vector<double> normals;
        for (int i = 0; i < 2; ++i) normals.push_back(normal_quantile(replay.next_uniform()));
        const double lib = simulate_hedging_error(cfg, rng);
        const double ref = hedging_error_reference(cfg, normals);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
    }
    HedgeConfig deep = cfg;
    deep.rebalances = 7;
    for (int trial = 0; trial < 3; ++trial) {
        Rng rng = Rng::stream(32, trial);
        Rng replay = rng;
        std::vector<double> normals;
        for (int i = 0; i < 7; ++i) normals.push_back(normal_quantile(replay.next_uniform()));
        const double lib = simulate_hedging_error(deep, rng);
        CHECK(lib == doctest::Approx(hedging_error_reference(deep, normals)).epsilon(1e-12));
    }
}

TEST_CASE("hedging recursion hand terms") {
    // single rebalance-free step with r=0: cash only grows by the (unit) factor
    HedgeConfig cfg;
    cfg.r = 0.0;
    cfg.rebalances = 1;
    Rng rng = Rng::stream(33, 0);
    Rng replay = rng;
    const double z = normal_quantile(replay.next_uniform());
    const double sigma = std::sqrt(cfg.sigma2);
    const double S1 = cfg.S0 * std::exp((cfg.mu - 0.5 * cfg.sigma2) + sigma * z);
    const double delta0 = black_scholes_delta(cfg.S0, cfg.strike, 0.0, sigma, 1.0);
    const double cash0 = black_scholes_call(cfg.S0, cfg.strike, 0.0, sigma, 1.0) - delta0 * cfg.S0;
    const double expected = std::fabs(std::max(S1 - cfg.strike, 0.0) - cash0 - delta0 * S1);
    CHECK(simulate_hedging_error(cfg, rng) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("transaction cost term deducts k1 * S * |trade|") {
    // two steps; compare k1 = 0 vs k1 = 0.01 on identical paths
    HedgeConfig base;
    base.rebalances = 2;
    base.cost_per_share = 0.0;
    HedgeConfig costly = base;
    costly.cost_per_share = 0.01;
    Rng r2 = Rng::stream(34, 0);
    Rng replay = Rng::stream(34, 0);
    std::vector<double> normals;
    for (int i = 0; i < 2; ++i) normals.push_back(normal_quantile(replay.next_uniform()));
    const double sigma = std::sqrt(base.sigma2);
    const double m = 2.0;
    const double S1 = base.S0 * std::exp((base.mu - 0.5 * base.sigma2) / m + sigma / std::sqrt(m) * normals[0]);
    const double d0 = black_scholes_delta(base.S0, base.strike, base.r, sigma, 1.0);
    const double d1 = black_scholes_delta(S1, base.strike, base.r, sigma, 0.5);
    const double cost = 0.01 * S1 * std::fabs(d1 - d0);
    // the deducted cost accrues one period of interest inside the recursion
    const double signed_free = hedging_error_reference_signed(base, normals);
    const double expected = std::fabs(signed_free + cost * std::exp(base.r / m));
    CHECK(simulate_hedging_error(costly, r2) == doctest::Approx(expected).epsilon(1e-9));
}
