#include "tailrisk/hedging.hpp"

#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

double black_scholes_call(double S, double K, double r, double sigma, double tau) {
    if (tau <= 0.0) return std::max(0.0, S - K);
    const double st = sigma * std::sqrt(tau);
    const double d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * tau) / st;
    const double d2 = d1 - st;
    return S * normal_cdf(d1) - K * std::exp(-r * tau) * normal_cdf(d2);
}

double black_scholes_delta(double S, double K, double r, double sigma, double tau) {
    if (tau <= 0.0) return S > K ? 1.0 : 0.0;
    const double st = sigma * std::sqrt(tau);
    const double d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * tau) / st;
    return normal_cdf(d1);
}

double simulate_hedging_error(const HedgeConfig& cfg, Rng& rng) {
    if (!(cfg.sigma2 > 0.0) || cfg.rebalances < 1) throw DomainError("HedgeConfig: needs sigma2 > 0 and m >= 1");
    const double sigma = std::sqrt(cfg.sigma2);
    const auto m = static_cast<double>(cfg.rebalances);
    const double dt = 1.0 / m;
    const double drift = (cfg.mu - 0.5 * cfg.sigma2) * dt;
    const double vol = sigma * std::sqrt(dt);
    const double growth = std::exp(cfg.r * dt);

    double S = cfg.S0;
    double delta_prev = black_scholes_delta(S, cfg.strike, cfg.r, sigma, 1.0);
    double cash = black_scholes_call(S, cfg.strike, cfg.r, sigma, 1.0) - delta_prev * S;

    for (std::size_t i = 1; i < cfg.rebalances; ++i) {
        S *= std::exp(drift + vol * normal_quantile(rng.next_uniform()));
        const double tau = 1.0 - static_cast<double>(i) * dt;
        const double delta = black_scholes_delta(S, cfg.strike, cfg.r, sigma, tau);
        const double trade = delta - delta_prev;
        cash = cash * growth - S * trade - cfg.cost_per_share * S * std::fabs(trade);
        delta_prev = delta;
    }

    S *= std::exp(drift + vol * normal_quantile(rng.next_uniform()));
    cash *= growth;
    const double stock = delta_prev * S;
    const double payoff = std::max(0.0, S - cfg.strike);
    return std::fabs(payoff - cash - stock);
}

std::vector<double> simulate_hedging_errors(const HedgeConfig& cfg, std::size_t n, Rng rng) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng sub = rng.split(i);
        out.push_back(simulate_hedging_error(cfg, sub));
    }
    return out;
}

}  // namespace tailrisk
