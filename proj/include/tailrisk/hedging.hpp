#pragma once

#include <cstddef>
#include <vector>

#include "tailrisk/rng.hpp"

namespace tailrisk {

struct HedgeConfig {
    double S0 = 25.0;
    double strike = 25.0;
    double mu = 0.10;
    double sigma2 = 0.075;   // GBM variance parameter
    double r = 0.10;
    double cost_per_share = 0.0025;  // k1, proportional transaction cost
    std::size_t rebalances = 10;     // m steps over horizon 1
};

double black_scholes_call(double S, double K, double r, double sigma, double tau);
double black_scholes_delta(double S, double K, double r, double sigma, double tau);

/// One GBM path, Black-Scholes delta at each rebalance, cash recursion with
/// proportional costs. Returns |payoff - terminal portfolio value|. The
/// initial (stock, cash) replicate the zero-cost option price; the previous
/// delta at inception equals the initial delta, so no phantom trade occurs.
double simulate_hedging_error(const HedgeConfig& cfg, Rng& rng);

std::vector<double> simulate_hedging_errors(const HedgeConfig& cfg, std::size_t n, Rng rng);

}  // namespace tailrisk
