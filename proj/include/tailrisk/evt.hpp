#pragma once

#include <cstddef>
#include <vector>

#include "tailrisk/tail_laws.hpp"

namespace tailrisk {

// Loss sample held sorted descending: values[0] is the largest observation
// Z_(1). Immutable after construction.
class EmpiricalSample {
  public:
    explicit EmpiricalSample(std::vector<double> losses);

    std::size_t size() const { return sorted_.size(); }
    /// i-th largest observation, 1-based: order_stat(1) is the maximum.
    double order_stat(std::size_t i) const { return sorted_.at(i - 1); }
    const std::vector<double>& sorted_desc() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

/// v_{1-beta0}(Q_hat) = Z_(floor(n beta0)).
double intermediate_var(const EmpiricalSample& sample, double beta0);

/// Reciprocal-Hill tail index: ((1/k) sum_{i<=k} log(Z_(i)/Z_(k+1)))^{-1}.
double hill_estimate(const EmpiricalSample& sample, std::size_t k);

/// Light-tail (Weibull-type) index: log(1/kappa1) / log(Z_(kn)/Z_(k1n)) with
/// kn = floor(n beta0), k1n = floor(n beta0^kappa1).
double light_tail_estimate(const EmpiricalSample& sample, double beta0, double kappa1 = 0.5);

struct RegimeDecision {
    TailRegime regime;
    bool rejected_h0;     // REJECT H0: gamma >= M  =>  heavy-tail evidence
    double hill_gamma;    // Hill estimate used by the test
    double threshold;     // M (1 - z_{1-alpha}/sqrt(k))
    std::size_t k;
};

/// One-sided Hill diagnostic: REJECT H0 (gamma >= M) when
/// hill < M (1 - z_{1-alpha}/sqrt(k)); rejection selects the Frechet regime
/// with the Hill index, otherwise the Gumbel regime with the light-tail
/// estimate at level beta0 = k/n.
RegimeDecision regime_test(const EmpiricalSample& sample, std::size_t k, double index_bound_M, double alpha,
                           double kappa1 = 0.5);

// Calibration summary feeding the nominal construction.
struct EvtCalibration {
    double theta;        // intermediate exponent (beta0 = n^-theta) when used
    double beta0;        // intermediate level
    std::size_t k_n;     // floor(n beta0)
    double gamma_hat;
    TailRegime regime;
    double v_hat;        // Z_(k_n)
    double beta0_hat;    // (k_n - 1)/n adjustment
};

/// Calibrate from beta0 directly (theta recorded as log beta0 / -log n).
EvtCalibration calibrate(const EmpiricalSample& sample, double beta0, double index_bound_M, double alpha,
                         double kappa1 = 0.5);

/// Calibrate with a forced regime (no diagnostic).
EvtCalibration calibrate_forced(const EmpiricalSample& sample, double beta0, TailRegime::Kind kind,
                                double kappa1 = 0.5);

}  // namespace tailrisk
