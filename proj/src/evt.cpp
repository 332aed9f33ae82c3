#include "tailrisk/evt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

EmpiricalSample::EmpiricalSample(std::vector<double> losses) : sorted_(std::move(losses)) {
    if (sorted_.size() < 2) throw EmptyData("EmpiricalSample needs at least 2 observations");
    std::stable_sort(sorted_.begin(), sorted_.end(), std::greater<double>());
}

double intermediate_var(const EmpiricalSample& sample, double beta0) {
    const auto k = static_cast<std::size_t>(std::floor(sample.size() * beta0));
    if (k < 1) throw TooFewTailSamples("intermediate_var: floor(n beta0) < 1");
    return sample.order_stat(std::min(k, sample.size()));
}

double hill_estimate(const EmpiricalSample& sample, std::size_t k) {
    const std::size_t n = sample.size();
    if (k < 2 || k > n - 1) throw PreconditionViolated("hill_estimate: need 2 <= k <= n-1");
    const double pivot = sample.order_stat(k + 1);
    if (!(pivot > 0.0)) throw PreconditionViolated("hill_estimate: Z_(k+1) must be positive");
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) acc += std::log(sample.order_stat(i) / pivot);
    if (acc <= 0.0) throw DegenerateTail("hill_estimate: top k+1 order statistics coincide");
    return static_cast<double>(k) / acc;
}

double light_tail_estimate(const EmpiricalSample& sample, double beta0, double kappa1) {
    if (!(kappa1 > 0.0 && kappa1 < 1.0)) throw DomainError("light_tail_estimate: kappa1 must lie in (0,1)");
    const std::size_t n = sample.size();
    const auto k_n = static_cast<std::size_t>(std::floor(n * beta0));
    const auto k_1n = static_cast<std::size_t>(std::floor(n * std::pow(beta0, kappa1)));
    if (k_n < 2) throw TooFewTailSamples("light_tail_estimate: floor(n beta0) < 2");
    if (k_1n <= k_n || k_1n > n) throw PreconditionViolated("light_tail_estimate: needs floor(n beta0^kappa1) > floor(n beta0)");
    const double z_hi = sample.order_stat(k_n);
    const double z_lo = sample.order_stat(k_1n);
    if (!(z_hi > 0.0) || !(z_lo > 0.0)) throw PreconditionViolated("light_tail_estimate: order statistics must be positive");
    if (z_hi == z_lo) throw DegenerateTail("light_tail_estimate: order statistics coincide");
    return std::log(1.0 / kappa1) / std::log(z_hi / z_lo);
}

RegimeDecision regime_test(const EmpiricalSample& sample, std::size_t k, double index_bound_M, double alpha,
                           double kappa1) {
    if (k < 2) throw PreconditionViolated("regime_test: k must be >= 2");
    if (!(index_bound_M > 0.0)) throw DomainError("regime_test: M must be > 0");
    if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("regime_test: alpha must lie in (0, 0.5)");
    const double gamma_hill = hill_estimate(sample, k);
    const double z = normal_quantile(1.0 - alpha);
    const double threshold = index_bound_M * (1.0 - z / std::sqrt(static_cast<double>(k)));
    RegimeDecision d{};
    d.hill_gamma = gamma_hill;
    d.threshold = threshold;
    d.k = k;
    d.rejected_h0 = gamma_hill < threshold;
    if (d.rejected_h0) {
        d.regime = TailRegime::frechet(gamma_hill);
    } else {
        const double beta0 = static_cast<double>(k) / static_cast<double>(sample.size());
        d.regime = TailRegime::gumbel(light_tail_estimate(sample, beta0, kappa1));
    }
    return d;
}

namespace {

EvtCalibration finish_calibration(const EmpiricalSample& sample, double beta0, TailRegime regime) {
    const std::size_t n = sample.size();
    const auto k_n = static_cast<std::size_t>(std::floor(n * beta0));
    if (k_n < 2) throw TooFewTailSamples("calibrate: floor(n beta0) < 2");
    EvtCalibration cal{};
    cal.theta = std::log(beta0) / -std::log(static_cast<double>(n));
    cal.beta0 = beta0;
    cal.k_n = k_n;
    cal.regime = regime;
    cal.gamma_hat = regime.gamma;
    cal.v_hat = sample.order_stat(k_n);
    cal.beta0_hat = static_cast<double>(k_n - 1) / static_cast<double>(n);
    return cal;
}

}  // namespace

EvtCalibration calibrate(const EmpiricalSample& sample, double beta0, double index_bound_M, double alpha,
                         double kappa1) {
    const std::size_t n = sample.size();
    const auto k_n = static_cast<std::size_t>(std::floor(n * beta0));
    if (k_n < 2) throw TooFewTailSamples("calibrate: floor(n beta0) < 2");
    const RegimeDecision d = regime_test(sample, k_n, index_bound_M, alpha, kappa1);
    return finish_calibration(sample, beta0, d.regime);
}

EvtCalibration calibrate_forced(const EmpiricalSample& sample, double beta0, TailRegime::Kind kind, double kappa1) {
    const std::size_t n = sample.size();
    const auto k_n = static_cast<std::size_t>(std::floor(n * beta0));
    if (k_n < 2) throw TooFewTailSamples("calibrate: floor(n beta0) < 2");
    double gamma_hat;
    if (kind == TailRegime::Kind::Frechet)
        gamma_hat = hill_estimate(sample, k_n);
    else
        gamma_hat = light_tail_estimate(sample, beta0, kappa1);
    return finish_calibration(sample, beta0,
                              kind == TailRegime::Kind::Frechet ? TailRegime::frechet(gamma_hat)
                                                                : TailRegime::gumbel(gamma_hat));
}

}  // namespace tailrisk
