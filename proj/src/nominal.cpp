#include "tailrisk/nominal.hpp"

#include <algorithm>
#include <cmath>

#include "tailrisk/errors.hpp"

namespace tailrisk {

NominalModel NominalModel::from_data(const EvtCalibration& cal, const EmpiricalSample& sample) {
    NominalModel m;
    m.kind_ = Kind::DataDriven;
    m.regime_ = cal.regime;
    m.v_ = cal.v_hat;
    if (!(m.regime_.gamma > 0.0)) throw PreconditionViolated("build_nominal: gamma must be positive");

    const auto& z = sample.sorted_desc();
    const std::size_t n = z.size();
    std::size_t exceed = 0;
    while (exceed < n && z[exceed] > m.v_) ++exceed;
    if (exceed == 0) throw DegenerateTail("build_nominal: no observations exceed the splice point");
    m.beta0_hat_ = static_cast<double>(exceed) / static_cast<double>(n);
    m.bulk_desc_.assign(z.begin() + exceed, z.end());
    if (m.bulk_desc_.empty()) throw TooFewTailSamples("build_nominal: empty bulk below the splice point");
    return m;
}

NominalModel NominalModel::oracle(const TailLawSpec& law, double beta0) {
    if (!(beta0 > 0.0 && beta0 < 1.0)) throw DomainError("oracle nominal: beta0 must lie in (0,1)");
    const auto regime = law.regime();
    if (!regime) throw PreconditionViolated("oracle nominal: law has no Frechet/Gumbel regime");
    NominalModel m;
    m.kind_ = Kind::Oracle;
    m.regime_ = *regime;
    m.v_ = law.quantile(beta0);
    m.beta0_hat_ = beta0;
    m.bulk_law_ = law;
    return m;
}

double NominalModel::bulk_weight() const {
    if (kind_ != Kind::DataDriven) throw PreconditionViolated("bulk_weight: defined for data-driven nominals");
    return (1.0 - beta0_hat_) / static_cast<double>(bulk_desc_.size());
}

double NominalModel::survival(double x) const {
    if (x >= v_) {
        const double ratio = x / v_;
        if (regime_.heavy()) return beta0_hat_ * std::pow(ratio, -regime_.gamma);
        return std::exp(std::log(beta0_hat_) * std::pow(ratio, regime_.gamma));
    }
    if (kind_ == Kind::Oracle) return bulk_law_->survival(x);
    const auto& b = bulk_desc_;
    // atoms strictly above x (sorted descending)
    const std::size_t cnt =
        std::lower_bound(b.begin(), b.end(), x, [](double v, double bound) { return v > bound; }) - b.begin();
    return beta0_hat_ + (1.0 - beta0_hat_) * static_cast<double>(cnt) / static_cast<double>(b.size());
}

double NominalModel::tail_quantile(double t) const {
    if (!(t > 0.0 && t <= beta0_hat_)) throw DomainError("tail_quantile: t must lie in (0, beta0_hat]");
    if (regime_.heavy()) return v_ * std::pow(t / beta0_hat_, -1.0 / regime_.gamma);
    return v_ * std::pow(std::log(t) / std::log(beta0_hat_), 1.0 / regime_.gamma);
}

double NominalModel::quantile(double t) const {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("nominal_quantile: t must lie in (0,1)");
    if (t <= beta0_hat_) return tail_quantile(t);
    if (kind_ == Kind::Oracle) return bulk_law_->quantile(t);
    const auto& b = bulk_desc_;
    const double wb = bulk_weight();
    auto j = static_cast<std::size_t>(std::floor((t - beta0_hat_) / wb)) + 1;
    j = std::min(j, b.size());
    return b[j - 1];
}

std::vector<double> NominalModel::sample_tail(std::size_t N, Rng rng) const {
    std::vector<double> out;
    out.reserve(N);
    const double gamma = regime_.gamma;
    const double log_beta0 = std::log(beta0_hat_);
    // stratified uniforms: U_i is Uniform[1-beta0_hat, 1] marginally, one
    // draw per stratum, which stabilizes the tail Monte Carlo at small N
    for (std::size_t i = 0; i < N; ++i) {
        const double u = (static_cast<double>(i) + rng.next_uniform()) / static_cast<double>(N);
        if (regime_.heavy())
            out.push_back(v_ * std::pow(u, -1.0 / gamma));
        else
            out.push_back(v_ * std::pow((std::log(u) + log_beta0) / log_beta0, 1.0 / gamma));
    }
    return out;
}

NominalModel build_nominal(const EvtCalibration& cal, const EmpiricalSample& sample) {
    return NominalModel::from_data(cal, sample);
}

double nominal_survival(const NominalModel& model, double x) { return model.survival(x); }

double nominal_quantile(const NominalModel& model, double t) { return model.quantile(t); }

std::vector<double> sample_tail(const NominalModel& model, std::size_t N, Rng rng) {
    return model.sample_tail(N, rng);
}

}  // namespace tailrisk
