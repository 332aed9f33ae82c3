#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tailrisk/evt.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/tail_laws.hpp"

namespace tailrisk {

// EVT-spliced nominal: bulk below the intermediate quantile v (empirical in
// data mode, the analytic law in oracle mode) plus a parametric tail beyond:
//   heavy (Frechet): Fbar(x) = beta0_hat (x/v)^(-gamma)
//   light (Gumbel):  Fbar(x) = beta0_hat^((x/v)^gamma)
class NominalModel {
  public:
    enum class Kind { Oracle, DataDriven };

    /// Data-driven nominal from a calibration over the same sample. Ties at
    /// the splice move the tail mass to the realized exceedance fraction.
    static NominalModel from_data(const EvtCalibration& cal, const EmpiricalSample& sample);

    /// Oracle nominal: true law below its beta0-quantile, true tail index
    /// beyond. Throws PreconditionViolated when the law has no regime.
    static NominalModel oracle(const TailLawSpec& law, double beta0);

    double survival(double x) const;
    double quantile(double t) const;

    /// Eq.-form tail inverse, valid for t <= beta0_hat.
    double tail_quantile(double t) const;

    /// N draws from the tail component (all >= v): inverse transform of
    /// V ~ Uniform(0, beta0_hat], drawn directly to avoid cancellation.
    std::vector<double> sample_tail(std::size_t N, Rng rng) const;

    Kind kind() const { return kind_; }
    const TailRegime& regime() const { return regime_; }
    double splice_point() const { return v_; }
    double tail_mass() const { return beta0_hat_; }
    const std::vector<double>& bulk_points() const { return bulk_desc_; }
    /// Weight per bulk atom, (1 - beta0_hat) / #bulk (data mode only).
    double bulk_weight() const;
    const std::optional<TailLawSpec>& bulk_law() const { return bulk_law_; }

  private:
    NominalModel() = default;

    Kind kind_ = Kind::Oracle;
    TailRegime regime_{TailRegime::Kind::Frechet, 1.0};
    double v_ = 0.0;
    double beta0_hat_ = 0.0;
    std::optional<TailLawSpec> bulk_law_;
    std::vector<double> bulk_desc_;
};

NominalModel build_nominal(const EvtCalibration& cal, const EmpiricalSample& sample);
double nominal_survival(const NominalModel& model, double x);
double nominal_quantile(const NominalModel& model, double t);
std::vector<double> sample_tail(const NominalModel& model, std::size_t N, Rng rng);

}  // namespace tailrisk
