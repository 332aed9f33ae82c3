#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tailrisk/tail_laws.hpp"
#include "tailrisk/weights.hpp"

namespace tailrisk {

// Discrete law with atoms sorted descending and prefix sums, so CVaR and
// expectations of (Z-u)^+ are O(log n) after construction.
class WeightedAtoms {
  public:
    WeightedAtoms(std::vector<double> values, std::vector<double> weights);
    explicit WeightedAtoms(std::vector<double> values);  // equal weights 1/n

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& weights() const { return weights_; }
    double total_weight() const { return prefix_w_.back(); }

    /// Count of atoms with value strictly greater than u.
    std::size_t count_above(double u) const;
    /// Weight of atoms with value strictly greater than u.
    double weight_above(double u) const;
    /// E[(Z-u)^+] under the (normalized) atom weights.
    double expected_excess(double u) const;
    /// Generalized inverse of the survival function at tail mass beta.
    double quantile(double beta) const;

    struct CvarResult {
        double value;
        double var;  // optimal u in the Rockafellar representation
    };
    /// Exact CVaR of the discrete law at tail level beta.
    CvarResult cvar(double beta) const;

    double prefix_weight(std::size_t i) const { return prefix_w_[i]; }
    double prefix_weighted_value(std::size_t i) const { return prefix_wv_[i]; }

  private:
    std::vector<double> values_;    // sorted descending
    std::vector<double> weights_;   // aligned with values_
    std::vector<double> prefix_w_;  // prefix_w_[i] = sum of first i weights
    std::vector<double> prefix_wv_;
};

/// Exact CVaR of a discrete sample (equal weights).
double sample_cvar(const std::vector<double>& losses, double beta);
double sample_cvar(const WeightedAtoms& atoms, double beta);

/// rho_{1-beta} = int_0^1 w(t) v_{1-beta t}(law) dt by adaptive quadrature
/// with a logarithmic substitution near t=0; relative tolerance 1e-6.
/// Throws DivergentIntegral when the integrand fails integrability.
double risk_measure(const TailLawSpec& law, const WeightSpec& w, double beta);

/// Same quadrature applied to an arbitrary quantile function t -> v_{1-beta t}.
double risk_measure_from_quantile(const std::function<double(double)>& quantile_of_tail_prob, const WeightSpec& w,
                                  double beta);

}  // namespace tailrisk
