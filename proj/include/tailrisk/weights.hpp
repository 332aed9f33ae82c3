#pragma once

#include <string>

namespace tailrisk {

// Spectral weight w(.) on (0,1] defining a tail-weighted risk measure
// rho_{1-beta} = int_0^1 w(t) v_{1-beta t} dt. All families integrate to 1.
class WeightSpec {
  public:
    enum class Family { CVaR, Power, Wang, LogPower, Beta, PolyLog };

    static WeightSpec cvar();
    static WeightSpec power(double k);
    static WeightSpec wang(double lambda);
    static WeightSpec log_power(double p, double q);
    static WeightSpec beta(double p, double q);
    static WeightSpec poly_log(double q);

    double value(double t) const;

    // Regular-variation index of w at 0 (w(t) ~ t^kappa up to slowly
    // varying factors); drives the integrability condition 1/gamma < kappa+1.
    double kappa() const;

    // Power-singularity exponent of w at t=1 (0 when smooth there); used by
    // the normalization quadrature.
    double right_endpoint_exponent() const;

    Family family() const { return family_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }
    std::string name() const;

  private:
    WeightSpec(Family f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}

    Family family_;
    double p1_;
    double p2_;
};

/// w(t) per the family formula; t must lie in (0,1].
double weight_value(const WeightSpec& w, double t);

/// int_0^1 w(t) dt by singularity-aware quadrature (should be 1).
double weight_integral(const WeightSpec& w);

}  // namespace tailrisk
