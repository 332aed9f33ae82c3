#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tailrisk/rng.hpp"

namespace tailrisk {

// Tail regime of a loss law: Frechet means the survival function is
// regularly varying with index -gamma, Gumbel means the cumulative hazard
// is regularly varying with index gamma.
struct TailRegime {
    enum class Kind { Frechet, Gumbel };
    Kind kind;
    double gamma;

    static TailRegime frechet(double gamma) { return {Kind::Frechet, gamma}; }
    static TailRegime gumbel(double gamma) { return {Kind::Gumbel, gamma}; }
    bool heavy() const { return kind == Kind::Frechet; }
    std::string name() const { return kind == Kind::Frechet ? "frechet" : "gumbel"; }
};

// Analytic loss distribution with explicit survival, quantile and sampler.
//
// Families:
//   GeneralizedPareto(alpha, sigma): Fbar(x) = (1 + alpha x / sigma)^(-1/alpha)
//   WeibullType(c, q):               Fbar(x) = exp(-c x^q)
//   SurvivalFormula(a, b, k):        Fbar(x) = k x^-a (log x)^b for x >= x0,
//                                    linear cdf (uniform bulk) on [0, x0]
//   HazardFormula(q, r):             Lambda(x) = x^q log^r(1+x) for x >= x0
//   LognormalStd:                    log X ~ N(0,1)
//   Mixture(base, cont, eps):        Fbar = (1-eps) Fbar_base + eps Fbar_cont
class TailLawSpec {
  public:
    enum class Family { GeneralizedPareto, WeibullType, SurvivalFormula, HazardFormula, LognormalStd, Mixture };

    static TailLawSpec generalized_pareto(double shape, double scale);
    static TailLawSpec weibull_type(double scale_c, double shape_q);
    static TailLawSpec exponential() { return weibull_type(1.0, 1.0); }
    static TailLawSpec survival_formula(double tail_exponent, double log_power, double prefactor);
    static TailLawSpec hazard_formula(double exponent_q, double log_power_r);
    static TailLawSpec lognormal_std();
    static TailLawSpec mixture(TailLawSpec base, TailLawSpec contaminant, double eps);

    double survival(double x) const;

    /// v_{1-beta} = inf{u : Fbar(u) <= beta}; closed form where available,
    /// otherwise bracketed bisection to relative tolerance 1e-10.
    double quantile(double beta) const;

    double sample_one(Rng& rng) const;

    std::optional<TailRegime> regime() const;

    Family family() const { return family_; }
    double splice_point() const { return x0_; }
    std::string name() const;

  private:
    TailLawSpec(Family f) : family_(f) {}

    double tail_formula(double x) const;  // SurvivalFormula/HazardFormula raw tail

    Family family_;
    double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
    double x0_ = 0.0;        // splice point for the formula families
    double s0_ = 1.0;        // survival at the splice point
    double eps_ = 0.0;       // mixture weight
    std::shared_ptr<const TailLawSpec> base_, cont_;
};

double survival(const TailLawSpec& law, double x);
double quantile(const TailLawSpec& law, double beta);

/// n i.i.d. draws via inverse-transform sampling; deterministic given rng.
std::vector<double> sample(const TailLawSpec& law, std::size_t n, Rng rng);

/// Mean and standard deviation by quantile-space quadrature (used for
/// moment-matched Gaussian nominals).
std::pair<double, double> law_mean_sd(const TailLawSpec& law);

}  // namespace tailrisk
