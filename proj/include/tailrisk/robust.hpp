#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tailrisk/divergences.hpp"
#include "tailrisk/evt.hpp"
#include "tailrisk/nominal.hpp"
#include "tailrisk/risk_measures.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/tail_laws.hpp"
#include "tailrisk/weights.hpp"

namespace tailrisk {

struct SolverConfig {
    double tolerance = 1e-7;     // relative objective tolerance
    int max_iters = 500;         // coordinate-descent sweeps per restart
    double lambda_floor = 1e-12;
};

enum class SolveStatus { Converged, WorstCaseInfinite, NonConvergence };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged:
            return "converged";
        case SolveStatus::WorstCaseInfinite:
            return "worst_case_infinite";
        case SolveStatus::NonConvergence:
            return "non_convergence";
    }
    return "?";
}

struct RobustEvalResult {
    double value = 0.0;
    double u_star = 0.0;
    double eta_star = 0.0;
    double lambda_star = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::Converged;
    double mc_stderr = 0.0;  // nonzero only for Monte-Carlo-sampled centers
};

struct AmbiguitySpec {
    enum class Kind { Wasserstein, PhiBall };
    Kind kind;
    double p = 1.0;                 // Wasserstein order
    std::optional<PhiSpec> phi;     // PhiBall generator
    double delta = 0.0;

    static AmbiguitySpec wasserstein(double p, double delta) { return {Kind::Wasserstein, p, std::nullopt, delta}; }
    static AmbiguitySpec phi_ball(PhiSpec spec, double delta) { return {Kind::PhiBall, 1.0, spec, delta}; }
};

// ---- Wasserstein worst case ------------------------------------------------

/// Closed-form worst-case CVaR over a p-Wasserstein ball (tail shift by
/// delta/beta^{1/p}); heavy analytic centers require gamma > p.
RobustEvalResult wasserstein_worst_cvar(const TailLawSpec& center, double p, double delta, double beta);
RobustEvalResult wasserstein_worst_cvar(const WeightedAtoms& center, double p, double delta, double beta);

/// Shifted-quantile evaluation for a general weight; exact for the CVaR
/// weight, a map-induced lower bound otherwise.
double wasserstein_worst_risk(const TailLawSpec& center, const WeightSpec& w, double p, double delta, double beta);

/// inf_{lambda>=0} { lambda delta^p + E[(Z - theta(u,lambda))^+] } with
/// theta(u,lambda) = u - (1-1/p)/(p lambda)^{1/(p-1)}; exact lambda*=1
/// branch when p=1.
double wasserstein_dual_expectation(const WeightedAtoms& sample, double p, double delta, double u);

/// Numeric worst-case CVaR through the dual: inf_u { u + dual_expectation/beta }.
RobustEvalResult wasserstein_dual_cvar(const WeightedAtoms& sample, double p, double delta, double beta);

// ---- phi-divergence dual ---------------------------------------------------

/// Worst-case CVaR over a phi-divergence ball around a discrete center:
/// minimizes u + (eta + delta lambda + lambda E[phi*(((Z-u)^+ - eta)/lambda)])/beta
/// by coordinate descent with exact golden-section line searches from three
/// starting points.
RobustEvalResult phi_dual_cvar(const WeightedAtoms& center, const PhiSpec& spec, double delta, double beta,
                               const SolverConfig& cfg = {});

/// Same, for centers with a known tail regime; refuses KL balls whose worst
/// case is infinite (heavy tails, or Weibull-type with gamma < 1).
RobustEvalResult phi_dual_cvar(const NominalModel& center, const PhiSpec& spec, double delta, double beta,
                               const SolverConfig& cfg = {}, std::size_t grid_atoms_per_decade = 160);
RobustEvalResult phi_dual_cvar(const TailLawSpec& center, const PhiSpec& spec, double delta, double beta,
                               const SolverConfig& cfg = {}, std::size_t grid_atoms_per_decade = 160);

// ---- RPEV-DRO (EVT nominal + super-polynomial phi) --------------------------

struct RegimeRule {
    enum class Mode { Test, ForceHeavy, ForceLight };
    Mode mode = Mode::Test;
    double index_bound_M = 0.0;  // required when mode == Test
    double alpha = 0.05;
    double kappa1 = 0.5;

    static RegimeRule test(double M, double alpha = 0.05, double kappa1 = 0.5) {
        return {Mode::Test, M, alpha, kappa1};
    }
    static RegimeRule force(TailRegime::Kind kind, double kappa1 = 0.5) {
        return {kind == TailRegime::Kind::Frechet ? Mode::ForceHeavy : Mode::ForceLight, 0.0, 0.05, kappa1};
    }
};

struct RpevConfig {
    double delta = 0.1;
    std::size_t tail_draws = 10000;  // N in the tail Monte Carlo
    RegimeRule regime_rule;
    PhiSpec phi = PhiSpec::exp_shifted();
    SolverConfig solver;
    bool compute_stderr = true;      // 10-fold tail-sample batching
};

struct RpevResult {
    RobustEvalResult eval;
    EvtCalibration calibration;
};

/// Full RPEV-DRO pipeline on data: regime test -> EVT nominal -> tail
/// sampling -> Eq.-(24)-style weighted objective.
RpevResult rpev_dro_cvar(const EmpiricalSample& sample, double beta, double beta0, const RpevConfig& cfg, Rng rng);

// ---- worst-case tail cdf over phi balls -------------------------------------

struct WorstCaseSurvival {
    double fbar_wc;      // worst-case survival at x (clipped to <= 1)
    double s;            // likelihood multiplier at x
    bool feasible;       // false => budget pushes the survival to 1
    double asymptotic;   // phi^{<-}(delta / fbar) * fbar approximation
};

/// Root of delta = (1-F) phi((1-sF)/(1-F)) + F phi(s) over s in [1, 1/F).
WorstCaseSurvival worst_case_survival_at(double fbar_center, const PhiSpec& spec, double delta);

WorstCaseSurvival worst_case_survival(const TailLawSpec& center, const PhiSpec& spec, double delta, double x);
WorstCaseSurvival worst_case_survival(const NominalModel& center, const PhiSpec& spec, double delta, double x);

/// Inverse of the worst-case survival (bisection, 1e-9 relative).
double worst_case_quantile(const TailLawSpec& center, const PhiSpec& spec, double delta, double t);
double worst_case_quantile(const NominalModel& center, const PhiSpec& spec, double delta, double t);

// ---- asymptotic inflation predictions ---------------------------------------

struct InflationDescriptor {
    enum class Type { LogRatio, ValueRatio, Infinite, RatePreserving };
    Type type;
    double value;  // limit for the ratio types, 1 for rate-preserving
    std::string describe() const;
};

InflationDescriptor inflation_diagnostic(const TailRegime& regime, const AmbiguitySpec& ambiguity);

// ---- utilities ---------------------------------------------------------------

/// Deterministic discrete approximation of a law given by its quantile
/// function: atoms at log-spaced tail levels down to t_floor, weighted by
/// the level increments (total mass 1).
WeightedAtoms stratified_atoms(const std::function<double(double)>& quantile_of_tail_prob, double t_floor,
                               std::size_t per_decade);

/// Eq.-(24) atom set: exact bulk atoms plus Monte-Carlo tail draws weighted
/// beta0_hat/N (data-driven nominals).
WeightedAtoms algorithm1_atoms(const NominalModel& model, std::size_t tail_draws, Rng rng);

}  // namespace tailrisk
