#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tailrisk/hedging.hpp"
#include "tailrisk/network.hpp"
#include "tailrisk/robust.hpp"

namespace tailrisk {

// Rule mapping a target level beta (and sample size) to the intermediate
// level beta0.
struct Beta0Rule {
    enum class Mode { FixedTheta, CapSqrtBeta, FixedLevel };
    Mode mode = Mode::CapSqrtBeta;
    double theta = 0.5;
    double cap = 0.1;
    double level = 0.1;

    static Beta0Rule fixed_theta(double theta) { return {Mode::FixedTheta, theta, 0.0, 0.0}; }
    static Beta0Rule cap_sqrt_beta(double cap = 0.1) { return {Mode::CapSqrtBeta, 0.0, cap, 0.0}; }
    static Beta0Rule fixed_level(double level) { return {Mode::FixedLevel, 0.0, 0.0, level}; }

    double resolve(double beta, std::size_t n) const;
    std::string describe() const;
};

struct MethodConfig {
    enum class Kind { Rpev, PhiEvt, PhiGauss, WassersteinSaa, Saa };

    std::string name;
    Kind kind = Kind::Rpev;
    PhiSpec phi = PhiSpec::exp_shifted();
    double delta = 0.1;
    double p = 1.0;                  // Wasserstein order
    std::size_t tail_draws = 2000;
    RegimeRule regime_rule;
    Beta0Rule beta0;
    SolverConfig solver;

    static MethodConfig rpev(double delta, RegimeRule rule, Beta0Rule beta0, std::size_t tail_draws = 2000);
    static MethodConfig phi_evt(PhiSpec phi, double delta, RegimeRule rule, Beta0Rule beta0,
                                std::size_t tail_draws = 2000);
    static MethodConfig phi_gauss(PhiSpec phi, double delta);
    static MethodConfig wasserstein_saa(double p, double delta);
    static MethodConfig saa();
};

struct ResultRow {
    std::string method;
    double beta;
    long rep;  // replication index, window index, or rebalance count
    double value;
    std::string status;
};

struct CellSummary {
    std::string method;
    double beta;
    long reps = 0;
    long failures = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double coverage = 0.0;  // fraction of reps at or above the ground truth
    double truth = 0.0;
};

struct StudyResult {
    std::vector<ResultRow> rows;
    std::vector<CellSummary> cells;
    std::vector<double> beta_grid;
    std::vector<double> truth;  // aligned with beta_grid (empty when n/a)
};

// Data source abstraction: synthetic law, network pushforward, or hedging
// errors all reduce to "draw n losses".
struct DataSource {
    std::string name;
    std::function<std::vector<double>(std::size_t, Rng)> draw;

    static DataSource from_law(const TailLawSpec& law);
    static DataSource from_network(const FactorLawSpec& factors, const NetworkModel& model);
};

/// Linear-interpolation sample quantile (ascending order, q in [0,1]).
double quantile_type7(std::vector<double> sorted_ascending, double q);

/// Ground truth rho_{1-beta}(Q) by one large Monte-Carlo run.
std::vector<double> ground_truth_curve(const DataSource& source, const std::vector<double>& beta_grid,
                                       std::size_t draws, Rng rng);

/// Evaluate one method on one dataset at one beta.
ResultRow evaluate_method(const MethodConfig& method, const EmpiricalSample& sample, double beta, Rng tail_rng);

// ---- studies -----------------------------------------------------------------

struct ReplicationPlan {
    std::vector<double> beta_grid;
    std::size_t n = 500;
    long reps = 100;
    std::size_t truth_draws = 5000000;
    std::uint64_t seed = 1;
};

/// Seeded replication study with common random numbers across methods and
/// coverage against the Monte-Carlo ground truth.
StudyResult run_replication_study(const DataSource& source, const std::vector<MethodConfig>& methods,
                                  const ReplicationPlan& plan);

struct SweepPlan {
    std::vector<double> delta_grid;
    std::vector<double> theta_grid;
    double beta = 1e-3;
    std::size_t n = 500;
    long reps = 100;
    std::size_t truth_draws = 5000000;
    std::uint64_t seed = 1;
};

/// RPEV-DRO over a (delta, theta) grid; one cell per pair.
StudyResult run_parameter_sweep(const DataSource& source, const MethodConfig& rpev_template, const SweepPlan& plan);

struct WindowPlan {
    std::size_t n = 200;
    std::size_t stride = 60;
    long reps = 30;
    std::vector<double> beta_grid;

    void validate(std::size_t total) const;
};

/// Rolling windows over time-ordered data; window k holds observations
/// sk+1 .. sk+n (1-based). Benchmark cells hold the full-sample CVaR.
StudyResult run_rolling_windows(const std::vector<double>& data, const WindowPlan& plan,
                                const std::vector<MethodConfig>& methods, std::uint64_t seed);

struct HedgePlan {
    HedgeConfig config;
    std::vector<std::size_t> m_grid;
    double beta = 0.01;
    std::size_t n = 200;
    std::size_t truth_paths = 1000000;
    std::uint64_t seed = 1;
};

struct HedgeStudyResult {
    StudyResult study;                  // rows: rep column carries m
    std::vector<double> truth_by_m;     // CVaR of the hedging error per m
    bool truth_u_shaped = false;
    struct MethodPick {
        std::string method;
        std::size_t argmin_m;
        double guarantee_ratio;  // truth(argmin) / min_m truth
    };
    std::vector<MethodPick> picks;
};

HedgeStudyResult hedging_frequency_study(const HedgePlan& plan, const std::vector<MethodConfig>& methods);

}  // namespace tailrisk
