#include "tailrisk/harness.hpp"

#include <algorithm>
#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

double Beta0Rule::resolve(double beta, std::size_t n) const {
    switch (mode) {
        case Mode::FixedTheta:
            return std::pow(static_cast<double>(n), -theta);
        case Mode::CapSqrtBeta:
            return std::min(cap, std::sqrt(beta));
        case Mode::FixedLevel:
            return level;
    }
    return 0.1;
}

std::string Beta0Rule::describe() const {
    switch (mode) {
        case Mode::FixedTheta:
            return "n^-" + std::to_string(theta);
        case Mode::CapSqrtBeta:
            return "min(" + std::to_string(cap) + ", sqrt(beta))";
        case Mode::FixedLevel:
            return std::to_string(level);
    }
    return "?";
}

MethodConfig MethodConfig::rpev(double delta, RegimeRule rule, Beta0Rule beta0, std::size_t tail_draws) {
    MethodConfig m;
    m.name = "rpev";
    m.kind = Kind::Rpev;
    m.phi = PhiSpec::exp_shifted();
    m.delta = delta;
    m.tail_draws = tail_draws;
    m.regime_rule = rule;
    m.beta0 = beta0;
    return m;
}

MethodConfig MethodConfig::phi_evt(PhiSpec phi, double delta, RegimeRule rule, Beta0Rule beta0,
                                   std::size_t tail_draws) {
    MethodConfig m;
    m.name = phi.name() + "_evt";
    m.kind = Kind::PhiEvt;
    m.phi = phi;
    m.delta = delta;
    m.tail_draws = tail_draws;
    m.regime_rule = rule;
    m.beta0 = beta0;
    return m;
}

MethodConfig MethodConfig::phi_gauss(PhiSpec phi, double delta) {
    MethodConfig m;
    m.name = phi.name() + "_gauss";
    m.kind = Kind::PhiGauss;
    m.phi = phi;
    m.delta = delta;
    return m;
}

MethodConfig MethodConfig::wasserstein_saa(double p, double delta) {
    MethodConfig m;
    m.name = "wasserstein" + std::to_string(static_cast<int>(p)) + "_saa";
    m.kind = Kind::WassersteinSaa;
    m.p = p;
    m.delta = delta;
    return m;
}

MethodConfig MethodConfig::saa() {
    MethodConfig m;
    m.name = "saa";
    m.kind = Kind::Saa;
    m.delta = 0.0;
    return m;
}

DataSource DataSource::from_law(const TailLawSpec& law) {
    DataSource s;
    s.name = law.name();
    s.draw = [law](std::size_t n, Rng rng) { return sample(law, n, rng); };
    return s;
}

DataSource DataSource::from_network(const FactorLawSpec& factors, const NetworkModel& model) {
    DataSource s;
    s.name = "network_pushforward";
    s.draw = [factors, model](std::size_t n, Rng rng) {
        return pushforward_loss_values(factors, model, n, rng);
    };
    return s;
}

double quantile_type7(std::vector<double> v, double q) {
    if (v.empty()) throw EmptyData("quantile_type7: empty vector");
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

std::vector<double> ground_truth_curve(const DataSource& source, const std::vector<double>& beta_grid,
                                       std::size_t draws, Rng rng) {
    const auto losses = source.draw(draws, rng);
    const WeightedAtoms atoms(losses);
    std::vector<double> truth;
    truth.reserve(beta_grid.size());
    for (const double beta : beta_grid) truth.push_back(atoms.cvar(beta).value);
    return truth;
}

ResultRow evaluate_method(const MethodConfig& method, const EmpiricalSample& sample, double beta, Rng tail_rng) {
    ResultRow row;
    row.method = method.name;
    row.beta = beta;
    row.rep = 0;
    try {
        switch (method.kind) {
            case MethodConfig::Kind::Saa: {
                row.value = WeightedAtoms(sample.sorted_desc()).cvar(beta).value;
                row.status = "converged";
                break;
            }
            case MethodConfig::Kind::WassersteinSaa: {
                const auto res =
                    wasserstein_worst_cvar(WeightedAtoms(sample.sorted_desc()), method.p, method.delta, beta);
                row.value = res.value;
                row.status = to_string(res.status);
                break;
            }
            case MethodConfig::Kind::PhiGauss: {
                double mean = 0.0, m2 = 0.0;
                const auto& z = sample.sorted_desc();
                for (std::size_t i = 0; i < z.size(); ++i) {
                    const double d = z[i] - mean;
                    mean += d / static_cast<double>(i + 1);
                    m2 += d * (z[i] - mean);
                }
                const double sd = std::sqrt(m2 / static_cast<double>(z.size() > 1 ? z.size() - 1 : 1));
                const double t_floor = std::min(1e-9, beta * 1e-4);
                const auto atoms = stratified_atoms(
                    [mean, sd](double t) { return mean + sd * normal_quantile(1.0 - t); }, t_floor, 160);
                const auto res = phi_dual_cvar(atoms, method.phi, method.delta, beta, method.solver);
                row.value = res.value;
                row.status = to_string(res.status);
                break;
            }
            case MethodConfig::Kind::Rpev:
            case MethodConfig::Kind::PhiEvt: {
                RpevConfig cfg;
                cfg.delta = method.delta;
                cfg.tail_draws = method.tail_draws;
                cfg.regime_rule = method.regime_rule;
                cfg.phi = method.phi;
                cfg.solver = method.solver;
                cfg.compute_stderr = false;
                const double beta0 = method.beta0.resolve(beta, sample.size());
                const auto res = rpev_dro_cvar(sample, beta, beta0, cfg, tail_rng);
                row.value = res.eval.value;
                row.status = to_string(res.eval.status);
                break;
            }
        }
    } catch (const Error& e) {
        row.value = std::nan("");
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

namespace {

CellSummary summarize_cell(const std::string& method, double beta, const std::vector<double>& values, long reps,
                           long failures, double truth) {
    CellSummary c;
    c.method = method;
    c.beta = beta;
    c.reps = reps;
    c.failures = failures;
    c.truth = truth;
    if (!values.empty()) {
        c.median = quantile_type7(values, 0.5);
        c.q1 = quantile_type7(values, 0.25);
        c.q3 = quantile_type7(values, 0.75);
        long covered = 0;
        for (const double v : values)
            if (v >= truth) ++covered;
        c.coverage = static_cast<double>(covered) / static_cast<double>(reps);
    }
    return c;
}

}  // namespace

StudyResult run_replication_study(const DataSource& source, const std::vector<MethodConfig>& methods,
                                  const ReplicationPlan& plan) {
    if (plan.reps < 2) throw PreconditionViolated("run_replication_study: needs reps >= 2");
    if (plan.beta_grid.empty() || methods.empty()) throw ConfigError("run_replication_study: empty grid or methods");

    const Rng master = Rng::stream(plan.seed, 0);
    StudyResult out;
    out.beta_grid = plan.beta_grid;
    out.truth = ground_truth_curve(source, plan.beta_grid, plan.truth_draws, master.split(1));

    // values[m][b][r]
    std::vector<std::vector<std::vector<double>>> values(
        methods.size(), std::vector<std::vector<double>>(plan.beta_grid.size()));
    std::vector<std::vector<long>> failures(methods.size(), std::vector<long>(plan.beta_grid.size(), 0));
    std::vector<std::vector<std::vector<ResultRow>>> rows(
        methods.size(), std::vector<std::vector<ResultRow>>(plan.beta_grid.size()));

    for (long r = 1; r <= plan.reps; ++r) {
        // common random numbers: one dataset per replication, shared by all
        // methods
        const auto data = source.draw(plan.n, master.split(1000 + static_cast<std::uint64_t>(r)));
        const EmpiricalSample sample(data);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            for (std::size_t b = 0; b < plan.beta_grid.size(); ++b) {
                const std::uint64_t tag =
                    1000000ULL + static_cast<std::uint64_t>(r) * 4096ULL + m * 64ULL + b;
                ResultRow row = evaluate_method(methods[m], sample, plan.beta_grid[b], master.split(tag));
                row.rep = r;
                if (std::isnan(row.value) || row.status.rfind("error", 0) == 0 ||
                    row.status == "non_convergence") {
                    ++failures[m][b];
                } else {
                    values[m][b].push_back(row.value);
                }
                rows[m][b].push_back(std::move(row));
            }
        }
    }

    for (std::size_t m = 0; m < methods.size(); ++m) {
        for (std::size_t b = 0; b < plan.beta_grid.size(); ++b) {
            for (auto& row : rows[m][b]) out.rows.push_back(std::move(row));
            out.cells.push_back(summarize_cell(methods[m].name, plan.beta_grid[b], values[m][b], plan.reps,
                                               failures[m][b], out.truth[b]));
        }
    }
    return out;
}

StudyResult run_parameter_sweep(const DataSource& source, const MethodConfig& rpev_template, const SweepPlan& plan) {
    if (plan.delta_grid.empty() || plan.theta_grid.empty()) throw ConfigError("run_parameter_sweep: empty grid");
    std::vector<MethodConfig> methods;
    for (const double delta : plan.delta_grid) {
        for (const double theta : plan.theta_grid) {
            MethodConfig m = rpev_template;
            m.delta = delta;
            m.beta0 = Beta0Rule::fixed_theta(theta);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%s_d%g_th%g", rpev_template.name.c_str(), delta, theta);
            m.name = buf;
            methods.push_back(std::move(m));
        }
    }
    ReplicationPlan rp;
    rp.beta_grid = {plan.beta};
    rp.n = plan.n;
    rp.reps = plan.reps;
    rp.truth_draws = plan.truth_draws;
    rp.seed = plan.seed;
    return run_replication_study(source, methods, rp);
}

void WindowPlan::validate(std::size_t total) const {
    if (reps < 1 || n < 2) throw ConfigError("WindowPlan: needs reps >= 1 and n >= 2");
    if (stride * static_cast<std::size_t>(reps) + n > total)
        throw PlanOverrun("WindowPlan: s*reps + n exceeds the data length");
}

StudyResult run_rolling_windows(const std::vector<double>& data, const WindowPlan& plan,
                                const std::vector<MethodConfig>& methods, std::uint64_t seed) {
    plan.validate(data.size());
    const Rng master = Rng::stream(seed, 0);

    StudyResult out;
    out.beta_grid = plan.beta_grid;
    const WeightedAtoms full(data);
    for (const double beta : plan.beta_grid) out.truth.push_back(full.cvar(beta).value);

    std::vector<std::vector<std::vector<double>>> values(methods.size(),
                                                         std::vector<std::vector<double>>(plan.beta_grid.size()));
    std::vector<std::vector<long>> failures(methods.size(), std::vector<long>(plan.beta_grid.size(), 0));
    std::vector<std::vector<std::vector<ResultRow>>> rows(
        methods.size(), std::vector<std::vector<ResultRow>>(plan.beta_grid.size()));

    for (long k = 1; k <= plan.reps; ++k) {
        const std::size_t start = plan.stride * static_cast<std::size_t>(k);  // Z_{sk+1} is data[sk]
        std::vector<double> window(data.begin() + start, data.begin() + start + plan.n);
        const EmpiricalSample sample(std::move(window));
        for (std::size_t m = 0; m < methods.size(); ++m) {
            for (std::size_t b = 0; b < plan.beta_grid.size(); ++b) {
                const std::uint64_t tag = 2000000ULL + static_cast<std::uint64_t>(k) * 4096ULL + m * 64ULL + b;
                ResultRow row = evaluate_method(methods[m], sample, plan.beta_grid[b], master.split(tag));
                row.rep = k;
                if (std::isnan(row.value) || row.status.rfind("error", 0) == 0 ||
                    row.status == "non_convergence") {
                    ++failures[m][b];
                } else {
                    values[m][b].push_back(row.value);
                }
                rows[m][b].push_back(std::move(row));
            }
        }
    }

    for (std::size_t m = 0; m < methods.size(); ++m) {
        for (std::size_t b = 0; b < plan.beta_grid.size(); ++b) {
            for (auto& row : rows[m][b]) out.rows.push_back(std::move(row));
            out.cells.push_back(summarize_cell(methods[m].name, plan.beta_grid[b], values[m][b], plan.reps,
                                               failures[m][b], out.truth[b]));
        }
    }
    return out;
}

HedgeStudyResult hedging_frequency_study(const HedgePlan& plan, const std::vector<MethodConfig>& methods) {
    if (plan.m_grid.empty()) throw ConfigError("hedging_frequency_study: empty m grid");
    const Rng master = Rng::stream(plan.seed, 0);

    HedgeStudyResult out;
    out.study.beta_grid = {plan.beta};

    for (std::size_t mi = 0; mi < plan.m_grid.size(); ++mi) {
        HedgeConfig cfg = plan.config;
        cfg.rebalances = plan.m_grid[mi];
        const auto truth_errors =
            simulate_hedging_errors(cfg, plan.truth_paths, master.split(10 + static_cast<std::uint64_t>(mi)));
        out.truth_by_m.push_back(sample_cvar(truth_errors, plan.beta));

        const auto data = simulate_hedging_errors(cfg, plan.n, master.split(5000 + static_cast<std::uint64_t>(mi)));
        const EmpiricalSample sample(data);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const std::uint64_t tag = 3000000ULL + mi * 4096ULL + m;
            ResultRow row = evaluate_method(methods[m], sample, plan.beta, master.split(tag));
            row.rep = static_cast<long>(plan.m_grid[mi]);
            out.study.rows.push_back(std::move(row));
        }
    }

    // U-shape: a strictly decreasing step followed (not necessarily
    // adjacently) by a strictly increasing one.
    bool saw_down = false, saw_up_after_down = false;
    for (std::size_t i = 0; i + 1 < out.truth_by_m.size(); ++i) {
        if (out.truth_by_m[i + 1] < out.truth_by_m[i]) saw_down = true;
        if (saw_down && out.truth_by_m[i + 1] > out.truth_by_m[i]) saw_up_after_down = true;
    }
    out.truth_u_shaped = saw_down && saw_up_after_down;

    const double truth_min = *std::min_element(out.truth_by_m.begin(), out.truth_by_m.end());
    for (const auto& method : methods) {
        double best = kInf;
        std::size_t best_m = plan.m_grid.front();
        std::size_t best_mi = 0;
        for (std::size_t mi = 0; mi < plan.m_grid.size(); ++mi) {
            for (const auto& row : out.study.rows) {
                if (row.method == method.name && row.rep == static_cast<long>(plan.m_grid[mi]) &&
                    !std::isnan(row.value) && row.value < best) {
                    best = row.value;
                    best_m = plan.m_grid[mi];
                    best_mi = mi;
                }
            }
        }
        out.picks.push_back({method.name, best_m, out.truth_by_m[best_mi] / truth_min});
    }
    return out;
}

}  // namespace tailrisk
