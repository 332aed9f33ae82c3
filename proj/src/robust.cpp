#include "tailrisk/robust.hpp"

#include <algorithm>
#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

namespace {

double wasserstein_shift(double p, double delta, double beta) { return delta / std::pow(beta, 1.0 / p); }

void check_heavy_order(const TailLawSpec& center, double p) {
    const auto regime = center.regime();
    if (regime && regime->heavy() && !(regime->gamma > p))
        throw PreconditionViolated("wasserstein worst case needs tail index gamma > p for heavy centers");
}

RobustEvalResult shift_result(double nominal_cvar, double var, double p, double delta, double beta) {
    RobustEvalResult r;
    const double shift = wasserstein_shift(p, delta, beta);
    r.value = nominal_cvar + shift;
    r.u_star = var + (1.0 - 1.0 / p) * shift;
    r.lambda_star = p > 1.0 ? std::pow(shift, -(p - 1.0)) / p : 1.0;
    r.eta_star = 0.0;
    r.status = SolveStatus::Converged;
    return r;
}

}  // namespace

RobustEvalResult wasserstein_worst_cvar(const TailLawSpec& center, double p, double delta, double beta) {
    if (!(p >= 1.0) || !(delta >= 0.0)) throw DomainError("wasserstein_worst_cvar: need p >= 1, delta >= 0");
    check_heavy_order(center, p);
    const double nominal = risk_measure(center, WeightSpec::cvar(), beta);
    return shift_result(nominal, center.quantile(beta), p, delta, beta);
}

RobustEvalResult wasserstein_worst_cvar(const WeightedAtoms& center, double p, double delta, double beta) {
    if (!(p >= 1.0) || !(delta >= 0.0)) throw DomainError("wasserstein_worst_cvar: need p >= 1, delta >= 0");
    const auto c = center.cvar(beta);
    return shift_result(c.value, c.var, p, delta, beta);
}

double wasserstein_worst_risk(const TailLawSpec& center, const WeightSpec& w, double p, double delta, double beta) {
    check_heavy_order(center, p);
    const double shift = wasserstein_shift(p, delta, beta);
    return risk_measure_from_quantile([&](double t) { return center.quantile(t) + shift; }, w, beta);
}

double wasserstein_dual_expectation(const WeightedAtoms& sample, double p, double delta, double u) {
    if (!(p >= 1.0)) throw DomainError("wasserstein_dual_expectation: need p >= 1");
    if (p == 1.0) return delta + sample.expected_excess(u);  // lambda* = 1
    const auto objective = [&](double log_lambda) {
        const double lambda = std::exp(log_lambda);
        const double theta = u - (1.0 - 1.0 / p) / std::pow(p * lambda, 1.0 / (p - 1.0));
        return lambda * std::pow(delta, p) + sample.expected_excess(theta);
    };
    const double scale = 1.0 + std::fabs(sample.values().front()) + std::fabs(sample.values().back());
    const double lo = std::log(1e-14 / scale), hi = std::log(1e14 / scale);
    const double log_lambda = golden_section_minimize(objective, lo, hi, 1e-11, 400);
    return objective(log_lambda);
}

RobustEvalResult wasserstein_dual_cvar(const WeightedAtoms& sample, double p, double delta, double beta) {
    const double zmax = sample.values().front();
    const double zmin = sample.values().back();
    const auto objective = [&](double u) { return u + wasserstein_dual_expectation(sample, p, delta, u) / beta; };
    const double u = golden_section_minimize(objective, zmin - (zmax - zmin) - 1.0, zmax, 1e-11, 400);
    RobustEvalResult r;
    r.value = objective(u);
    r.u_star = u;
    r.lambda_star = p == 1.0 ? 1.0 : 0.0;
    r.status = SolveStatus::Converged;
    return r;
}

// ---- phi-divergence dual solver ---------------------------------------------

namespace {

// Objective evaluator with the below-u block collapsed: atoms sorted
// descending, every atom with Z <= u contributes phi*((-eta)/lambda).
struct PhiDualObjective {
    const WeightedAtoms& atoms;
    const PhiSpec& spec;
    double delta;
    double beta;
    double lambda_floor;

    double operator()(double u, double eta, double lambda) const {
        if (lambda < lambda_floor) lambda = lambda_floor;
        const std::size_t k = atoms.count_above(u);
        const double W = atoms.total_weight();
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double s = (atoms.values()[i] - u - eta) / lambda;
            const double v = spec.conjugate(s);
            acc += atoms.weights()[i] * v;
            if (!std::isfinite(acc)) return kInf;
        }
        const double w_rest = W - atoms.prefix_weight(k);
        if (w_rest > 0.0) {
            acc += w_rest * spec.conjugate(-eta / lambda);
            if (!std::isfinite(acc)) return kInf;
        }
        return u + (eta + delta * lambda + lambda * acc / W) / beta;
    }
};

// 1-D minimization of a convex function on [lo,hi] with endpoint expansion
// up to the caps. When the function can be +inf off its domain (the eta
// line), a scan that always probes 0 — where the dual conjugate term is
// finite — seeds the bracket first; plain golden section could otherwise
// discard the finite region on an infinite plateau.
double guarded_line_min(const std::function<double(double)>& f, double lo, double hi, double lo_cap, double hi_cap,
                        double tol, long& evals, bool scan_first) {
    double a = lo, b = hi;
    if (scan_first) {
        const int scan = 16;
        double x0 = 0.0;
        double f0 = (0.0 >= lo && 0.0 <= hi) ? f(0.0) : kInf;
        for (int i = 0; i <= scan; ++i) {
            const double x = lo + (hi - lo) * i / scan;
            const double fx = f(x);
            if (fx < f0) {
                f0 = fx;
                x0 = x;
            }
        }
        evals += scan + 2;
        const double step = (hi - lo) / scan;
        a = std::max(lo_cap, x0 - step);
        b = std::min(hi_cap, x0 + step);
    }
    for (int round = 0; round < 24; ++round) {
        const double x = golden_section_minimize(f, a, b, tol, 200);
        evals += 90;
        const double w = b - a;
        if (x <= a + 0.02 * w && a > lo_cap) {
            b = a + 0.1 * w;
            a = std::max(lo_cap, a - 4.0 * w);
        } else if (x >= b - 0.02 * w && b < hi_cap) {
            a = b - 0.1 * w;
            b = std::min(hi_cap, b + 4.0 * w);
        } else {
            return x;
        }
    }
    return golden_section_minimize(f, a, b, tol, 200);
}

}  // namespace

// Nested exact line searches: the objective is jointly convex, and partial
// minimization preserves convexity, so minimizing eta innermost, lambda in
// the middle (log scale) and u outermost is a global method. Cyclic
// coordinate descent was tried first and stalls in the narrow (eta, lambda)
// valleys the exp-shifted conjugate produces.
RobustEvalResult phi_dual_cvar(const WeightedAtoms& center, const PhiSpec& spec, double delta, double beta,
                               const SolverConfig& cfg) {
    if (!(delta >= 0.0)) throw DomainError("phi_dual_cvar: delta must be >= 0");
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("phi_dual_cvar: beta must lie in (0,1)");
    const PhiDualObjective F{center, spec, delta, beta, cfg.lambda_floor};
    const double zmax = center.values().front();
    const double zmin = center.values().back();
    const double spread = std::max(1e-9, zmax - zmin);
    const double eta_cap = 64.0 * (spread + 1.0);
    const double log_lam_floor = std::log(cfg.lambda_floor);
    const double log_lam_cap = std::log(1e9 * (spread + 1.0));

    long evals = 0;
    double best_eta = 0.0, best_lambda = cfg.lambda_floor;

    const auto min_over_eta = [&](double u, double lambda, double* eta_out) {
        const double eta = guarded_line_min([&](double e) { return F(u, e, lambda); }, -2.0 * (spread + 1.0),
                                            2.0 * (spread + 1.0), -eta_cap, eta_cap, 1e-9, evals, true);
        if (eta_out) *eta_out = eta;
        return F(u, eta, lambda);
    };
    const auto min_over_lambda = [&](double u, double* eta_out, double* lambda_out) {
        const auto g = [&](double ll) { return min_over_eta(u, std::exp(ll), nullptr); };
        const double ll =
            guarded_line_min(g, log_lam_floor, log_lam_cap, log_lam_floor, log_lam_cap, 1e-9, evals, false);
        if (lambda_out) *lambda_out = std::exp(ll);
        return min_over_eta(u, std::exp(ll), eta_out);
    };

    const auto outer = [&](double u) { return min_over_lambda(u, nullptr, nullptr); };
    // the worst-case VaR is never below the center's beta-quantile, so the
    // bracket can hug the tail; expansion rescues pathological centers
    const double u_lo_cap = zmin - 4.0 * spread - 1.0;
    const double u_lo = center.quantile(std::min(0.5, 16.0 * beta));
    const double u = guarded_line_min(outer, std::min(u_lo, zmax), zmax, u_lo_cap, zmax, 1e-9, evals, false);

    RobustEvalResult best;
    best.value = min_over_lambda(u, &best_eta, &best_lambda);
    best.u_star = u;
    best.eta_star = best_eta;
    best.lambda_star = best_lambda;
    best.iterations = static_cast<int>(std::min<long>(evals, 1 << 30));
    best.status = std::isfinite(best.value) ? SolveStatus::Converged : SolveStatus::NonConvergence;
    return best;
}

namespace {

bool kl_worst_case_infinite(const PhiSpec& spec, const TailRegime& regime) {
    if (spec.family() != PhiSpec::Family::KL) return false;
    if (regime.heavy()) return true;            // infinite mean alternatives inside the ball
    return regime.gamma < 1.0;                  // Weibull-type with gamma < 1
}

RobustEvalResult infinite_result() {
    RobustEvalResult r;
    r.value = kInf;
    r.status = SolveStatus::WorstCaseInfinite;
    return r;
}

}  // namespace

RobustEvalResult phi_dual_cvar(const NominalModel& center, const PhiSpec& spec, double delta, double beta,
                               const SolverConfig& cfg, std::size_t grid_atoms_per_decade) {
    if (kl_worst_case_infinite(spec, center.regime())) return infinite_result();
    const double t_floor = std::min(1e-9, beta * 1e-4);
    const auto atoms =
        stratified_atoms([&](double t) { return center.quantile(t); }, t_floor, grid_atoms_per_decade);
    return phi_dual_cvar(atoms, spec, delta, beta, cfg);
}

RobustEvalResult phi_dual_cvar(const TailLawSpec& center, const PhiSpec& spec, double delta, double beta,
                               const SolverConfig& cfg, std::size_t grid_atoms_per_decade) {
    const auto regime = center.regime();
    if (regime && kl_worst_case_infinite(spec, *regime)) return infinite_result();
    const double t_floor = std::min(1e-9, beta * 1e-4);
    const auto atoms =
        stratified_atoms([&](double t) { return center.quantile(t); }, t_floor, grid_atoms_per_decade);
    return phi_dual_cvar(atoms, spec, delta, beta, cfg);
}

// ---- RPEV-DRO ----------------------------------------------------------------

RpevResult rpev_dro_cvar(const EmpiricalSample& sample, double beta, double beta0, const RpevConfig& cfg, Rng rng) {
    EvtCalibration cal;
    switch (cfg.regime_rule.mode) {
        case RegimeRule::Mode::Test:
            if (!(cfg.regime_rule.index_bound_M > 0.0))
                throw ConfigError("rpev_dro_cvar: regime test requires the index bound M");
            cal = calibrate(sample, beta0, cfg.regime_rule.index_bound_M, cfg.regime_rule.alpha,
                            cfg.regime_rule.kappa1);
            break;
        case RegimeRule::Mode::ForceHeavy:
            cal = calibrate_forced(sample, beta0, TailRegime::Kind::Frechet, cfg.regime_rule.kappa1);
            break;
        case RegimeRule::Mode::ForceLight:
            cal = calibrate_forced(sample, beta0, TailRegime::Kind::Gumbel, cfg.regime_rule.kappa1);
            break;
    }
    const NominalModel model = build_nominal(cal, sample);
    if (kl_worst_case_infinite(cfg.phi, model.regime())) {
        RpevResult rr;
        rr.eval = infinite_result();
        rr.calibration = cal;
        return rr;
    }

    const auto tail = model.sample_tail(cfg.tail_draws, rng);
    const double tail_mass = model.tail_mass();

    const auto make_atoms = [&](const std::vector<double>& tail_part) {
        std::vector<double> values = model.bulk_points();
        std::vector<double> weights(values.size(), model.bulk_weight());
        values.insert(values.end(), tail_part.begin(), tail_part.end());
        weights.insert(weights.end(), tail_part.size(), tail_mass / static_cast<double>(tail_part.size()));
        return WeightedAtoms(std::move(values), std::move(weights));
    };

    RpevResult rr;
    rr.calibration = cal;
    rr.eval = phi_dual_cvar(make_atoms(tail), cfg.phi, cfg.delta, beta, cfg.solver);

    if (cfg.compute_stderr && cfg.tail_draws >= 20) {
        const std::size_t folds = 10;
        const std::size_t per = tail.size() / folds;
        double mean = 0.0, m2 = 0.0;
        std::size_t used = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::vector<double> part(tail.begin() + f * per, tail.begin() + (f + 1) * per);
            const double v = phi_dual_cvar(make_atoms(part), cfg.phi, cfg.delta, beta, cfg.solver).value;
            ++used;
            const double d = v - mean;
            mean += d / used;
            m2 += d * (v - mean);
        }
        const double var = used > 1 ? m2 / (used - 1) : 0.0;
        rr.eval.mc_stderr = std::sqrt(var / used);
    }
    return rr;
}

// ---- worst-case tail cdf -------------------------------------------------------

WorstCaseSurvival worst_case_survival_at(double fbar_center, const PhiSpec& spec, double delta) {
    if (!(fbar_center > 0.0 && fbar_center < 1.0))
        throw PreconditionViolated("worst_case_survival: center survival must lie in (0,1)");
    WorstCaseSurvival out{};
    out.asymptotic = spec.inverse_upper(delta / fbar_center) * fbar_center;
    if (delta == 0.0) {
        out.fbar_wc = fbar_center;
        out.s = 1.0;
        out.feasible = true;
        return out;
    }
    const double f = fbar_center;
    const auto h = [&](double s) {
        const double y = (1.0 - s * f) / (1.0 - f);
        return (1.0 - f) * spec.phi(y) + f * spec.phi(s) - delta;
    };
    const double s_max = 1.0 / f;
    // budget larger than the all-mass-in-the-tail cost: survival saturates at 1
    if (h(s_max * (1.0 - 1e-14)) < 0.0) {
        out.fbar_wc = 1.0;
        out.s = s_max;
        out.feasible = false;
        return out;
    }
    const auto dphi = [&](double t) {
        switch (spec.family()) {
            case PhiSpec::Family::ChiSquare:
                return t - 1.0;
            case PhiSpec::Family::KL:
                return std::log(t);
            case PhiSpec::Family::CressieRead:
                return (std::pow(t, spec.cressie_read_p() - 1.0) - 1.0) / (spec.cressie_read_p() - 1.0);
            case PhiSpec::Family::ExpShifted:
                return std::exp(t - 1.0) - 1.0;
        }
        return 0.0;
    };
    const auto dh = [&](double s) {
        const double y = (1.0 - s * f) / (1.0 - f);
        return f * (dphi(s) - dphi(y));
    };
    double lo = 1.0, hi = s_max * (1.0 - 1e-14);
    double s = std::min(hi, std::max(1.0 + 1e-12, out.asymptotic / f));
    for (int it = 0; it < 200; ++it) {
        const double val = h(s);
        if (val > 0.0)
            hi = s;
        else
            lo = s;
        const double d = dh(s);
        double sn = (d > 0.0 && std::isfinite(d) && std::isfinite(val)) ? s - val / d : 0.5 * (lo + hi);
        if (!(sn > lo && sn < hi) || !std::isfinite(sn)) sn = 0.5 * (lo + hi);
        if (std::fabs(sn - s) <= 1e-12 * (std::fabs(s) + 1.0)) {
            s = sn;
            break;
        }
        s = sn;
    }
    out.s = s;
    out.fbar_wc = std::min(1.0, s * f);
    out.feasible = true;
    return out;
}

WorstCaseSurvival worst_case_survival(const TailLawSpec& center, const PhiSpec& spec, double delta, double x) {
    return worst_case_survival_at(center.survival(x), spec, delta);
}

WorstCaseSurvival worst_case_survival(const NominalModel& center, const PhiSpec& spec, double delta, double x) {
    return worst_case_survival_at(center.survival(x), spec, delta);
}

namespace {

double worst_case_quantile_impl(const std::function<double(double)>& survival_fn,
                                const std::function<double(double)>& quantile_fn, const PhiSpec& spec, double delta,
                                double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("worst_case_quantile: t must lie in (0,1)");
    const auto fbar_wc = [&](double x) {
        const double f = survival_fn(x);
        if (f >= 1.0) return 1.0;
        if (f <= 0.0) return 0.0;
        return worst_case_survival_at(f, spec, delta).fbar_wc;
    };
    if (delta == 0.0) return quantile_fn(t);
    double lo = quantile_fn(t);
    if (fbar_wc(lo) <= t) return lo;  // clipped region
    // upper bracket from the asymptotic f phi^{<-}(delta/f) = t, solved
    // coarsely on log f, with a safety factor and doubling fallback
    double f_lo = t * 1e-30, f_hi = t;
    for (int it = 0; it < 60; ++it) {
        const double f = std::sqrt(f_lo * f_hi);
        (spec.inverse_upper(delta / f) * f > t ? f_hi : f_lo) = f;
    }
    double hi = std::max(lo * (1.0 + 1e-9), quantile_fn(std::max(0.25 * f_lo, 1e-300)));
    int guard = 0;
    while (fbar_wc(hi) > t) {
        hi = std::max(hi * 2.0, 1.0);
        if (++guard >= 200) throw NonConvergence("worst_case_quantile: no bracket after 200 doublings");
    }
    for (int it = 0; it < 400; ++it) {
        const double m = 0.5 * (lo + hi);
        if ((hi - lo) <= 1e-9 * (std::fabs(m) + 1e-300)) break;
        (fbar_wc(m) > t ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double worst_case_quantile(const TailLawSpec& center, const PhiSpec& spec, double delta, double t) {
    return worst_case_quantile_impl([&](double x) { return center.survival(x); },
                                    [&](double tt) { return center.quantile(tt); }, spec, delta, t);
}

double worst_case_quantile(const NominalModel& center, const PhiSpec& spec, double delta, double t) {
    return worst_case_quantile_impl([&](double x) { return center.survival(x); },
                                    [&](double tt) { return center.quantile(tt); }, spec, delta, t);
}

// ---- inflation diagnostic ------------------------------------------------------

std::string InflationDescriptor::describe() const {
    switch (type) {
        case Type::LogRatio:
            return "log-ratio limit " + std::to_string(value);
        case Type::ValueRatio:
            return "value-ratio limit " + std::to_string(value);
        case Type::Infinite:
            return "infinite log-ratio (super-polynomial inflation)";
        case Type::RatePreserving:
            return "rate-preserving (ratio 1)";
    }
    return "?";
}

InflationDescriptor inflation_diagnostic(const TailRegime& regime, const AmbiguitySpec& ambiguity) {
    if (ambiguity.kind == AmbiguitySpec::Kind::Wasserstein) {
        if (regime.heavy()) {
            if (!(regime.gamma > ambiguity.p))
                throw PreconditionViolated("inflation_diagnostic: Wasserstein heavy case needs gamma > p");
            return {InflationDescriptor::Type::LogRatio, regime.gamma / ambiguity.p};
        }
        return {InflationDescriptor::Type::Infinite, kInf};
    }
    const auto growth = ambiguity.phi->growth_class();
    if (growth.super_polynomial) return {InflationDescriptor::Type::RatePreserving, 1.0};
    const double p = growth.p;
    if (regime.heavy()) return {InflationDescriptor::Type::LogRatio, p / (p - 1.0)};
    return {InflationDescriptor::Type::ValueRatio, std::pow(p / (p - 1.0), 1.0 / regime.gamma)};
}

// ---- atom builders ---------------------------------------------------------------

WeightedAtoms stratified_atoms(const std::function<double(double)>& quantile_of_tail_prob, double t_floor,
                               std::size_t per_decade) {
    if (!(t_floor > 0.0 && t_floor < 1.0)) throw DomainError("stratified_atoms: t_floor must lie in (0,1)");
    const double decades = -std::log10(t_floor);
    const auto steps = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade)));
    std::vector<double> values, weights;
    values.reserve(steps + 1);
    weights.reserve(steps + 1);
    const double step = decades / static_cast<double>(steps);
    double upper = 1.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double lower = std::pow(10.0, -step * static_cast<double>(k + 1));
        const double mid = std::sqrt(upper * lower);  // log-midpoint
        values.push_back(quantile_of_tail_prob(mid));
        weights.push_back(upper - lower);
        upper = lower;
    }
    // leftover deep-tail mass
    values.push_back(quantile_of_tail_prob(0.5 * upper));
    weights.push_back(upper);
    return WeightedAtoms(std::move(values), std::move(weights));
}

WeightedAtoms algorithm1_atoms(const NominalModel& model, std::size_t tail_draws, Rng rng) {
    const auto tail = model.sample_tail(tail_draws, rng);
    std::vector<double> values = model.bulk_points();
    std::vector<double> weights(values.size(), model.bulk_weight());
    values.insert(values.end(), tail.begin(), tail.end());
    weights.insert(weights.end(), tail.size(), model.tail_mass() / static_cast<double>(tail.size()));
    return WeightedAtoms(std::move(values), std::move(weights));
}

}  // namespace tailrisk
