// tailrisk command-line tool: EVT calibration, robust CVaR evaluation, and
// the replication / sweep / rolling-window / network / hedging studies.
// Each run reads one declarative JSON config (CLI flags override keys) and
// writes results.csv plus summary.json into the output directory.

#include <clocale>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailrisk/errors.hpp"
#include "tailrisk/harness.hpp"
#include "tailrisk/math_util.hpp"
#include "tailrisk/io.hpp"

using nlohmann::json;
using namespace tailrisk;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---- config plumbing --------------------------------------------------------

void validate_keys(const json& j, const std::set<std::string>& allowed, const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": expected an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) throw ConfigError(context + ": unknown key '" + item.key() + "'");
    }
}

double need_number(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError(context + ": missing numeric key '" + key + "'");
    return j[key].get<double>();
}

double get_number(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j[key].get<double>() : fallback;
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback) {
    return j.contains(key) ? j[key].get<std::string>() : fallback;
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    // a summary.json is accepted directly: its config echo re-runs the study
    if (j.is_object() && j.contains("config") && j["config"].is_object()) return j["config"];
    return j;
}

// ---- domain objects from json ------------------------------------------------

TailLawSpec law_from_json(const json& j, const std::string& context) {
    const std::string family = get_string(j, "family", "");
    if (family == "generalized_pareto") {
        validate_keys(j, {"family", "shape", "scale"}, context);
        return TailLawSpec::generalized_pareto(need_number(j, "shape", context), get_number(j, "scale", 1.0));
    }
    if (family == "weibull_type") {
        validate_keys(j, {"family", "c", "q"}, context);
        return TailLawSpec::weibull_type(get_number(j, "c", 1.0), need_number(j, "q", context));
    }
    if (family == "survival_formula") {
        validate_keys(j, {"family", "a", "b", "k"}, context);
        return TailLawSpec::survival_formula(need_number(j, "a", context), get_number(j, "b", 0.0),
                                             get_number(j, "k", 1.0));
    }
    if (family == "hazard_formula") {
        validate_keys(j, {"family", "q", "r"}, context);
        return TailLawSpec::hazard_formula(need_number(j, "q", context), get_number(j, "r", 0.0));
    }
    if (family == "lognormal_std") {
        validate_keys(j, {"family"}, context);
        return TailLawSpec::lognormal_std();
    }
    if (family == "mixture") {
        validate_keys(j, {"family", "eps", "base", "contaminant"}, context);
        if (!j.contains("base") || !j.contains("contaminant"))
            throw ConfigError(context + ": mixture needs 'base' and 'contaminant'");
        return TailLawSpec::mixture(law_from_json(j["base"], context + ".base"),
                                    law_from_json(j["contaminant"], context + ".contaminant"),
                                    need_number(j, "eps", context));
    }
    throw ConfigError(context + ": unknown law family '" + family + "'");
}

PhiSpec phi_from_json(const json& j, const std::string& context) {
    const std::string name = j.is_string() ? j.get<std::string>() : get_string(j, "phi", "exp_shifted");
    if (name == "exp_shifted") return PhiSpec::exp_shifted();
    if (name == "chi_square") return PhiSpec::chi_square();
    if (name == "kl") return PhiSpec::kl();
    if (name == "cressie_read") throw ConfigError(context + ": cressie_read needs 'cr_p' alongside");
    throw ConfigError(context + ": unknown phi family '" + name + "'");
}

Beta0Rule beta0_rule_from_json(const json& j, const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": beta0_rule must be an object");
    validate_keys(j, {"theta", "cap", "level"}, context);
    if (j.contains("theta")) return Beta0Rule::fixed_theta(j["theta"].get<double>());
    if (j.contains("cap")) return Beta0Rule::cap_sqrt_beta(j["cap"].get<double>());
    if (j.contains("level")) return Beta0Rule::fixed_level(j["level"].get<double>());
    throw ConfigError(context + ": beta0_rule needs one of theta/cap/level");
}

json beta0_rule_to_json(const Beta0Rule& r) {
    switch (r.mode) {
        case Beta0Rule::Mode::FixedTheta:
            return {{"theta", r.theta}};
        case Beta0Rule::Mode::CapSqrtBeta:
            return {{"cap", r.cap}};
        case Beta0Rule::Mode::FixedLevel:
            return {{"level", r.level}};
    }
    return {};
}

PhiSpec method_phi(const json& j, const std::string& context, const char* fallback) {
    if (j.contains("cr_p")) return PhiSpec::cressie_read(j["cr_p"].get<double>());
    return phi_from_json(j.contains("phi") ? j["phi"] : json(fallback), context);
}

MethodConfig method_from_json(const json& j, const std::string& context) {
    validate_keys(j,
                  {"kind", "name", "phi", "cr_p", "delta", "p", "tail_draws", "beta0_rule", "M", "alpha", "kappa1",
                   "force_regime"},
                  context);
    const std::string kind = get_string(j, "kind", "");
    MethodConfig m;
    if (kind == "saa") {
        m = MethodConfig::saa();
    } else if (kind == "wasserstein_saa") {
        m = MethodConfig::wasserstein_saa(get_number(j, "p", 1.0), need_number(j, "delta", context));
    } else if (kind == "phi_gauss") {
        m = MethodConfig::phi_gauss(method_phi(j, context, "chi_square"), need_number(j, "delta", context));
    } else if (kind == "rpev" || kind == "phi_evt") {
        const PhiSpec phi = method_phi(j, context, kind == "rpev" ? "exp_shifted" : "chi_square");
        RegimeRule rule;
        if (j.contains("force_regime")) {
            const std::string reg = j["force_regime"].get<std::string>();
            if (reg != "frechet" && reg != "gumbel")
                throw ConfigError(context + ": force_regime must be frechet|gumbel");
            rule = RegimeRule::force(reg == "frechet" ? TailRegime::Kind::Frechet : TailRegime::Kind::Gumbel,
                                     get_number(j, "kappa1", 0.5));
        } else {
            // the index bound M of the Hill diagnostic has no default
            rule = RegimeRule::test(need_number(j, "M", context), get_number(j, "alpha", 0.05),
                                    get_number(j, "kappa1", 0.5));
        }
        const Beta0Rule b0 = j.contains("beta0_rule") ? beta0_rule_from_json(j["beta0_rule"], context + ".beta0_rule")
                                                      : Beta0Rule::cap_sqrt_beta(0.1);
        const auto draws = static_cast<std::size_t>(get_number(j, "tail_draws", 2000));
        if (kind == "rpev") {
            m = MethodConfig::rpev(need_number(j, "delta", context), rule, b0, draws);
            m.phi = phi;
        } else {
            m = MethodConfig::phi_evt(phi, need_number(j, "delta", context), rule, b0, draws);
        }
    } else {
        throw ConfigError(context + ": unknown method kind '" + kind + "'");
    }
    if (j.contains("name")) m.name = j["name"].get<std::string>();
    return m;
}

json method_to_json(const MethodConfig& m) {
    json j;
    j["name"] = m.name;
    switch (m.kind) {
        case MethodConfig::Kind::Saa:
            j["kind"] = "saa";
            return j;
        case MethodConfig::Kind::WassersteinSaa:
            j["kind"] = "wasserstein_saa";
            j["p"] = m.p;
            j["delta"] = m.delta;
            return j;
        case MethodConfig::Kind::PhiGauss:
            j["kind"] = "phi_gauss";
            j["phi"] = m.phi.name();
            j["delta"] = m.delta;
            return j;
        case MethodConfig::Kind::Rpev:
        case MethodConfig::Kind::PhiEvt:
            j["kind"] = m.kind == MethodConfig::Kind::Rpev ? "rpev" : "phi_evt";
            j["phi"] = m.phi.name();
            if (m.phi.family() == PhiSpec::Family::CressieRead) j["cr_p"] = m.phi.cressie_read_p();
            j["delta"] = m.delta;
            j["tail_draws"] = m.tail_draws;
            j["beta0_rule"] = beta0_rule_to_json(m.beta0);
            if (m.regime_rule.mode == RegimeRule::Mode::Test) {
                j["M"] = m.regime_rule.index_bound_M;
                j["alpha"] = m.regime_rule.alpha;
                j["kappa1"] = m.regime_rule.kappa1;
            } else {
                j["force_regime"] = m.regime_rule.mode == RegimeRule::Mode::ForceHeavy ? "frechet" : "gumbel";
            }
            return j;
    }
    return j;
}

std::vector<MethodConfig> methods_from_json(const json& cfg, const std::string& context) {
    if (!cfg.contains("methods") || !cfg["methods"].is_array() || cfg["methods"].empty())
        throw ConfigError(context + ": 'methods' must be a non-empty array");
    std::vector<MethodConfig> out;
    std::size_t i = 0;
    for (const auto& mj : cfg["methods"])
        out.push_back(method_from_json(mj, context + ".methods[" + std::to_string(i++) + "]"));
    return out;
}

std::vector<double> grid_from_json(const json& cfg, const std::string& key, const std::string& context) {
    if (!cfg.contains(key) || !cfg[key].is_array() || cfg[key].empty())
        throw ConfigError(context + ": '" + key + "' must be a non-empty array");
    std::vector<double> out;
    for (const auto& v : cfg[key]) out.push_back(v.get<double>());
    return out;
}

// ---- outputs ------------------------------------------------------------------

json cells_to_json(const StudyResult& study) {
    json arr = json::array();
    for (const auto& c : study.cells) {
        arr.push_back({{"method", c.method},
                       {"beta", c.beta},
                       {"reps", c.reps},
                       {"failures", c.failures},
                       {"median", c.median},
                       {"q1", c.q1},
                       {"q3", c.q3},
                       {"coverage", c.coverage},
                       {"truth", c.truth}});
    }
    return arr;
}

struct Outputs {
    std::string out_dir = ".";
    int exit_code = 0;

    void write(const std::string& command, const json& config_echo, std::uint64_t seed,
               const std::vector<ResultRow>& rows, const json& payload) {
        std::filesystem::create_directories(out_dir);
        write_text_file(out_dir + "/results.csv", results_csv(rows));
        json summary;
        summary["command"] = command;
        summary["config"] = config_echo;
        summary["seed"] = seed;
        summary["versions"] = {{"tailrisk", kVersion}, {"results_format", 1}};
        summary.update(payload);
        write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
        for (const auto& r : rows) {
            if (r.status.rfind("error", 0) == 0 || r.status == "non_convergence") {
                exit_code = 2;
                break;
            }
        }
    }
};

// data source from config: synthetic law or a dataset file
struct InputData {
    std::optional<TailLawSpec> law;
    std::optional<std::vector<double>> losses;
    std::size_t n = 0;
};

InputData input_from_config(const json& cfg, const std::string& context) {
    InputData in;
    if (cfg.contains("dataset")) {
        const std::string format = get_string(cfg, "format", "plain");
        if (format != "plain") throw ConfigError(context + ": only 'plain' datasets are accepted here");
        in.losses = ingest_plain(cfg["dataset"].get<std::string>());
        return in;
    }
    if (!cfg.contains("law")) throw ConfigError(context + ": needs either 'dataset' or 'law'");
    in.law = law_from_json(cfg["law"], context + ".law");
    in.n = static_cast<std::size_t>(get_number(cfg, "n", 500));
    return in;
}

EmpiricalSample realize_sample(const InputData& in, std::uint64_t seed) {
    if (in.losses) return EmpiricalSample(*in.losses);
    return EmpiricalSample(sample(*in.law, in.n, Rng::stream(seed, 1001)));
}

json calibration_to_json(const EvtCalibration& cal) {
    return {{"theta", cal.theta},         {"beta0", cal.beta0}, {"k_n", cal.k_n}, {"gamma_hat", cal.gamma_hat},
            {"regime", cal.regime.name()}, {"v_hat", cal.v_hat}, {"beta0_hat", cal.beta0_hat}};
}

// ---- commands -------------------------------------------------------------------

int cmd_estimate(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg, {"seed", "out", "law", "dataset", "format", "n", "beta", "beta0_rule", "M", "alpha", "kappa1",
                        "tail_draws"},
                  "estimate");
    const double beta = get_number(cfg, "beta", 1e-3);
    const Beta0Rule rule = cfg.contains("beta0_rule") ? beta0_rule_from_json(cfg["beta0_rule"], "estimate.beta0_rule")
                                                      : Beta0Rule::cap_sqrt_beta(0.1);
    const InputData in = input_from_config(cfg, "estimate");
    const EmpiricalSample sample_data = realize_sample(in, seed);
    const double beta0 = rule.resolve(beta, sample_data.size());
    const auto cal = calibrate(sample_data, beta0, need_number(cfg, "M", "estimate"), get_number(cfg, "alpha", 0.05),
                               get_number(cfg, "kappa1", 0.5));

    // nominal CVaR through the same pipeline robust-cvar uses with delta = 0
    RpevConfig rc;
    rc.delta = 0.0;
    rc.tail_draws = static_cast<std::size_t>(get_number(cfg, "tail_draws", 10000));
    rc.regime_rule = RegimeRule::force(cal.regime.kind, get_number(cfg, "kappa1", 0.5));
    rc.compute_stderr = false;
    const auto nominal = rpev_dro_cvar(sample_data, beta, beta0, rc, Rng::stream(seed, 2001));

    const auto model = build_nominal(cal, sample_data);
    const double nominal_quadrature =
        risk_measure_from_quantile([&](double t) { return model.quantile(t); }, WeightSpec::cvar(), beta);

    std::vector<ResultRow> rows;
    rows.push_back({"estimate_gamma", beta0, 0, cal.gamma_hat, cal.regime.name()});
    rows.push_back({"estimate_nominal_cvar", beta, 0, nominal.eval.value, to_string(nominal.eval.status)});
    json payload;
    payload["calibration"] = calibration_to_json(cal);
    payload["nominal_cvar"] = nominal.eval.value;
    payload["nominal_cvar_quadrature"] = nominal_quadrature;
    out.write("estimate", cfg, seed, rows, payload);
    return out.exit_code;
}

int cmd_robust_cvar(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg, {"seed", "out", "law", "dataset", "format", "n", "beta", "method"}, "robust-cvar");
    if (!cfg.contains("method")) throw ConfigError("robust-cvar: missing 'method'");
    const double beta = need_number(cfg, "beta", "robust-cvar");
    const MethodConfig method = method_from_json(cfg["method"], "robust-cvar.method");
    const InputData in = input_from_config(cfg, "robust-cvar");
    const EmpiricalSample sample_data = realize_sample(in, seed);

    ResultRow row;
    json payload;
    if (method.kind == MethodConfig::Kind::Rpev || method.kind == MethodConfig::Kind::PhiEvt) {
        RpevConfig rc;
        rc.delta = method.delta;
        rc.tail_draws = method.tail_draws;
        rc.regime_rule = method.regime_rule;
        rc.phi = method.phi;
        const auto res = rpev_dro_cvar(sample_data, beta, method.beta0.resolve(beta, sample_data.size()), rc,
                                       Rng::stream(seed, 2001));
        row = {method.name, beta, 0, res.eval.value, to_string(res.eval.status)};
        payload["optimizer"] = {{"u", res.eval.u_star}, {"eta", res.eval.eta_star}, {"lambda", res.eval.lambda_star}};
        payload["mc_stderr"] = res.eval.mc_stderr;
        payload["iterations"] = res.eval.iterations;
        payload["calibration"] = calibration_to_json(res.calibration);
    } else {
        row = evaluate_method(method, sample_data, beta, Rng::stream(seed, 2001));
    }
    payload["value"] = row.value;
    payload["status"] = row.status;
    payload["method"] = method_to_json(method);
    out.write("robust-cvar", cfg, seed, {row}, payload);
    return out.exit_code;
}

int cmd_diagnose(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg, {"seed", "out", "law", "dataset", "format", "n", "k", "M", "alpha", "kappa1", "ambiguity"},
                  "diagnose");
    const InputData in = input_from_config(cfg, "diagnose");
    const EmpiricalSample sample_data = realize_sample(in, seed);
    const auto k = static_cast<std::size_t>(
        get_number(cfg, "k", std::floor(std::sqrt(static_cast<double>(sample_data.size())))));
    const auto decision = regime_test(sample_data, k, need_number(cfg, "M", "diagnose"),
                                      get_number(cfg, "alpha", 0.05), get_number(cfg, "kappa1", 0.5));
    std::vector<ResultRow> rows;
    rows.push_back({"regime_test", static_cast<double>(k) / static_cast<double>(sample_data.size()), 0,
                    decision.regime.gamma, decision.regime.name()});
    json payload;
    payload["regime"] = decision.regime.name();
    payload["gamma_hat"] = decision.regime.gamma;
    payload["hill_gamma"] = decision.hill_gamma;
    payload["threshold"] = decision.threshold;
    payload["rejected_h0"] = decision.rejected_h0;
    payload["k"] = decision.k;
    if (cfg.contains("ambiguity")) {
        json preds = json::array();
        std::size_t i = 0;
        for (const auto& aj : cfg["ambiguity"]) {
            const std::string ctx = "diagnose.ambiguity[" + std::to_string(i++) + "]";
            validate_keys(aj, {"kind", "p", "phi", "cr_p", "delta"}, ctx);
            const std::string kind = get_string(aj, "kind", "");
            if (kind != "wasserstein" && kind != "phi") throw ConfigError(ctx + ": kind must be wasserstein|phi");
            const AmbiguitySpec spec =
                kind == "wasserstein"
                    ? AmbiguitySpec::wasserstein(get_number(aj, "p", 1.0), get_number(aj, "delta", 0.1))
                    : AmbiguitySpec::phi_ball(aj.contains("cr_p") ? PhiSpec::cressie_read(aj["cr_p"].get<double>())
                                                                  : phi_from_json(aj.contains("phi") ? aj["phi"]
                                                                                                     : json("chi_square"),
                                                                                  ctx),
                                              get_number(aj, "delta", 0.1));
            const auto d = inflation_diagnostic(decision.regime, spec);
            const std::string name =
                kind == "wasserstein" ? "wasserstein_p" + format_double(spec.p) : "phi_" + spec.phi->name();
            const std::string type = d.type == InflationDescriptor::Type::LogRatio        ? "log_ratio"
                                     : d.type == InflationDescriptor::Type::ValueRatio    ? "value_ratio"
                                     : d.type == InflationDescriptor::Type::Infinite      ? "infinite"
                                                                                          : "rate_preserving";
            preds.push_back({{"ambiguity", name}, {"type", type}, {"value", d.value}, {"description", d.describe()}});
            rows.push_back({name, 0.0, 0, d.value, type});
        }
        payload["inflation"] = preds;
    }
    out.write("diagnose", cfg, seed, rows, payload);
    return out.exit_code;
}

int cmd_replicate(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg, {"seed", "out", "law", "n", "reps", "beta_grid", "truth_draws", "methods"}, "replicate");
    if (!cfg.contains("law")) throw ConfigError("replicate: needs 'law'");
    const auto law = law_from_json(cfg["law"], "replicate.law");
    ReplicationPlan plan;
    plan.beta_grid = grid_from_json(cfg, "beta_grid", "replicate");
    plan.n = static_cast<std::size_t>(get_number(cfg, "n", 500));
    plan.reps = static_cast<long>(get_number(cfg, "reps", 100));
    plan.truth_draws = static_cast<std::size_t>(get_number(cfg, "truth_draws", 5000000));
    plan.seed = seed;
    const auto methods = methods_from_json(cfg, "replicate");
    const auto study = run_replication_study(DataSource::from_law(law), methods, plan);
    json payload;
    payload["cells"] = cells_to_json(study);
    payload["truth"] = study.truth;
    payload["beta_grid"] = study.beta_grid;
    out.write("replicate", cfg, seed, study.rows, payload);
    return out.exit_code;
}

int cmd_sweep(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg, {"seed", "out", "law", "n", "reps", "beta", "delta_grid", "theta_grid", "truth_draws", "method"},
                  "sweep");
    if (!cfg.contains("law")) throw ConfigError("sweep: needs 'law'");
    const auto law = law_from_json(cfg["law"], "sweep.law");
    SweepPlan plan;
    plan.delta_grid = grid_from_json(cfg, "delta_grid", "sweep");
    plan.theta_grid = grid_from_json(cfg, "theta_grid", "sweep");
    plan.beta = get_number(cfg, "beta", 1e-3);
    plan.n = static_cast<std::size_t>(get_number(cfg, "n", 500));
    plan.reps = static_cast<long>(get_number(cfg, "reps", 100));
    plan.truth_draws = static_cast<std::size_t>(get_number(cfg, "truth_draws", 5000000));
    plan.seed = seed;
    if (!cfg.contains("method")) throw ConfigError("sweep: needs 'method' (the rpev template)");
    const MethodConfig tmpl = method_from_json(cfg["method"], "sweep.method");
    const auto study = run_parameter_sweep(DataSource::from_law(law), tmpl, plan);
    json payload;
    payload["cells"] = cells_to_json(study);
    payload["truth"] = study.truth;
    out.write("sweep", cfg, seed, study.rows, payload);
    return out.exit_code;
}

NetworkModel network_from_json(const json& nj, std::size_t d, const std::string& context) {
    validate_keys(nj, {"K", "lambda", "p", "normalize", "clamp"}, context);
    const auto K = static_cast<std::size_t>(need_number(nj, "K", context));
    const double lambda = get_number(nj, "lambda", 0.0);
    double p = 1.0;
    if (nj.contains("p")) {
        if (nj["p"].is_string()) {
            if (nj["p"].get<std::string>() != "inf") throw ConfigError(context + ": p must be a number or \"inf\"");
            p = kInf;
        } else {
            p = nj["p"].get<double>();
        }
    }
    const bool normalize = nj.value("normalize", true);
    const bool clamp = nj.value("clamp", false);
    return NetworkModel(interpolated_exposure(d, K, lambda), Matrix(), p, normalize, clamp);
}

int cmd_windows(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg, {"seed", "out", "dataset", "format", "columns", "sign_flip", "network", "n", "stride", "reps",
                        "beta_grid", "methods"},
                  "windows");
    if (!cfg.contains("dataset")) throw ConfigError("windows: needs 'dataset'");
    const std::string format = get_string(cfg, "format", "plain");
    std::vector<double> losses;
    long dropped = 0;
    if (format == "plain") {
        losses = ingest_plain(cfg["dataset"].get<std::string>());
    } else if (format == "fama_french") {
        const auto columns = static_cast<std::size_t>(get_number(cfg, "columns", 48));
        const auto panel =
            ingest_fama_french(cfg["dataset"].get<std::string>(), columns, cfg.value("sign_flip", true));
        dropped = panel.dropped_rows;
        if (!cfg.contains("network")) throw ConfigError("windows: fama_french input needs a 'network' block");
        const auto net = network_from_json(cfg["network"], columns, "windows.network");
        losses.reserve(panel.rows.size());
        for (const auto& row : panel.rows) losses.push_back(net.loss(row));
    } else {
        throw ConfigError("windows: format must be plain|fama_french");
    }
    WindowPlan plan;
    plan.n = static_cast<std::size_t>(get_number(cfg, "n", 200));
    plan.stride = static_cast<std::size_t>(get_number(cfg, "stride", 60));
    plan.reps = static_cast<long>(get_number(cfg, "reps", 30));
    plan.beta_grid = grid_from_json(cfg, "beta_grid", "windows");
    const auto methods = methods_from_json(cfg, "windows");
    const auto study = run_rolling_windows(losses, plan, methods, seed);
    json payload;
    payload["cells"] = cells_to_json(study);
    payload["benchmark_full_sample"] = study.truth;
    payload["beta_grid"] = study.beta_grid;
    payload["dropped_rows"] = dropped;
    payload["note"] = "rolling-window quartiles are stability diagnostics; windows may overlap and carry no "
                      "sampling-distribution claim";
    out.write("windows", cfg, seed, study.rows, payload);
    return out.exit_code;
}

int cmd_network(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg,
                  {"seed", "out", "d", "network", "marginal", "nu", "n", "reps", "beta_grid", "truth_draws", "methods"},
                  "network");
    const auto d = static_cast<std::size_t>(get_number(cfg, "d", 48));
    if (!cfg.contains("network")) throw ConfigError("network: needs the 'network' block");
    const auto net = network_from_json(cfg["network"], d, "network.network");
    const auto marginal = cfg.contains("marginal") ? law_from_json(cfg["marginal"], "network.marginal")
                                                   : TailLawSpec::generalized_pareto(1.0 / 3.0, 1.0);
    Matrix corr(d, d);
    for (std::size_t i = 0; i < d; ++i) corr.at(i, i) = 1.0;
    const auto factors =
        FactorLawSpec::student_t(std::vector<TailLawSpec>(d, marginal), get_number(cfg, "nu", 4.0), corr);
    ReplicationPlan plan;
    plan.beta_grid = grid_from_json(cfg, "beta_grid", "network");
    plan.n = static_cast<std::size_t>(get_number(cfg, "n", 500));
    plan.reps = static_cast<long>(get_number(cfg, "reps", 100));
    plan.truth_draws = static_cast<std::size_t>(get_number(cfg, "truth_draws", 5000000));
    plan.seed = seed;
    const auto methods = methods_from_json(cfg, "network");
    const auto study = run_replication_study(DataSource::from_network(factors, net), methods, plan);
    json payload;
    payload["cells"] = cells_to_json(study);
    payload["truth"] = study.truth;
    out.write("network", cfg, seed, study.rows, payload);
    return out.exit_code;
}

int cmd_hedge(const json& cfg, Outputs& out, std::uint64_t seed) {
    validate_keys(cfg, {"seed", "out", "S0", "strike", "mu", "sigma2", "r", "k1", "m_grid", "beta", "n", "truth_paths",
                        "methods"},
                  "hedge");
    HedgePlan plan;
    plan.config.S0 = get_number(cfg, "S0", 25.0);
    plan.config.strike = get_number(cfg, "strike", 25.0);
    plan.config.r = get_number(cfg, "r", 0.10);
    plan.config.mu = get_number(cfg, "mu", plan.config.r);
    plan.config.sigma2 = get_number(cfg, "sigma2", 0.075);
    plan.config.cost_per_share = get_number(cfg, "k1", 0.0025);
    for (const double m : grid_from_json(cfg, "m_grid", "hedge"))
        plan.m_grid.push_back(static_cast<std::size_t>(m));
    plan.beta = get_number(cfg, "beta", 0.01);
    plan.n = static_cast<std::size_t>(get_number(cfg, "n", 200));
    plan.truth_paths = static_cast<std::size_t>(get_number(cfg, "truth_paths", 1000000));
    plan.seed = seed;
    const auto methods = methods_from_json(cfg, "hedge");
    const auto result = hedging_frequency_study(plan, methods);
    json payload;
    payload["truth_by_m"] = result.truth_by_m;
    payload["m_grid"] = plan.m_grid;
    payload["truth_u_shaped"] = result.truth_u_shaped;
    json picks = json::array();
    for (const auto& p : result.picks)
        picks.push_back({{"method", p.method}, {"argmin_m", p.argmin_m}, {"guarantee_ratio", p.guarantee_ratio}});
    payload["picks"] = picks;
    out.write("hedge", cfg, seed, result.study.rows, payload);
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"tail-risk evaluation under Wasserstein and phi-divergence ambiguity"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;

    const std::vector<std::string> names = {"estimate", "robust-cvar", "diagnose", "replicate",
                                            "sweep",    "windows",     "network",  "hedge"};
    std::map<std::string, CLI::App*> subs;
    std::map<std::string, double> beta_flag, delta_flag, n_flag, reps_flag, m_flag;
    std::map<std::string, std::string> dataset_flag;
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file (a summary.json is accepted)");
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
        sub->add_option("--out", out_dir, "output directory for results.csv and summary.json");
        sub->add_option("--beta", beta_flag[name], "target tail level");
        sub->add_option("--delta", delta_flag[name], "ambiguity radius");
        sub->add_option("--n", n_flag[name], "sample / window size");
        sub->add_option("--reps", reps_flag[name], "replication / window count");
        sub->add_option("--M", m_flag[name], "index bound of the tail-regime test");
        sub->add_option("--dataset", dataset_flag[name], "input data file");
        subs[name] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    CLI::App* sub = subs[command];

    try {
        json cfg = config_path.empty() ? json::object() : load_config_file(config_path);
        if (!cfg.is_object()) throw ConfigError("config root must be an object");

        if (sub->count("--beta")) cfg["beta"] = beta_flag[command];
        if (sub->count("--delta")) {
            if (cfg.contains("method"))
                cfg["method"]["delta"] = delta_flag[command];
            else
                cfg["delta"] = delta_flag[command];
        }
        if (sub->count("--n")) cfg["n"] = n_flag[command];
        if (sub->count("--reps")) cfg["reps"] = reps_flag[command];
        if (sub->count("--M")) cfg["M"] = m_flag[command];
        if (sub->count("--dataset")) cfg["dataset"] = dataset_flag[command];
        if (sub->count("--seed")) cfg["seed"] = static_cast<double>(seed);
        if (sub->count("--out")) cfg["out"] = out_dir;

        const auto run_seed = static_cast<std::uint64_t>(get_number(cfg, "seed", 1));
        cfg["seed"] = run_seed;

        Outputs outputs;
        outputs.out_dir = get_string(cfg, "out", ".");

        if (command == "estimate") return cmd_estimate(cfg, outputs, run_seed);
        if (command == "robust-cvar") return cmd_robust_cvar(cfg, outputs, run_seed);
        if (command == "diagnose") return cmd_diagnose(cfg, outputs, run_seed);
        if (command == "replicate") return cmd_replicate(cfg, outputs, run_seed);
        if (command == "sweep") return cmd_sweep(cfg, outputs, run_seed);
        if (command == "windows") return cmd_windows(cfg, outputs, run_seed);
        if (command == "network") return cmd_network(cfg, outputs, run_seed);
        if (command == "hedge") return cmd_hedge(cfg, outputs, run_seed);
        throw ConfigError("unknown command " + command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const EmptyData& e) {
        std::cerr << "empty data: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
