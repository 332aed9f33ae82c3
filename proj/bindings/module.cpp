// Python bindings for the main operations: laws, weights, risk measures,
// divergences, EVT estimators, nominal construction, robust evaluation and
// the study harness. Thin wrappers only; all logic lives in the core.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tailrisk/errors.hpp"
#include "tailrisk/harness.hpp"
#include "tailrisk/hedging.hpp"
#include "tailrisk/io.hpp"
#include "tailrisk/math_util.hpp"

namespace py = pybind11;
using namespace tailrisk;

namespace {

RegimeRule regime_rule_from_args(double M, double alpha, double kappa1, const std::string& force_regime) {
    if (!force_regime.empty()) {
        if (force_regime != "frechet" && force_regime != "gumbel")
            throw DomainError("force_regime must be 'frechet' or 'gumbel'");
        return RegimeRule::force(force_regime == "frechet" ? TailRegime::Kind::Frechet : TailRegime::Kind::Gumbel,
                                 kappa1);
    }
    return RegimeRule::test(M, alpha, kappa1);
}

py::dict eval_to_dict(const RobustEvalResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["u"] = r.u_star;
    d["eta"] = r.eta_star;
    d["lambda"] = r.lambda_star;
    d["iterations"] = r.iterations;
    d["status"] = to_string(r.status);
    d["mc_stderr"] = r.mc_stderr;
    return d;
}

}  // namespace

PYBIND11_MODULE(_tailrisk, m) {
    m.doc() = "worst-case tail risk over Wasserstein and phi-divergence ambiguity sets";

    py::register_exception<Error>(m, "TailriskError");

    py::class_<TailRegime>(m, "TailRegime")
        .def_static("frechet", &TailRegime::frechet, py::arg("gamma"))
        .def_static("gumbel", &TailRegime::gumbel, py::arg("gamma"))
        .def_property_readonly("gamma", [](const TailRegime& r) { return r.gamma; })
        .def_property_readonly("kind", [](const TailRegime& r) { return r.name(); })
        .def("__repr__", [](const TailRegime& r) { return "TailRegime(" + r.name() + ", gamma=" + std::to_string(r.gamma) + ")"; });

    py::class_<TailLawSpec>(m, "TailLaw")
        .def_static("generalized_pareto", &TailLawSpec::generalized_pareto, py::arg("shape"), py::arg("scale") = 1.0)
        .def_static("weibull_type", &TailLawSpec::weibull_type, py::arg("c"), py::arg("q"))
        .def_static("exponential", &TailLawSpec::exponential)
        .def_static("survival_formula", &TailLawSpec::survival_formula, py::arg("a"), py::arg("b"), py::arg("k"))
        .def_static("hazard_formula", &TailLawSpec::hazard_formula, py::arg("q"), py::arg("r"))
        .def_static("lognormal_std", &TailLawSpec::lognormal_std)
        .def_static("mixture", &TailLawSpec::mixture, py::arg("base"), py::arg("contaminant"), py::arg("eps"))
        .def("survival", &TailLawSpec::survival, py::arg("x"))
        .def("quantile", &TailLawSpec::quantile, py::arg("beta"))
        .def("sample",
             [](const TailLawSpec& law, std::size_t n, std::uint64_t seed) {
                 return sample(law, n, Rng::stream(seed, 0));
             },
             py::arg("n"), py::arg("seed"))
        .def_property_readonly("regime", [](const TailLawSpec& law) { return law.regime(); })
        .def_property_readonly("name", &TailLawSpec::name);

    py::class_<WeightSpec>(m, "Weight")
        .def_static("cvar", &WeightSpec::cvar)
        .def_static("power", &WeightSpec::power, py::arg("k"))
        .def_static("wang", &WeightSpec::wang, py::arg("lam"))
        .def_static("log_power", &WeightSpec::log_power, py::arg("p"), py::arg("q"))
        .def_static("beta", &WeightSpec::beta, py::arg("p"), py::arg("q"))
        .def_static("poly_log", &WeightSpec::poly_log, py::arg("q"))
        .def("value", &WeightSpec::value, py::arg("t"))
        .def_property_readonly("kappa", &WeightSpec::kappa)
        .def_property_readonly("name", &WeightSpec::name);

    m.def("weight_integral", &weight_integral, py::arg("weight"));
    m.def("risk_measure", &risk_measure, py::arg("law"), py::arg("weight"), py::arg("beta"));
    m.def("sample_cvar", py::overload_cast<const std::vector<double>&, double>(&sample_cvar), py::arg("losses"),
          py::arg("beta"));

    py::class_<PhiSpec>(m, "Phi")
        .def_static("chi_square", &PhiSpec::chi_square)
        .def_static("kl", &PhiSpec::kl)
        .def_static("cressie_read", &PhiSpec::cressie_read, py::arg("p"))
        .def_static("exp_shifted", &PhiSpec::exp_shifted)
        .def("__call__", &PhiSpec::phi, py::arg("t"))
        .def("conjugate", &PhiSpec::conjugate, py::arg("s"))
        .def("second_derivative", &PhiSpec::second_derivative, py::arg("t"))
        .def("inverse_upper", &PhiSpec::inverse_upper, py::arg("y"))
        .def_property_readonly("super_polynomial", [](const PhiSpec& s) { return s.growth_class().super_polynomial; })
        .def_property_readonly("growth_index", [](const PhiSpec& s) { return s.growth_class().p; })
        .def_property_readonly("name", &PhiSpec::name);

    py::class_<EmpiricalSample>(m, "EmpiricalSample")
        .def(py::init<std::vector<double>>(), py::arg("losses"))
        .def("__len__", &EmpiricalSample::size)
        .def("order_stat", &EmpiricalSample::order_stat, py::arg("i"))
        .def_property_readonly("sorted_desc", &EmpiricalSample::sorted_desc);

    m.def("intermediate_var", &intermediate_var, py::arg("sample"), py::arg("beta0"));
    m.def("hill_estimate", &hill_estimate, py::arg("sample"), py::arg("k"));
    m.def("light_tail_estimate", &light_tail_estimate, py::arg("sample"), py::arg("beta0"), py::arg("kappa1") = 0.5);
    m.def(
        "regime_test",
        [](const EmpiricalSample& s, std::size_t k, double M, double alpha, double kappa1) {
            const auto d = regime_test(s, k, M, alpha, kappa1);
            py::dict out;
            out["regime"] = d.regime.name();
            out["gamma_hat"] = d.regime.gamma;
            out["hill_gamma"] = d.hill_gamma;
            out["threshold"] = d.threshold;
            out["rejected_h0"] = d.rejected_h0;
            out["k"] = d.k;
            return out;
        },
        py::arg("sample"), py::arg("k"), py::arg("M"), py::arg("alpha") = 0.05, py::arg("kappa1") = 0.5);

    py::class_<NominalModel>(m, "NominalModel")
        .def_static(
            "from_data",
            [](const EmpiricalSample& s, double beta0, double M, double alpha, double kappa1,
               const std::string& force_regime) {
                const auto rule = regime_rule_from_args(M, alpha, kappa1, force_regime);
                EvtCalibration cal;
                if (rule.mode == RegimeRule::Mode::Test)
                    cal = calibrate(s, beta0, rule.index_bound_M, rule.alpha, rule.kappa1);
                else
                    cal = calibrate_forced(s, beta0,
                                           rule.mode == RegimeRule::Mode::ForceHeavy ? TailRegime::Kind::Frechet
                                                                                     : TailRegime::Kind::Gumbel,
                                           rule.kappa1);
                return build_nominal(cal, s);
            },
            py::arg("sample"), py::arg("beta0"), py::arg("M") = 0.0, py::arg("alpha") = 0.05,
            py::arg("kappa1") = 0.5, py::arg("force_regime") = "")
        .def_static("oracle", &NominalModel::oracle, py::arg("law"), py::arg("beta0"))
        .def("survival", &NominalModel::survival, py::arg("x"))
        .def("quantile", &NominalModel::quantile, py::arg("t"))
        .def("sample_tail",
             [](const NominalModel& m_, std::size_t n, std::uint64_t seed) {
                 return m_.sample_tail(n, Rng::stream(seed, 0));
             },
             py::arg("n"), py::arg("seed"))
        .def_property_readonly("splice_point", &NominalModel::splice_point)
        .def_property_readonly("tail_mass", &NominalModel::tail_mass)
        .def_property_readonly("regime", &NominalModel::regime);

    m.def(
        "wasserstein_worst_cvar",
        [](const TailLawSpec& law, double p, double delta, double beta) {
            return eval_to_dict(wasserstein_worst_cvar(law, p, delta, beta));
        },
        py::arg("law"), py::arg("p"), py::arg("delta"), py::arg("beta"));
    m.def(
        "wasserstein_worst_cvar_sample",
        [](const std::vector<double>& losses, double p, double delta, double beta) {
            return eval_to_dict(wasserstein_worst_cvar(WeightedAtoms(losses), p, delta, beta));
        },
        py::arg("losses"), py::arg("p"), py::arg("delta"), py::arg("beta"));
    m.def(
        "phi_dual_cvar",
        [](const std::vector<double>& losses, const PhiSpec& phi, double delta, double beta) {
            return eval_to_dict(phi_dual_cvar(WeightedAtoms(losses), phi, delta, beta));
        },
        py::arg("losses"), py::arg("phi"), py::arg("delta"), py::arg("beta"));
    m.def(
        "rpev_dro_cvar",
        [](const EmpiricalSample& s, double beta, double beta0, double delta, std::size_t tail_draws, double M,
           double alpha, double kappa1, const std::string& force_regime, std::uint64_t seed, bool compute_stderr) {
            RpevConfig cfg;
            cfg.delta = delta;
            cfg.tail_draws = tail_draws;
            cfg.regime_rule = regime_rule_from_args(M, alpha, kappa1, force_regime);
            cfg.compute_stderr = compute_stderr;
            const auto r = rpev_dro_cvar(s, beta, beta0, cfg, Rng::stream(seed, 0));
            py::dict d = eval_to_dict(r.eval);
            d["gamma_hat"] = r.calibration.gamma_hat;
            d["regime"] = r.calibration.regime.name();
            d["v_hat"] = r.calibration.v_hat;
            d["beta0_hat"] = r.calibration.beta0_hat;
            return d;
        },
        py::arg("sample"), py::arg("beta"), py::arg("beta0"), py::arg("delta"), py::arg("tail_draws") = 10000,
        py::arg("M") = 0.0, py::arg("alpha") = 0.05, py::arg("kappa1") = 0.5, py::arg("force_regime") = "",
        py::arg("seed") = 1, py::arg("compute_stderr") = true);
    m.def(
        "worst_case_survival",
        [](const TailLawSpec& law, const PhiSpec& phi, double delta, double x) {
            const auto w = worst_case_survival(law, phi, delta, x);
            py::dict d;
            d["fbar_wc"] = w.fbar_wc;
            d["s"] = w.s;
            d["feasible"] = w.feasible;
            d["asymptotic"] = w.asymptotic;
            return d;
        },
        py::arg("law"), py::arg("phi"), py::arg("delta"), py::arg("x"));
    m.def("worst_case_quantile",
          py::overload_cast<const TailLawSpec&, const PhiSpec&, double, double>(&worst_case_quantile),
          py::arg("law"), py::arg("phi"), py::arg("delta"), py::arg("t"));

    m.def(
        "inflation_diagnostic",
        [](const TailRegime& regime, const std::string& kind, double p, const PhiSpec* phi, double delta) {
            AmbiguitySpec spec = kind == "wasserstein"
                                     ? AmbiguitySpec::wasserstein(p, delta)
                                     : AmbiguitySpec::phi_ball(phi ? *phi : PhiSpec::chi_square(), delta);
            const auto d = inflation_diagnostic(regime, spec);
            py::dict out;
            out["value"] = d.value;
            out["description"] = d.describe();
            out["type"] = d.type == InflationDescriptor::Type::LogRatio        ? "log_ratio"
                          : d.type == InflationDescriptor::Type::ValueRatio    ? "value_ratio"
                          : d.type == InflationDescriptor::Type::Infinite      ? "infinite"
                                                                               : "rate_preserving";
            return out;
        },
        py::arg("regime"), py::arg("kind"), py::arg("p") = 1.0, py::arg("phi") = nullptr, py::arg("delta") = 0.1);

    // network and hedging
    py::class_<NetworkModel>(m, "NetworkModel")
        .def(py::init([](std::size_t d, std::size_t K, double lam, double p, bool normalize, bool clamp) {
                 return NetworkModel(interpolated_exposure(d, K, lam), Matrix(), p, normalize, clamp);
             }),
             py::arg("d"), py::arg("K"), py::arg("lam"), py::arg("p") = 1.0, py::arg("normalize") = true,
             py::arg("clamp") = false)
        .def("loss", &NetworkModel::loss, py::arg("z"));

    m.def(
        "pushforward_losses",
        [](const NetworkModel& net, const TailLawSpec& marginal, double nu, std::size_t n, std::uint64_t seed) {
            const std::size_t d = net.assets();
            Matrix corr(d, d);
            for (std::size_t i = 0; i < d; ++i) corr.at(i, i) = 1.0;
            const auto factors = FactorLawSpec::student_t(std::vector<TailLawSpec>(d, marginal), nu, corr);
            return pushforward_loss_values(factors, net, n, Rng::stream(seed, 0));
        },
        py::arg("network"), py::arg("marginal"), py::arg("nu"), py::arg("n"), py::arg("seed"));

    py::class_<HedgeConfig>(m, "HedgeConfig")
        .def(py::init([](double S0, double strike, double mu, double sigma2, double r, double k1, std::size_t m_) {
                 HedgeConfig c;
                 c.S0 = S0;
                 c.strike = strike;
                 c.mu = mu;
                 c.sigma2 = sigma2;
                 c.r = r;
                 c.cost_per_share = k1;
                 c.rebalances = m_;
                 return c;
             }),
             py::arg("S0") = 25.0, py::arg("strike") = 25.0, py::arg("mu") = 0.1, py::arg("sigma2") = 0.075,
             py::arg("r") = 0.1, py::arg("k1") = 0.0025, py::arg("m") = 10);
    m.def(
        "simulate_hedging_errors",
        [](const HedgeConfig& cfg, std::size_t n, std::uint64_t seed) {
            return simulate_hedging_errors(cfg, n, Rng::stream(seed, 0));
        },
        py::arg("config"), py::arg("n"), py::arg("seed"));

    m.def("normal_quantile", &normal_quantile, py::arg("p"));
    m.attr("__version__") = "0.1.0";
}
