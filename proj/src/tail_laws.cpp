#include "tailrisk/tail_laws.hpp"

#include <algorithm>
#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

TailLawSpec TailLawSpec::generalized_pareto(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) throw DomainError("GeneralizedPareto needs shape > 0, scale > 0");
    TailLawSpec law(Family::GeneralizedPareto);
    law.p1_ = shape;
    law.p2_ = scale;
    return law;
}

TailLawSpec TailLawSpec::weibull_type(double scale_c, double shape_q) {
    if (!(scale_c > 0.0) || !(shape_q > 0.0)) throw DomainError("WeibullType needs c > 0, q > 0");
    TailLawSpec law(Family::WeibullType);
    law.p1_ = scale_c;
    law.p2_ = shape_q;
    return law;
}

TailLawSpec TailLawSpec::survival_formula(double tail_exponent, double log_power, double prefactor) {
    if (!(tail_exponent > 0.0) || !(prefactor > 0.0)) throw DomainError("SurvivalFormula needs a > 0, k > 0");
    TailLawSpec law(Family::SurvivalFormula);
    law.p1_ = tail_exponent;
    law.p2_ = log_power;
    law.p3_ = prefactor;
    // Splice at the smallest point from which the formula is <= 1 and
    // strictly decreasing; a uniform bulk fills [0, x0].
    const double a = tail_exponent, b = log_power;
    double x_mono;
    if (b > 0.0)
        x_mono = std::exp(b / a);
    else if (b == 0.0)
        x_mono = 0.0;
    else
        x_mono = 1.0 + 1e-9;  // (log x)^b defined and decreasing for x > 1
    double x0 = x_mono;
    if (!(law.tail_formula(x0) <= 1.0) || x0 <= 0.0) {
        double lo = std::max(x_mono, 1.0 + 1e-12), hi = std::max(2.0, 2.0 * lo);
        int guard = 0;
        while (law.tail_formula(hi) > 1.0 && ++guard < 200) hi *= 2.0;
        if (guard >= 200) throw NonConvergence("SurvivalFormula: could not bracket the splice point");
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (lo + hi);
            (law.tail_formula(m) > 1.0 ? lo : hi) = m;
        }
        x0 = hi;
    }
    law.x0_ = x0;
    law.s0_ = law.tail_formula(x0);
    return law;
}

TailLawSpec TailLawSpec::hazard_formula(double exponent_q, double log_power_r) {
    if (!(exponent_q > 0.0) || !(log_power_r >= 0.0)) throw DomainError("HazardFormula needs q > 0, r >= 0");
    TailLawSpec law(Family::HazardFormula);
    law.p1_ = exponent_q;
    law.p2_ = log_power_r;
    // Lambda is 0 at the origin and strictly increasing, so the survival
    // formula is valid from x0 = 0 with no bulk.
    law.x0_ = 0.0;
    law.s0_ = 1.0;
    return law;
}

TailLawSpec TailLawSpec::lognormal_std() { return TailLawSpec(Family::LognormalStd); }

TailLawSpec TailLawSpec::mixture(TailLawSpec base, TailLawSpec contaminant, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("Mixture needs eps in [0,1]");
    TailLawSpec law(Family::Mixture);
    law.eps_ = eps;
    law.base_ = std::make_shared<TailLawSpec>(std::move(base));
    law.cont_ = std::make_shared<TailLawSpec>(std::move(contaminant));
    return law;
}

double TailLawSpec::tail_formula(double x) const {
    if (family_ == Family::SurvivalFormula) return p3_ * std::pow(x, -p1_) * std::pow(std::log(x), p2_);
    // HazardFormula
    return std::exp(-std::pow(x, p1_) * std::pow(std::log1p(x), p2_));
}

double TailLawSpec::survival(double x) const {
    switch (family_) {
        case Family::GeneralizedPareto:
            if (x <= 0.0) return 1.0;
            return std::pow(1.0 + p1_ * x / p2_, -1.0 / p1_);
        case Family::WeibullType:
            if (x <= 0.0) return 1.0;
            return std::exp(-p1_ * std::pow(x, p2_));
        case Family::SurvivalFormula:
            if (x <= 0.0) return 1.0;
            if (x >= x0_) return tail_formula(x);
            return 1.0 - x * (1.0 - s0_) / x0_;
        case Family::HazardFormula:
            if (x <= 0.0) return 1.0;
            return tail_formula(x);
        case Family::LognormalStd:
            if (x <= 0.0) return 1.0;
            return normal_survival(std::log(x));
        case Family::Mixture:
            return (1.0 - eps_) * base_->survival(x) + eps_ * cont_->survival(x);
    }
    return 0.0;
}

double TailLawSpec::quantile(double beta) const {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("quantile: beta must lie in (0,1)");
    switch (family_) {
        case Family::GeneralizedPareto:
            return (p2_ / p1_) * std::expm1(-p1_ * std::log(beta));
        case Family::WeibullType:
            return std::pow(std::log(1.0 / beta) / p1_, 1.0 / p2_);
        case Family::SurvivalFormula: {
            if (beta >= s0_) return x0_ * (1.0 - beta) / (1.0 - s0_);
            // Newton on log survival: log k - a log x + b log log x = log beta.
            const double a = p1_, b = p2_, k = p3_;
            const double target = std::log(beta);
            const auto g = [&](double x) { return std::log(k) - a * std::log(x) + b * std::log(std::log(x)); };
            const auto dg = [&](double x) { return -a / x + b / (x * std::log(x)); };
            double x = std::max(x0_ * (1.0 + 1e-12), std::pow(k / beta, 1.0 / a));
            double lo = x0_, hi = x;
            int guard = 0;
            while (g(hi) > target) {
                hi *= 2.0;
                if (++guard >= 200) throw NonConvergence("quantile: bracket not found within 200 doublings");
            }
            x = std::min(std::max(x, lo), hi);
            for (int it = 0; it < 200; ++it) {
                const double fx = g(x) - target;
                if (fx > 0.0)
                    lo = x;
                else
                    hi = x;
                double xn = x - fx / dg(x);
                if (!(xn > lo && xn < hi) || !std::isfinite(xn)) xn = 0.5 * (lo + hi);
                if (std::fabs(xn - x) <= 1e-11 * (std::fabs(x) + 1e-300)) return xn;
                x = xn;
            }
            return x;
        }
        case Family::HazardFormula: {
            const double q = p1_, r = p2_;
            const double y = std::log(1.0 / beta);
            const auto lam = [&](double x) { return std::pow(x, q) * std::pow(std::log1p(x), r); };
            const auto dlam = [&](double x) {
                const double L = std::log1p(x);
                return std::pow(x, q - 1.0) * std::pow(L, r - 1.0) * (q * L + r * x / (1.0 + x));
            };
            double x = std::pow(y, 1.0 / (q + r));  // small-x behaviour Lambda ~ x^{q+r}
            if (x > 1.0) x = std::pow(y, 1.0 / q);
            double lo = 0.0, hi = std::max(x, 1e-12);
            int guard = 0;
            while (lam(hi) < y) {
                hi *= 2.0;
                if (++guard >= 200) throw NonConvergence("quantile: bracket not found within 200 doublings");
            }
            x = std::min(std::max(x, lo + 1e-300), hi);
            for (int it = 0; it < 200; ++it) {
                const double fx = lam(x) - y;
                if (fx < 0.0)
                    lo = x;
                else
                    hi = x;
                double xn = x - fx / dlam(x);
                if (!(xn > lo && xn < hi) || !std::isfinite(xn)) xn = 0.5 * (lo + hi);
                if (std::fabs(xn - x) <= 1e-11 * (std::fabs(x) + 1e-300)) return xn;
                x = xn;
            }
            return x;
        }
        case Family::LognormalStd:
            return std::exp(normal_quantile(1.0 - beta));
        case Family::Mixture: {
            if (eps_ == 0.0) return base_->quantile(beta);
            if (eps_ == 1.0) return cont_->quantile(beta);
            const auto fbar = [&](double x) { return survival(x); };
            double hi = 1.0;
            int guard = 0;
            while (fbar(hi) > beta) {
                hi *= 2.0;
                if (++guard >= 200) throw NonConvergence("quantile: bracket not found within 200 doublings");
            }
            double lo = 0.0;
            for (int it = 0; it < 400; ++it) {
                const double m = 0.5 * (lo + hi);
                if ((hi - lo) <= 1e-10 * (std::fabs(m) + 1e-300)) break;
                (fbar(m) > beta ? lo : hi) = m;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

double TailLawSpec::sample_one(Rng& rng) const {
    if (family_ == Family::Mixture) {
        const double branch = rng.next_uniform();
        const double u = rng.next_uniform();
        return branch < eps_ ? cont_->quantile(u) : base_->quantile(u);
    }
    return quantile(rng.next_uniform());
}

std::optional<TailRegime> TailLawSpec::regime() const {
    switch (family_) {
        case Family::GeneralizedPareto:
            return TailRegime::frechet(1.0 / p1_);
        case Family::WeibullType:
            return TailRegime::gumbel(p2_);
        case Family::SurvivalFormula:
            return TailRegime::frechet(p1_);
        case Family::HazardFormula:
            return TailRegime::gumbel(p1_);
        case Family::LognormalStd:
            return std::nullopt;  // hazard is slowly varying: neither regime
        case Family::Mixture: {
            if (eps_ == 0.0) return base_->regime();
            if (eps_ == 1.0) return cont_->regime();
            const auto rb = base_->regime(), rc = cont_->regime();
            const bool b_heavy = rb && rb->heavy(), c_heavy = rc && rc->heavy();
            if (b_heavy && c_heavy) return TailRegime::frechet(std::min(rb->gamma, rc->gamma));
            if (b_heavy) return rb;
            if (c_heavy) return rc;
            if (rb && rc) return TailRegime::gumbel(std::min(rb->gamma, rc->gamma));
            return std::nullopt;  // a slowly-varying-hazard component dominates
        }
    }
    return std::nullopt;
}

std::string TailLawSpec::name() const {
    switch (family_) {
        case Family::GeneralizedPareto:
            return "generalized_pareto";
        case Family::WeibullType:
            return "weibull_type";
        case Family::SurvivalFormula:
            return "survival_formula";
        case Family::HazardFormula:
            return "hazard_formula";
        case Family::LognormalStd:
            return "lognormal_std";
        case Family::Mixture:
            return "mixture";
    }
    return "?";
}

double survival(const TailLawSpec& law, double x) { return law.survival(x); }

double quantile(const TailLawSpec& law, double beta) { return law.quantile(beta); }

std::vector<double> sample(const TailLawSpec& law, std::size_t n, Rng rng) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(law.sample_one(rng));
    return out;
}

std::pair<double, double> law_mean_sd(const TailLawSpec& law) {
    // E[X^k] = int_0^1 quantile(t)^k dt with a log substitution near t=0.
    const auto moment = [&](int k) {
        const auto f = [&](double s) {
            const double t = std::min(std::exp(-s), 1.0 - 1e-16);
            return std::pow(law.quantile(t), k) * t;
        };
        double total = 0.0, s0 = 0.0;
        for (int block = 0; block < 200; ++block) {
            const double piece = integrate_adaptive(f, s0, s0 + 10.0, 1e-9, 1e-13).value;
            total += piece;
            s0 += 10.0;
            if (std::fabs(piece) < 1e-11 * (std::fabs(total) + 1e-12)) break;
        }
        return total;
    };
    const double m1 = moment(1);
    const double m2 = moment(2);
    return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

}  // namespace tailrisk
