#include "tailrisk/weights.hpp"

#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

WeightSpec WeightSpec::cvar() { return WeightSpec(Family::CVaR, 0.0, 0.0); }

WeightSpec WeightSpec::power(double k) {
    if (!(k > 0.0)) throw DomainError("Power weight needs k > 0");
    return WeightSpec(Family::Power, k, 0.0);
}

WeightSpec WeightSpec::wang(double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("Wang weight needs lambda >= 0");
    return WeightSpec(Family::Wang, lambda, 0.0);
}

WeightSpec WeightSpec::log_power(double p, double q) {
    if (!(p > 0.0) || !(q > -1.0)) throw DomainError("LogPower weight needs p > 0, q > -1");
    return WeightSpec(Family::LogPower, p, q);
}

WeightSpec WeightSpec::beta(double p, double q) {
    if (!(p > 0.0) || !(q > 0.0)) throw DomainError("Beta weight needs p > 0, q > 0");
    return WeightSpec(Family::Beta, p, q);
}

WeightSpec WeightSpec::poly_log(double q) {
    if (!(q > -1.0)) throw DomainError("PolyLog weight needs q > -1");
    return WeightSpec(Family::PolyLog, q, 0.0);
}

double WeightSpec::value(double t) const {
    if (!(t > 0.0) || t > 1.0) throw DomainError("weight_value: t must lie in (0,1]");
    switch (family_) {
        case Family::CVaR:
            return 1.0;
        case Family::Power:
            return p1_ * std::pow(t, p1_ - 1.0);
        case Family::Wang: {
            if (p1_ == 0.0) return 1.0;
            if (t == 1.0) return 0.0;  // limit of exp(-lambda * inf)
            return std::exp(-p1_ * normal_quantile(t) - 0.5 * p1_ * p1_);
        }
        case Family::LogPower: {
            const double lt = -std::log(t);
            return std::exp((p2_ + 1.0) * std::log(p1_) - std::lgamma(p2_ + 1.0)) * std::pow(t, p1_ - 1.0) *
                   std::pow(lt, p2_);
        }
        case Family::Beta:
            return std::exp(-log_beta(p1_, p2_)) * std::pow(t, p1_ - 1.0) * std::pow(1.0 - t, p2_ - 1.0);
        case Family::PolyLog: {
            if (t == 1.0) return p1_ == 0.0 ? 1.0 : 0.0;
            return std::exp(-std::lgamma(p1_ + 1.0)) * std::pow(-std::log(t), p1_);
        }
    }
    return 0.0;
}

double WeightSpec::kappa() const {
    switch (family_) {
        case Family::CVaR:
        case Family::Wang:
        case Family::PolyLog:
            return 0.0;
        case Family::Power:
        case Family::LogPower:
        case Family::Beta:
            return p1_ - 1.0;
    }
    return 0.0;
}

double WeightSpec::right_endpoint_exponent() const {
    switch (family_) {
        case Family::Beta:
            return p2_ - 1.0;
        case Family::LogPower:
        case Family::PolyLog:
            // -log t ~ (1-t) near t=1
            return family_ == Family::LogPower ? p2_ : p1_;
        default:
            return 0.0;
    }
}

std::string WeightSpec::name() const {
    switch (family_) {
        case Family::CVaR:
            return "cvar";
        case Family::Power:
            return "power";
        case Family::Wang:
            return "wang";
        case Family::LogPower:
            return "log_power";
        case Family::Beta:
            return "beta";
        case Family::PolyLog:
            return "poly_log";
    }
    return "?";
}

double weight_value(const WeightSpec& w, double t) { return w.value(t); }

double weight_integral(const WeightSpec& w) {
    // Left half (0, 1/2]: substitute t = e^{-s}; the integrand decays like
    // e^{-s(kappa+1)} so extend in blocks until the contribution dies.
    const auto left_integrand = [&](double s) { return w.value(std::exp(-s)) * std::exp(-s); };
    double left = 0.0;
    double s0 = std::log(2.0);
    for (int block = 0; block < 300; ++block) {
        const double s1 = s0 + 10.0;
        const double piece = integrate_adaptive(left_integrand, s0, s1, 1e-10, 1e-14).value;
        left += piece;
        s0 = s1;
        if (std::fabs(piece) < 1e-13 * (std::fabs(left) + 1e-12)) break;
    }

    // Right half [1/2, 1): substitute 1-t = y^{1/(1+e)} to absorb a power
    // singularity of exponent e at t=1.
    const double e = w.right_endpoint_exponent();
    const double pw = 1.0 + e;
    const auto right_integrand = [&](double y) {
        const double u = std::pow(y, 1.0 / pw);
        const double t = 1.0 - u;
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return w.value(t) * std::pow(u, -e) / pw;
    };
    const double y_hi = std::pow(0.5, pw);
    const double right = integrate_adaptive(right_integrand, 0.0, y_hi, 1e-10, 1e-14).value;
    return left + right;
}

}  // namespace tailrisk
