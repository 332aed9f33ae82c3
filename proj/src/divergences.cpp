#include "tailrisk/divergences.hpp"

#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

PhiSpec PhiSpec::chi_square() { return PhiSpec(Family::ChiSquare, 2.0); }

PhiSpec PhiSpec::kl() { return PhiSpec(Family::KL, 0.0); }

PhiSpec PhiSpec::cressie_read(double p) {
    if (!(p > 1.0)) throw DomainError("CressieRead needs p > 1");
    return PhiSpec(Family::CressieRead, p);
}

PhiSpec PhiSpec::exp_shifted() { return PhiSpec(Family::ExpShifted, 1.0); }

double PhiSpec::phi(double t) const {
    if (!(t >= 0.0)) throw DomainError("phi: t must be >= 0");
    switch (family_) {
        case Family::ChiSquare:
            return 0.5 * (t - 1.0) * (t - 1.0);
        case Family::KL:
            return t == 0.0 ? 1.0 : t * std::log(t) - t + 1.0;
        case Family::CressieRead:
            return (std::pow(t, p_) - p_ * t + p_ - 1.0) / (p_ * (p_ - 1.0));
        case Family::ExpShifted:
            return std::exp(t - 1.0) - t;
    }
    return 0.0;
}

double PhiSpec::conjugate(double s) const {
    switch (family_) {
        case Family::ChiSquare:
            return s >= -1.0 ? s + 0.5 * s * s : -0.5;
        case Family::KL:
            return std::expm1(s);
        case Family::CressieRead: {
            const double edge = -1.0 / (p_ - 1.0);
            if (s < edge) return -1.0 / p_;
            const double base = 1.0 + (p_ - 1.0) * s;
            return (std::pow(base, p_ / (p_ - 1.0)) - 1.0) / p_;
        }
        case Family::ExpShifted: {
            if (s <= -1.0) return kInf;
            return (1.0 + s) * std::log1p(s);
        }
    }
    return 0.0;
}

double PhiSpec::second_derivative(double t) const {
    if (!(t >= 0.0)) throw DomainError("phi_second: t must be >= 0");
    switch (family_) {
        case Family::ChiSquare:
            return 1.0;
        case Family::KL:
            return 1.0 / t;
        case Family::CressieRead:
            return std::pow(t, p_ - 2.0);
        case Family::ExpShifted:
            return std::exp(t - 1.0);
    }
    return 0.0;
}

double PhiSpec::inverse_upper(double y) const {
    if (!(y >= 0.0)) throw DomainError("phi_inverse_upper: y must be >= 0");
    if (y == 0.0) return 1.0;
    if (family_ == Family::ChiSquare) return 1.0 + std::sqrt(2.0 * y);

    // Bracket [1, hi] by doubling, then Newton with bisection safeguard.
    double hi = 2.0;
    int guard = 0;
    while (phi(hi) < y) {
        hi *= 2.0;
        if (++guard >= 200) throw NonConvergence("phi_inverse_upper: no bracket after 200 doublings");
    }
    double lo = 1.0, t = std::min(hi, std::max(1.0 + std::sqrt(2.0 * y), 1.0 + y));
    for (int it = 0; it < 200; ++it) {
        const double f = phi(t) - y;
        if (f > 0.0)
            hi = t;
        else
            lo = t;
        double dphi;
        switch (family_) {
            case Family::KL:
                dphi = std::log(t);
                break;
            case Family::CressieRead:
                dphi = (std::pow(t, p_ - 1.0) - 1.0) / (p_ - 1.0);
                break;
            case Family::ExpShifted:
                dphi = std::exp(t - 1.0) - 1.0;
                break;
            default:
                dphi = t - 1.0;
        }
        double tn = (dphi > 0.0) ? t - f / dphi : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi) || !std::isfinite(tn)) tn = 0.5 * (lo + hi);
        if (std::fabs(tn - t) <= 1e-12 * (std::fabs(t) + 1.0)) return tn;
        t = tn;
    }
    throw NonConvergence("phi_inverse_upper: Newton failed after 200 iterations");
}

PhiSpec::GrowthClass PhiSpec::growth_class() const {
    switch (family_) {
        case Family::ChiSquare:
            return {false, 2.0};
        case Family::CressieRead:
            return {false, p_};
        case Family::ExpShifted:
            return {true, 1.0};
        case Family::KL:
            // x log x growth: treated separately by the dual solver
            return {false, 1.0};
    }
    return {false, 0.0};
}

std::string PhiSpec::name() const {
    switch (family_) {
        case Family::ChiSquare:
            return "chi_square";
        case Family::KL:
            return "kl";
        case Family::CressieRead:
            return "cressie_read";
        case Family::ExpShifted:
            return "exp_shifted";
    }
    return "?";
}

double phi(const PhiSpec& spec, double t) { return spec.phi(t); }
double phi_conjugate(const PhiSpec& spec, double s) { return spec.conjugate(s); }
double phi_second(const PhiSpec& spec, double t) { return spec.second_derivative(t); }
double phi_inverse_upper(const PhiSpec& spec, double y) { return spec.inverse_upper(y); }

}  // namespace tailrisk
