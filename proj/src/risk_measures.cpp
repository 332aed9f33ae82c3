#include "tailrisk/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

WeightedAtoms::WeightedAtoms(std::vector<double> values, std::vector<double> weights) {
    if (values.size() != weights.size()) throw DimensionMismatch("WeightedAtoms: values/weights size mismatch");
    if (values.empty()) throw EmptyData("WeightedAtoms: no atoms");
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    values_.reserve(values.size());
    weights_.reserve(values.size());
    for (const std::size_t i : idx) {
        values_.push_back(values[i]);
        weights_.push_back(weights[i]);
    }
    prefix_w_.assign(values_.size() + 1, 0.0);
    prefix_wv_.assign(values_.size() + 1, 0.0);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        prefix_w_[i + 1] = prefix_w_[i] + weights_[i];
        prefix_wv_[i + 1] = prefix_wv_[i] + weights_[i] * values_[i];
    }
}

WeightedAtoms::WeightedAtoms(std::vector<double> values)
    : WeightedAtoms(values, std::vector<double>(values.size(), values.empty() ? 0.0 : 1.0 / values.size())) {}

std::size_t WeightedAtoms::count_above(double u) const {
    // values_ sorted descending: first index with value <= u
    return std::lower_bound(values_.begin(), values_.end(), u,
                            [](double v, double bound) { return v > bound; }) -
           values_.begin();
}

double WeightedAtoms::weight_above(double u) const { return prefix_w_[count_above(u)]; }

double WeightedAtoms::expected_excess(double u) const {
    const std::size_t k = count_above(u);
    return (prefix_wv_[k] - u * prefix_w_[k]) / total_weight();
}

double WeightedAtoms::quantile(double beta) const {
    const double target = beta * total_weight();
    // smallest u with weight above u <= target: scan prefix weights
    const auto it = std::upper_bound(prefix_w_.begin() + 1, prefix_w_.end(), target);
    const std::size_t k = it - prefix_w_.begin() - 1;  // atoms 0..k-1 have cumweight <= target
    if (k >= values_.size()) return values_.back();
    return values_[k];
}

WeightedAtoms::CvarResult WeightedAtoms::cvar(double beta) const {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("cvar: beta must lie in (0,1)");
    const double mass = beta * total_weight();
    // accumulate the top atoms until mass is filled; fractional share of the
    // crossing atom
    std::size_t k = 0;
    while (k < values_.size() && prefix_w_[k + 1] < mass) ++k;
    if (k >= values_.size()) k = values_.size() - 1;
    const double full = prefix_wv_[k];
    const double frac = (mass - prefix_w_[k]) * values_[k];
    const double value = (full + frac) / mass;
    return {value, values_[k]};
}

double sample_cvar(const std::vector<double>& losses, double beta) {
    return WeightedAtoms(losses).cvar(beta).value;
}

double sample_cvar(const WeightedAtoms& atoms, double beta) { return atoms.cvar(beta).value; }

double risk_measure_from_quantile(const std::function<double(double)>& quantile_of_tail_prob, const WeightSpec& w,
                                  double beta) {
    const double guard = 1e12;
    // t = e^{-s}; integrate s in blocks until the contribution dies out.
    const auto integrand = [&](double s) {
        const double t = std::exp(-s);
        return w.value(t) * quantile_of_tail_prob(beta * t) * t;
    };

    double total = 0.0;

    // First block [0, ln 2] absorbs a possible power singularity of w at t=1
    // via the substitution s = y^{1/(1+e)}.
    const double e = w.right_endpoint_exponent();
    {
        const double c = 1.0 / (1.0 + e);
        const auto transformed = [&](double y) {
            const double s = std::pow(y, c);
            return integrand(s) * c * std::pow(y, c - 1.0);
        };
        const double y_hi = std::pow(std::log(2.0), 1.0 + e);
        const auto piece = integrate_adaptive(transformed, 1e-14, y_hi, 1e-7, 1e-13, guard);
        if (!piece.converged) throw DivergentIntegral("risk_measure: quadrature blow-up (integrand not integrable)");
        total += piece.value;
    }

    double s0 = std::log(2.0);
    double newly = kInf;
    for (int block = 0; block < 400; ++block) {
        const auto piece = integrate_adaptive(integrand, s0, s0 + 8.0, 1e-7, 1e-13, guard);
        if (!piece.converged || std::fabs(total) > guard)
            throw DivergentIntegral("risk_measure: quadrature blow-up (integrand not integrable)");
        total += piece.value;
        newly = std::fabs(piece.value);
        s0 += 8.0;
        if (newly < 1e-9 * (std::fabs(total) + 1e-12)) return total;
    }
    throw DivergentIntegral("risk_measure: truncated tail mass did not fall below tolerance");
}

double risk_measure(const TailLawSpec& law, const WeightSpec& w, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("risk_measure: beta must lie in (0,1)");
    return risk_measure_from_quantile([&](double t) { return law.quantile(t); }, w, beta);
}

}  // namespace tailrisk
