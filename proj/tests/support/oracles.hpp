#pragma once

// Independent reference implementations used only by tests. These must not
// share code paths with the library solvers they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "tailrisk/math_util.hpp"
#include "tailrisk/risk_measures.hpp"

namespace tailrisk::oracle {

// Worst-case expectation of c_i = (z_i - u)^+ over the chi-square ball
//   { L >= 0, sum q_i L_i = 1, 0.5 sum q_i (L_i - 1)^2 <= delta },
// solved exactly by enumerating active sets (m <= ~12). Candidates are
// feasible stationary points plus simplex vertices; the best feasible
// candidate is the maximum of this concave program.
inline double chi2_ball_worst_excess(const std::vector<double>& z, const std::vector<double>& q, double delta,
                                     double u) {
    const std::size_t m = z.size();
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = std::max(z[i] - u, 0.0);

    double best = -tailrisk::kInf;

    // vertices e_j / q_j (ball possibly inactive)
    for (std::size_t j = 0; j < m; ++j) {
        double cost = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double L = (i == j) ? 1.0 / q[j] : 0.0;
            cost += 0.5 * q[i] * (L - 1.0) * (L - 1.0);
        }
        if (cost <= delta + 1e-14) best = std::max(best, c[j]);
    }

    for (std::size_t mask = 0; mask + 1 < (1ULL << m); ++mask) {  // mask = active (zeroed) set
        double qa = 0.0, w = 0.0, qc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (1ULL << i))
                qa += q[i];
            else {
                w += q[i];
                qc += q[i] * c[i];
            }
        }
        if (w <= 0.0) continue;
        const double delta_a = delta - 0.5 * qa;
        if (delta_a <= 0.0) continue;
        const double cbar = qc / w;
        double s2 = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (!(mask & (1ULL << i))) s2 += q[i] * (c[i] - cbar) * (c[i] - cbar);
        const double denom2 = 2.0 * delta_a - (1.0 - w) * (1.0 - w) / w;
        if (denom2 < 0.0) continue;
        if (s2 <= 1e-28) {
            // constant payoff on the support: objective is cbar
            best = std::max(best, cbar);
            continue;
        }
        if (denom2 <= 0.0) continue;
        const double mu = std::sqrt(s2 / denom2);
        const double nu = cbar - mu * (1.0 - w) / w;
        bool feasible = true;
        double value = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (1ULL << i)) continue;
            const double L = 1.0 + (c[i] - nu) / mu;
            if (L < -1e-10) {
                feasible = false;
                break;
            }
            value += q[i] * c[i] * L;
        }
        if (feasible) best = std::max(best, value);
    }
    return best;
}

/// Worst-case CVaR over the chi-square ball by the minimax representation:
/// min_u { u + (worst-case E[(Z-u)^+]) / beta } with the inner maximum exact.
inline double chi2_primal_worst_cvar(const std::vector<double>& z, const std::vector<double>& q, double delta,
                                     double beta) {
    const auto [zmin, zmax] = std::minmax_element(z.begin(), z.end());
    const auto objective = [&](double u) { return u + chi2_ball_worst_excess(z, q, delta, u) / beta; };
    const double u = tailrisk::golden_section_minimize(objective, *zmin - (*zmax - *zmin) - 1.0, *zmax, 1e-12, 400);
    return objective(u);
}

/// Projected-supergradient ascent over the likelihood-ratio set (Dykstra
/// projections in the q-weighted metric). Slower and rougher than the
/// active-set route; used to cross-validate it.
inline double chi2_primal_worst_cvar_pg(const std::vector<double>& z, const std::vector<double>& q, double delta,
                                        double beta, int iters = 4000) {
    const std::size_t m = z.size();
    std::vector<double> L(m, 1.0);

    const auto project = [&](std::vector<double>& x) {
        std::vector<double> p1(m, 0.0), p2(m, 0.0), p3(m, 0.0);
        for (int it = 0; it < 60; ++it) {
            // ball
            for (std::size_t i = 0; i < m; ++i) x[i] += p1[i];
            double r2 = 0.0;
            for (std::size_t i = 0; i < m; ++i) r2 += 0.5 * q[i] * (x[i] - 1.0) * (x[i] - 1.0);
            std::vector<double> y = x;
            if (r2 > delta) {
                const double sc = std::sqrt(delta / r2);
                for (std::size_t i = 0; i < m; ++i) y[i] = 1.0 + sc * (x[i] - 1.0);
            }
            for (std::size_t i = 0; i < m; ++i) p1[i] = x[i] - y[i];
            x = y;
            // hyperplane sum q_i x_i = 1
            for (std::size_t i = 0; i < m; ++i) x[i] += p2[i];
            double dot = 0.0, qq = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                dot += q[i] * x[i];
                qq += q[i];
            }
            y = x;
            for (std::size_t i = 0; i < m; ++i) y[i] -= (dot - 1.0) / qq;
            for (std::size_t i = 0; i < m; ++i) p2[i] = x[i] - y[i];
            x = y;
            // nonnegativity
            for (std::size_t i = 0; i < m; ++i) x[i] += p3[i];
            y = x;
            for (std::size_t i = 0; i < m; ++i) y[i] = std::max(0.0, x[i]);
            for (std::size_t i = 0; i < m; ++i) p3[i] = x[i] - y[i];
            x = y;
        }
    };

    project(L);
    double best = -tailrisk::kInf;
    double scale = 0.0;
    for (const double v : z) scale = std::max(scale, std::fabs(v));
    for (int it = 1; it <= iters; ++it) {
        std::vector<double> w(m);
        for (std::size_t i = 0; i < m; ++i) w[i] = std::max(q[i] * L[i], 0.0);
        tailrisk::WeightedAtoms atoms(z, w);
        const auto cv = atoms.cvar(beta);
        best = std::max(best, cv.value);
        const double step = 0.5 * scale / (scale / 1.0 + 1.0) / std::sqrt(static_cast<double>(it));
        for (std::size_t i = 0; i < m; ++i) L[i] += step * q[i] * std::max(z[i] - cv.var, 0.0) / beta;
        project(L);
    }
    return best;
}

/// Worst-case expectation of (Z-u)^+ over the p-Wasserstein ball around a
/// small discrete center, brute-forced on a discretized coupling grid: each
/// atom may ship mass to destinations y on a grid, the resulting transport
/// LP (budget delta^p, per-atom mass caps) is solved exactly through its
/// own scalar Lagrangian.
inline double wasserstein_coupling_grid_excess(const std::vector<double>& z, const std::vector<double>& q, double p,
                                               double delta, double u, std::size_t grid = 20000,
                                               double reach = 0.0) {
    const double budget = std::pow(delta, p);
    double base = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) base += q[i] * std::max(z[i] - u, 0.0);
    if (reach <= 0.0) {
        const double zmax = *std::max_element(z.begin(), z.end());
        const double span = std::fabs(zmax) + std::fabs(u) + 1.0;
        // generous: enough to cover delta/beta^{1/p}-sized shifts at beta ~ 1e-2
        reach = 4.0 * span + 200.0 * delta;
    }
    // dual value(lambda) = lambda*budget + sum_i q_i max_g (gain_ig - lambda cost_ig)^+
    const auto dual = [&](double lambda) {
        double acc = lambda * budget;
        for (std::size_t i = 0; i < z.size(); ++i) {
            double best = 0.0;
            for (std::size_t g = 1; g <= grid; ++g) {
                const double step = reach * static_cast<double>(g) / static_cast<double>(grid);
                const double gain = std::max(z[i] + step - u, 0.0) - std::max(z[i] - u, 0.0);
                if (gain <= 0.0) continue;
                best = std::max(best, gain - lambda * std::pow(step, p));
            }
            acc += q[i] * best;
        }
        return acc;
    };
    // lambda* is positive and below the steepest gain/cost ratio on the grid
    double hi_ratio = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double step = reach / static_cast<double>(grid);
        const double gain = std::max(z[i] + step - u, 0.0) - std::max(z[i] - u, 0.0);
        if (gain > 0.0) hi_ratio = std::max(hi_ratio, gain / std::pow(step, p));
    }
    const double lambda = tailrisk::golden_section_minimize(dual, 0.0, 2.0 * hi_ratio, 1e-12, 300);
    return base + std::min(dual(lambda), dual(0.0));
}

}  // namespace tailrisk::oracle
