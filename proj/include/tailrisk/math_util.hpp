#pragma once

#include <cmath>
#include <functional>
#include <limits>

namespace tailrisk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double x);
double normal_survival(double x);

/// Inverse standard normal cdf; rational approximation refined by one
/// Halley step against erfc, absolute error well below 1e-9.
double normal_quantile(double p);

double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a,b) by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Student-t cdf with nu degrees of freedom.
double student_t_cdf(double x, double nu);

struct QuadratureResult {
    double value;
    bool converged;
};

// Adaptive Simpson on [a,b]. blow_up_guard aborts (returns converged=false)
// once the accumulated absolute value exceeds the guard, which the risk
// integrator uses to detect divergent integrands.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                    double abs_tol, double blow_up_guard = kInf);

/// Golden-section minimum of a unimodal function on [lo,hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol,
                               int max_iters = 200);

/// Root of an increasing function on [lo,hi] by safeguarded Newton
/// (bisection fallback); requires f(lo) <= 0 <= f(hi).
double safeguarded_newton(const std::function<double(double)>& f, const std::function<double(double)>& df, double lo,
                          double hi, double tol, int max_iters = 200);

/// Root of a monotone decreasing function g (g(x)=target) by bracketed
/// bisection with geometric bracket expansion from x0.
double bisect_decreasing(const std::function<double(double)>& g, double target, double lo, double hi, double rel_tol,
                         int max_iters = 400);

}  // namespace tailrisk
