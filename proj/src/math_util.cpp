#include "tailrisk/math_util.hpp"

#include <cmath>
#include <stdexcept>

#include "tailrisk/errors.hpp"

namespace tailrisk {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_survival(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;

    // Acklam's rational approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01, -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement against the exact cdf.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

namespace {

// Lentz continued fraction for the incomplete beta.
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 3e-16) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) throw DomainError("student_t_cdf: nu must be > 0");
    const double z = nu / (nu + x * x);
    const double p = 0.5 * incomplete_beta(0.5 * nu, 0.5, z);
    return x > 0.0 ? 1.0 - p : p;
}

namespace {

struct SimpsonState {
    double accumulated = 0.0;
    bool blown_up = false;
    double guard;
    long evals = 0;
};

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m,
                   double fm, double whole, double tol, int depth, SimpsonState& st) {
    if (st.blown_up) return 0.0;
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    st.evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        const double v = left + right + delta / 15.0;
        st.accumulated += std::fabs(v);
        if (st.accumulated > st.guard) st.blown_up = true;
        return v;
    }
    const double lv = simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, st);
    const double rv = simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, st);
    return lv + rv;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                    double abs_tol, double blow_up_guard) {
    if (a == b) return {0.0, true};
    SimpsonState st;
    st.guard = blow_up_guard;
    const double fa = f(a), fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // First pass with the absolute tolerance, then tighten relative to the
    // estimate if needed.
    double tol = std::max(abs_tol, std::fabs(whole) * rel_tol);
    double v = simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48, st);
    if (st.blown_up) return {v, false};
    const double needed = std::max(abs_tol, std::fabs(v) * rel_tol);
    if (needed < tol * 0.5) {
        st = SimpsonState{};
        st.guard = blow_up_guard;
        v = simpson_rec(f, a, fa, b, fb, m, fm, whole, needed, 48, st);
        if (st.blown_up) return {v, false};
    }
    return {v, true};
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol,
                               int max_iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iters && (b - a) > tol * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

double safeguarded_newton(const std::function<double(double)>& f, const std::function<double(double)>& df, double lo,
                          double hi, double tol, int max_iters) {
    double a = lo, b = hi;
    double x = 0.5 * (a + b);
    for (int it = 0; it < max_iters; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx > 0.0)
            b = x;
        else
            a = x;
        const double dfx = df(x);
        double xn = x - fx / dfx;
        if (!(xn > a && xn < b) || !std::isfinite(xn)) xn = 0.5 * (a + b);
        if (std::fabs(xn - x) <= tol * (1.0 + std::fabs(x))) return xn;
        x = xn;
    }
    throw NonConvergence("safeguarded_newton: no convergence after max iterations");
}

double bisect_decreasing(const std::function<double(double)>& g, double target, double lo, double hi, double rel_tol,
                         int max_iters) {
    double a = lo, b = hi;
    for (int it = 0; it < max_iters; ++it) {
        const double m = 0.5 * (a + b);
        if ((b - a) <= rel_tol * (std::fabs(m) + 1e-300)) return m;
        if (g(m) > target)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace tailrisk
