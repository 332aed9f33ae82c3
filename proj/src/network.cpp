#include "tailrisk/network.hpp"

#include <algorithm>
#include <cmath>

#include "tailrisk/errors.hpp"
#include "tailrisk/math_util.hpp"

namespace tailrisk {

Matrix interpolated_exposure(std::size_t d, std::size_t K, double lambda) {
    if (K == 0 || d % K != 0) throw DimensionMismatch("interpolated_exposure: needs K | d");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("interpolated_exposure: lambda must lie in [0,1]");
    const std::size_t q = d / K;
    Matrix A(K, d, lambda / static_cast<double>(K));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i * q; j < (i + 1) * q; ++j) A.at(i, j) += 1.0 - lambda;
    return A;
}

namespace {

// Gaussian elimination with partial pivoting; A is consumed.
std::vector<double> solve_dense(Matrix A, std::vector<double> b) {
    const std::size_t n = A.rows;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A.at(r, col)) > std::fabs(A.at(piv, col))) piv = r;
        if (std::fabs(A.at(piv, col)) < 1e-14) throw SingularSystem("network: (I-C) is numerically singular");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A.at(r, col) / A.at(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= A.at(i, j) * x[j];
        x[i] = acc / A.at(i, i);
    }
    return x;
}

}  // namespace

NetworkModel::NetworkModel(Matrix exposure, Matrix cross_holdings, double p, bool normalize_by_d, bool clamp_negative)
    : d_(exposure.cols), K_(exposure.rows), p_(p), normalize_(normalize_by_d), clamp_(clamp_negative) {
    if (!(p >= 1.0)) throw DomainError("network: norm order p must be >= 1 (or infinity)");
    for (const double a : exposure.data)
        if (!(a >= 0.0 && a <= 1.0)) throw DomainError("network: exposure entries must lie in [0,1]");

    if (cross_holdings.rows == 0) {
        composite_ = std::move(exposure);
        return;
    }
    if (cross_holdings.rows != K_ || cross_holdings.cols != K_)
        throw DimensionMismatch("network: cross-holdings must be K x K");

    std::vector<double> chat(K_);
    for (std::size_t j = 0; j < K_; ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i < K_; ++i) colsum += cross_holdings.at(i, j);
        if (colsum > 1.0 + 1e-12) throw DomainError("network: cross-holdings column sums must be <= 1");
        chat[j] = 1.0 - colsum;
        if (chat[j] < 0.0) chat[j] = 0.0;
    }

    Matrix imc(K_, K_);
    for (std::size_t i = 0; i < K_; ++i)
        for (std::size_t j = 0; j < K_; ++j) imc.at(i, j) = (i == j ? 1.0 : 0.0) - cross_holdings.at(i, j);

    // composite = Chat (I-C)^{-1} A, built column by column
    composite_ = Matrix(K_, d_);
    for (std::size_t j = 0; j < d_; ++j) {
        std::vector<double> col(K_);
        for (std::size_t i = 0; i < K_; ++i) col[i] = exposure.at(i, j);
        const auto solved = solve_dense(imc, std::move(col));
        for (std::size_t i = 0; i < K_; ++i) composite_.at(i, j) = chat[i] * solved[i];
    }
}

NetworkModel NetworkModel::without_cross_holdings(Matrix exposure, double p, bool normalize_by_d,
                                                  bool clamp_negative) {
    return NetworkModel(std::move(exposure), Matrix(), p, normalize_by_d, clamp_negative);
}

double NetworkModel::loss(const std::vector<double>& z) const {
    if (z.size() != d_) throw DimensionMismatch("network_loss: factor vector has wrong length");
    double norm = 0.0;
    const bool inf_norm = std::isinf(p_);
    for (std::size_t i = 0; i < K_; ++i) {
        double f = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
            const double zj = clamp_ ? std::max(z[j], 0.0) : z[j];
            f += composite_.at(i, j) * zj;
        }
        if (inf_norm)
            norm = std::max(norm, std::fabs(f));
        else
            norm += std::pow(std::fabs(f), p_);
    }
    if (!inf_norm) norm = std::pow(norm, 1.0 / p_);
    return normalize_ ? norm / static_cast<double>(d_) : norm;
}

namespace {

std::vector<double> cholesky_lower(const Matrix& corr) {
    const std::size_t n = corr.rows;
    if (corr.cols != n) throw DimensionMismatch("correlation matrix must be square");
    std::vector<double> L(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(corr.at(i, i) - 1.0) > 1e-10) throw DomainError("correlation matrix needs unit diagonal");
        for (std::size_t j = 0; j <= i; ++j) {
            if (std::fabs(corr.at(i, j) - corr.at(j, i)) > 1e-10)
                throw DomainError("correlation matrix must be symmetric");
            double acc = corr.at(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= L[i * n + k] * L[j * n + k];
            if (i == j) {
                if (acc <= 0.0) throw DomainError("correlation matrix is not positive definite");
                L[i * n + j] = std::sqrt(acc);
            } else {
                L[i * n + j] = acc / L[j * n + j];
            }
        }
    }
    return L;
}

// Marsaglia-Tsang gamma(shape, 1) sampler.
double gamma_draw(double shape, Rng& rng) {
    const double boost = shape < 1.0 ? std::pow(rng.next_uniform(), 1.0 / shape) : 1.0;
    const double a = shape < 1.0 ? shape + 1.0 : shape;
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = normal_quantile(rng.next_uniform());
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = rng.next_uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v * boost;
    }
}

}  // namespace

FactorLawSpec FactorLawSpec::independent(std::vector<TailLawSpec> marginals) {
    if (marginals.empty()) throw EmptyData("FactorLawSpec: needs at least one marginal");
    FactorLawSpec f;
    f.marginals = std::move(marginals);
    f.copula = Copula::Independent;
    return f;
}

FactorLawSpec FactorLawSpec::student_t(std::vector<TailLawSpec> marginals, double dof, Matrix correlation) {
    if (marginals.empty()) throw EmptyData("FactorLawSpec: needs at least one marginal");
    if (!(dof > 0.0)) throw DomainError("FactorLawSpec: t copula needs dof > 0");
    if (correlation.rows != marginals.size()) throw DimensionMismatch("FactorLawSpec: correlation size mismatch");
    FactorLawSpec f;
    f.marginals = std::move(marginals);
    f.copula = Copula::StudentT;
    f.t_dof = dof;
    f.chol_ = cholesky_lower(correlation);
    f.correlation = std::move(correlation);
    return f;
}

std::vector<double> FactorLawSpec::sample_one(Rng& rng) const {
    const std::size_t d = marginals.size();
    std::vector<double> out(d);
    if (copula == Copula::Independent) {
        for (std::size_t j = 0; j < d; ++j) out[j] = marginals[j].quantile(rng.next_uniform());
        return out;
    }
    // correlated normals over sqrt(chi2_nu/nu), then marginal transforms
    std::vector<double> g(d);
    for (std::size_t j = 0; j < d; ++j) g[j] = normal_quantile(rng.next_uniform());
    const double w = std::sqrt(gamma_draw(0.5 * t_dof, rng) * 2.0 / t_dof);
    for (std::size_t i = d; i-- > 0;) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) acc += chol_[i * d + k] * g[k];
        const double t = acc / w;
        out[i] = marginals[i].quantile(1.0 - student_t_cdf(t, t_dof));
    }
    return out;
}

double network_loss(const NetworkModel& model, const std::vector<double>& z) { return model.loss(z); }

std::vector<double> pushforward_loss_values(const FactorLawSpec& factors, const NetworkModel& model, std::size_t n,
                                            Rng rng) {
    std::vector<double> losses;
    losses.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng sub = rng.split(i);
        losses.push_back(model.loss(factors.sample_one(sub)));
    }
    return losses;
}

EmpiricalSample pushforward_losses(const FactorLawSpec& factors, const NetworkModel& model, std::size_t n, Rng rng) {
    return EmpiricalSample(pushforward_loss_values(factors, model, n, rng));
}

}  // namespace tailrisk
