#pragma once

#include <cstddef>
#include <vector>

#include "tailrisk/evt.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/tail_laws.hpp"

namespace tailrisk {

// Dense row-major matrix, only as large as the network needs.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// A_lambda = (1-lambda) A0 + lambda A1 with block-disjoint A0 and uniform
/// A1 = 1/K; requires K | d.
Matrix interpolated_exposure(std::size_t d, std::size_t K, double lambda);

// Cross-holdings contagion map: firm losses are Chat (I-C)^{-1} A xi, with
// Chat the diagonal of external ownership shares. The composite matrix is
// precomputed once at construction.
class NetworkModel {
  public:
    /// C may be empty (no cross-holdings). p >= 1, or infinity for the
    /// largest single-firm loss.
    NetworkModel(Matrix exposure, Matrix cross_holdings, double p, bool normalize_by_d, bool clamp_negative);

    static NetworkModel without_cross_holdings(Matrix exposure, double p, bool normalize_by_d, bool clamp_negative);

    double loss(const std::vector<double>& z) const;

    std::size_t assets() const { return d_; }
    std::size_t firms() const { return K_; }
    double norm_order() const { return p_; }
    bool clamps_negative() const { return clamp_; }

  private:
    std::size_t d_, K_;
    double p_;
    bool normalize_;
    bool clamp_;
    Matrix composite_;  // Chat (I-C)^{-1} A
};

struct FactorLawSpec {
    enum class Copula { Independent, StudentT };

    std::vector<TailLawSpec> marginals;
    Copula copula = Copula::Independent;
    double t_dof = 4.0;
    Matrix correlation;  // required for StudentT, unit diagonal psd

    static FactorLawSpec independent(std::vector<TailLawSpec> marginals);
    static FactorLawSpec student_t(std::vector<TailLawSpec> marginals, double dof, Matrix correlation);

    std::vector<double> sample_one(Rng& rng) const;

  private:
    std::vector<double> chol_;  // cached lower Cholesky factor
};

double network_loss(const NetworkModel& model, const std::vector<double>& z);

/// n factor draws mapped through the network loss, sorted descending.
/// Per-draw RNG substreams keep the batch order-independent.
EmpiricalSample pushforward_losses(const FactorLawSpec& factors, const NetworkModel& model, std::size_t n, Rng rng);

std::vector<double> pushforward_loss_values(const FactorLawSpec& factors, const NetworkModel& model, std::size_t n,
                                            Rng rng);

}  // namespace tailrisk
