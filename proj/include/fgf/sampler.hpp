#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "fgf/fraclap.hpp"
#include "fgf/grid.hpp"
#include "fgf/rng.hpp"

namespace fgf {

/// Precision matrix of the discrete field: P = h^d · ((-Δ_h)^s)|_{Omega_h}
/// with its lower Cholesky factor. The field law is N(0, P^{-1}).
class PrecisionOperator {
public:
    explicit PrecisionOperator(const KernelMatrix& A);

    const DomainPtr& domain() const { return dom_; }
    double order() const { return s_; }
    const Eigen::MatrixXd& matrix() const { return P_; }
    const Eigen::LLT<Eigen::MatrixXd>& cholesky() const { return llt_; }
    /// Rough extremal-eigenvalue condition estimate (power iterations).
    double condition_estimate() const { return cond_; }

private:
    DomainPtr dom_;
    double s_;
    Eigen::MatrixXd P_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double cond_ = 0;
};

/// One exact draw φ ~ N(0, P^{-1}): solve Lᵀ φ = z with z standard normal
/// from the replica's stream.
GridFunction sample(const PrecisionOperator& P, RngSpec rng);

/// Covariance matrix P^{-1} by column solves; symmetric to 1e-10.
Eigen::MatrixXd analytic_covariance(const PrecisionOperator& P);

struct FieldEnsemble {
    const PrecisionOperator* op = nullptr;
    std::uint64_t seed = 0;
    int replicas = 0;
    std::vector<Eigen::VectorXd> samples;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;  // empirical, only when accumulate_covariance
    std::vector<double> maxima;  // per replica, in replica order
};

/// N independent replicas with per-replica streams; execution may be
/// parallel, the result is independent of the thread count (replica i is a
/// pure function of (seed, i); summaries accumulate in replica order).
FieldEnsemble ensemble(const PrecisionOperator& P, std::uint64_t seed, int replicas,
                       int threads = 1, bool accumulate_covariance = false);

struct MaxStatistic {
    std::vector<double> sorted_maxima;
    double q05 = 0, q25 = 0, q50 = 0, q75 = 0, q95 = 0;
};

MaxStatistic max_statistic(const FieldEnsemble& e);

}  // namespace fgf
