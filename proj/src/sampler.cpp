#include "fgf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <thread>

#include "fgf/error.hpp"
#include "fgf/stats.hpp"

namespace fgf {

PrecisionOperator::PrecisionOperator(const KernelMatrix& A)
    : dom_(A.domain()), s_(A.order()) {
    double hd = std::pow(dom_->spacing(), dom_->dim());
    P_ = hd * A.matrix();
    llt_.compute(P_);
    if (llt_.info() != Eigen::Success)
        throw Error("PrecisionOperator: Cholesky failed; reduce the grid size or s");

    Eigen::MatrixXd L = llt_.matrixL();
    double residual = (L * L.transpose() - P_).norm();
    if (residual > 1e-10 * P_.norm())
        throw Error("PrecisionOperator: factorization residual too large");

    // Extremal eigenvalues by a few (inverse) power iterations.
    const int n = static_cast<int>(P_.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    for (int it = 0; it < 12; ++it) v = (P_ * v).normalized();
    double lmax = v.dot(P_ * v);
    v = Eigen::VectorXd::Ones(n).normalized();
    for (int it = 0; it < 12; ++it) v = llt_.solve(v).normalized();
    double lmin = v.dot(P_ * v);
    cond_ = lmax / std::max(lmin, 1e-300);
    if (cond_ > 1e12)
        std::cerr << "PrecisionOperator: condition estimate " << cond_
                  << " exceeds 1e12; samples may lose accuracy (reduce sites or s)\n";
}

GridFunction sample(const PrecisionOperator& P, RngSpec rng) {
    const int n = P.domain()->site_count();
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.normal();
    // phi = L^{-T} z so that Cov(phi) = (L Lᵀ)^{-1} = P^{-1}
    Eigen::VectorXd phi = P.cholesky().matrixU().solve(z);
    return GridFunction(P.domain(), std::move(phi));
}

Eigen::MatrixXd analytic_covariance(const PrecisionOperator& P) {
    const int n = static_cast<int>(P.matrix().rows());
    Eigen::MatrixXd C = P.cholesky().solve(Eigen::MatrixXd::Identity(n, n));
    double asym = (C - C.transpose()).norm();
    if (asym > 1e-10 * C.norm())
        throw Error("analytic_covariance: result not symmetric to tolerance");
    return 0.5 * (C + C.transpose());
}

FieldEnsemble ensemble(const PrecisionOperator& P, std::uint64_t seed, int replicas, int threads,
                       bool accumulate_covariance) {
    if (replicas < 1) throw Error("ensemble: need at least one replica");
    FieldEnsemble e;
    e.op = &P;
    e.seed = seed;
    e.replicas = replicas;
    e.samples.resize(replicas);

    threads = std::max(1, threads);
    auto worker = [&](int first, int step) {
        for (int r = first; r < replicas; r += step)
            e.samples[r] = sample(P, RngSpec(seed, static_cast<std::uint64_t>(r))).values;
    };
    if (threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
        for (auto& th : pool) th.join();
    }

    const int n = P.domain()->site_count();
    e.mean = Eigen::VectorXd::Zero(n);
    if (accumulate_covariance) e.covariance = Eigen::MatrixXd::Zero(n, n);
    e.maxima.resize(replicas);
    // Deterministic merge order: by replica index.
    for (int r = 0; r < replicas; ++r) {
        e.mean += e.samples[r];
        if (accumulate_covariance) e.covariance += e.samples[r] * e.samples[r].transpose();
        e.maxima[r] = e.samples[r].maxCoeff();
    }
    e.mean /= replicas;
    if (accumulate_covariance) e.covariance /= replicas;
    return e;
}

MaxStatistic max_statistic(const FieldEnsemble& e) {
    if (e.maxima.empty()) throw Error("max_statistic: empty ensemble");
    MaxStatistic m;
    m.sorted_maxima = e.maxima;
    std::sort(m.sorted_maxima.begin(), m.sorted_maxima.end());
    m.q05 = quantile_sorted(m.sorted_maxima, 0.05);
    m.q25 = quantile_sorted(m.sorted_maxima, 0.25);
    m.q50 = quantile_sorted(m.sorted_maxima, 0.50);
    m.q75 = quantile_sorted(m.sorted_maxima, 0.75);
    m.q95 = quantile_sorted(m.sorted_maxima, 0.95);
    return m;
}

}  // namespace fgf
