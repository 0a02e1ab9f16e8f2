#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fgf {

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov tail Q(lambda) = 2 Σ (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// One-sample KS p-value for data against a continuous CDF, with the
/// Stephens small-sample correction.
double ks_one_sample_pvalue(std::vector<double> data, const std::function<double(double)>& cdf);

/// Quantile of a sorted sample (linear interpolation between order
/// statistics, p in [0,1]).
double quantile_sorted(std::span<const double> sorted, double p);

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

}  // namespace fgf
