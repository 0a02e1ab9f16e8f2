#include "fgf/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fgf/error.hpp"

namespace fgf {

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error("ks_distance: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    size_t i = 0, j = 0;
    double d = 0;
    while (i < sa.size() && j < sb.size()) {
        // consume every copy of the smaller value on both sides before
        // comparing, so tied observations do not inflate the statistic
        double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == v) ++i;
        while (j < sb.size() && sb[j] == v) ++j;
        double fa = static_cast<double>(i) / sa.size();
        double fb = static_cast<double>(j) / sb.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0) return 1.0;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_one_sample_pvalue(std::vector<double> data, const std::function<double(double)>& cdf) {
    if (data.empty()) throw Error("ks_one_sample_pvalue: empty sample");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0;
    for (size_t i = 0; i < data.size(); ++i) {
        double f = cdf(data[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    return kolmogorov_q(lambda);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw Error("quantile: empty sample");
    if (sorted.size() == 1) return sorted[0];
    double pos = p * (sorted.size() - 1);
    size_t lo = static_cast<size_t>(std::floor(pos));
    size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - lo;
    return (1.0 - frac) * sorted[lo] + frac * sorted[hi];
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("ls_slope: need >= 2 points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

}  // namespace fgf
