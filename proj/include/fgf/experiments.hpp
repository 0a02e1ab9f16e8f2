#pragma once

#include <string>
#include <vector>

#include "fgf/config.hpp"
#include "fgf/grid.hpp"

namespace fgf {

struct ConvergeResult {
    std::vector<double> h;
    std::vector<double> error;
    std::vector<double> pair_order;  // between consecutive h (size-1 shorter)
    double ls_order = 0;
    std::string csv_path;
};

struct VarianceResult {
    std::vector<double> h;
    std::vector<double> value;          // V(h) = ||Θ_h*f||^2_{Ḣ^{-s}_h(Ω_h)}
    std::vector<double> cauchy;         // |V(h_i) - V(h_{i-1})|, first entry 0
    std::vector<double> empirical_var;  // MC variance of (φ, Θ_h*f)_{L²_h}
    std::vector<double> empirical_se;
    double richardson = 0;  // reference value from the finest pair
    std::string csv_path;
};

struct MaxStatResult {
    std::vector<double> h;
    std::vector<std::vector<double>> maxima;  // sorted, per h
    std::vector<double> ks_prev;              // vs previous h, first entry 0
    std::string csv_path;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;
    double weyl_exponent = 0;
    double weyl_target = 0;  // 2s/d
    std::string csv_path;
};

struct SampleResult {
    std::vector<std::string> field_paths;
    std::vector<std::string> heightmap_paths;
    std::vector<std::string> covariance_paths;  // small grids only
};

struct SelfTestCheck {
    std::string name;
    double measured = 0;
    double threshold = 0;
    bool pass = false;
};

struct SelfTestResult {
    std::vector<SelfTestCheck> checks;
    bool all_pass = false;
};

ConvergeResult run_converge(const ExperimentConfig& cfg);
VarianceResult run_variance(const ExperimentConfig& cfg);
MaxStatResult run_maxstat(const ExperimentConfig& cfg);
SpectrumResult run_spectrum(const ExperimentConfig& cfg);
SampleResult run_sample(const ExperimentConfig& cfg);
SelfTestResult run_selftest(const ExperimentConfig& cfg);

/// Manufactured compactly supported window (tensor cos^power profile) scaled
/// to the center/halfwidth box; used for the shipped u and test f.
double window_bump(std::span<const double> x, std::span<const double> center,
                   std::span<const double> halfwidth, int power = 10);

/// Fine reference box for a domain: spacing = h_min/ratio, period >=
/// pad × domain diameter, centered on the domain's bounding box.
BoxPtr make_fine_box(const LatticeDomain& coarse_hint, double h_min, double ratio, double pad);

/// The shipped manufactured solution sampled on a box (window_bump with
/// center/halfwidth from the domain bounding box, halfwidth factor 0.4).
BoxFunction manufactured_u(const LatticeDomain& dom, BoxPtr box);

}  // namespace fgf
