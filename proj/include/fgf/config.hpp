#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgf {

/// Flat key = value text config; '#' starts a comment. Later assignments and
/// command-line overrides win.
class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }
    /// FNV-1a hash of the sorted semantic entries; `out` and `threads` are
    /// excluded so outputs stay byte-identical across thread counts.
    std::string semantic_hash() const;

private:
    std::map<std::string, std::string> kv_;
};

enum class ExperimentKind { Converge, Variance, Sample, MaxStat, Spectrum, SelfTest };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind k);

/// Validated experiment parameters. Construction enforces the hypotheses the
/// experiments rely on (decreasing h list, k > s + d/2 when interpolating,
/// d < 2s for the maximum study).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SelfTest;
    std::string domain_spec = "box(0,1)";
    double s = 1.0;
    std::vector<double> h_list;
    std::uint64_t seed = 1;
    int replicas = 1000;
    int theta_order = 4;      // k for the B-spline mollifier Θ
    int quadrature_q = 0;     // kernel refinement, 0 = auto
    int oversampling = 8;     // Q for norm quadrature
    double pad_factor = 4.0;
    int threads = 1;
    std::string out_dir = ".";
    std::vector<double> s_list;   // run_sample: one field per s
    int heightmap = 0;            // run_sample: also write PGM rasters
    int dump_vectors = 0;         // run_spectrum: also write eigenvectors
    std::string rhs_kind = "bump";  // run_variance: "bump", "const" (f ≡ 1) or "zero"

    static ExperimentConfig from(const Config& cfg);
    Config to_config() const;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fgf
