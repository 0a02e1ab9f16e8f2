#pragma once

#include <cstdint>
#include <random>

namespace fgf {

/// SplitMix64 step; used to derive statistically independent per-replica
/// seeds from (seed, replica).
std::uint64_t splitmix64(std::uint64_t& state);

/// Inverse of the standard normal CDF (Wichura's AS241, double precision).
double inverse_normal_cdf(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Deterministic per-replica stream. Engine: mt19937_64 keyed by a SplitMix64
/// hash of (seed, replica); normals by the inversion method applied to
/// 53-bit uniforms, so results are byte-identical across runs, platforms with
/// IEEE doubles, and thread counts.
class RngSpec {
public:
    RngSpec(std::uint64_t seed, std::uint64_t replica);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t replica() const { return replica_; }
    /// Uniform on (0,1), 53-bit resolution, endpoints excluded.
    double uniform();
    /// Standard normal variate via inversion.
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t replica_;
    std::mt19937_64 engine_;
};

}  // namespace fgf
