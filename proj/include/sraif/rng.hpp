#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace sraif {

/// Deterministic 64-bit random stream. The engine is a standard mt19937_64
/// (bit-exact across platforms); the derived doubles and categorical draws
/// are computed from raw engine output so results do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Requires n > 0.
  int next_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  /// Draws an index from an (unnormalized is fine) nonnegative weight vector.
  int sample_categorical(const Eigen::VectorXd& weights);

 private:
  std::mt19937_64 engine_;
};

/// Mixes (master seed, stream index) into an independent child seed:
///   child_seed(m, i) = splitmix64(m + (i + 1) * 0x9e3779b97f4a7c15)
/// where splitmix64 is the standard finalizer. Reports that record seeds
/// quote this formula so runs can be reproduced externally.
std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index);

/// The formula above as a string, for embedding in run reports.
const char* child_seed_formula();

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sraif
