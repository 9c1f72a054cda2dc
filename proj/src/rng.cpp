#include "sraif/rng.hpp"

#include <cmath>

#include "sraif/error.hpp"

namespace sraif {

int Rng::sample_categorical(const Eigen::VectorXd& weights) {
  if (weights.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "sample_categorical: empty weight vector");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "sample_categorical: weights must be finite and nonnegative");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "sample_categorical: weights sum to zero");
  }
  const double target = next_double() * total;
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (target < cumulative) {
      return static_cast<int>(i);
    }
  }
  // Round-off can leave target == total; return the last positive-weight index.
  for (Eigen::Index i = weights.size() - 1; i >= 0; --i) {
    if (weights[i] > 0.0) {
      return static_cast<int>(i);
    }
  }
  return static_cast<int>(weights.size() - 1);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

const char* child_seed_formula() {
  return "child_seed(m, i) = splitmix64(m + (i + 1) * 0x9e3779b97f4a7c15)";
}

}  // namespace sraif
