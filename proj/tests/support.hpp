// Shared helpers for the test binaries.
#pragma once

#include <optional>
#include <utility>

#include <Eigen/Core>

#include "sraif/error.hpp"
#include "sraif/rng.hpp"

namespace test_support {

/// Runs f and returns the ErrorCode it throws, or nullopt if it returns.
template <typename F>
std::optional<sraif::ErrorCode> thrown_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const sraif::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Random column-stochastic matrix: exponential draws, columns normalized.
inline Eigen::MatrixXd random_column_stochastic(int n, sraif::Rng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int c = 0; c < n; ++c) {
    double sum = 0.0;
    for (int r = 0; r < n; ++r) {
      m(r, c) = -std::log(1.0 - rng.next_double());
      sum += m(r, c);
    }
    m.col(c) /= sum;
  }
  return m;
}

}  // namespace test_support
