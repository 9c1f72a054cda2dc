#pragma once

#include <vector>

#include <Eigen/Core>

#include "sraif/error.hpp"
#include "sraif/rng.hpp"

namespace sraif {

/// Probabilities below this are clamped before logs are taken.
inline constexpr double kLogFloor = 1e-16;

/// Unnormalized posterior mass below this triggers the predicted-prior
/// fallback in belief updates instead of a division by ~zero.
inline constexpr double kUnderflowFloor = 1e-300;

/// Column-sum deviation above this is reported as NotStochastic.
inline constexpr double kStochasticTol = 1e-8;

/// Action precision used when none is configured.
inline constexpr double kDefaultBeta = 8.0;

/// Discrete POMDP generative model. Conditioning variables index columns:
/// A(o, s) = p(o | x = s) and B[u](s', s) = p(x' = s' | x = s, u).
/// C holds log-preferences over observations in nats, unnormalized.
struct GenerativeModel {
  int num_states = 0;
  int num_obs = 0;
  int num_actions = 0;
  Eigen::MatrixXd A;               // num_obs x num_states, column-stochastic
  std::vector<Eigen::MatrixXd> B;  // num_actions slices, each S x S column-stochastic
  Eigen::VectorXd C;               // length num_obs
};

/// Categorical distribution over hidden states.
struct Belief {
  Eigen::VectorXd probs;

  static Belief uniform(int num_states);
  static Belief delta(int num_states, int state);

  /// Throws unless entries are nonnegative and sum to 1 within 1e-10.
  void validate() const;
};

/// Throws ShapeMismatch / NotStochastic / NonFinite if any model invariant
/// is violated; returns normally otherwise.
void validate_model(const GenerativeModel& model);

/// p_i proportional to exp(-beta * costs_i), computed with max-subtraction.
/// Lower cost means higher probability.
Eigen::VectorXd softmax_cost(const Eigen::VectorXd& costs, double beta);

/// One-step belief propagation under action u: B[u] * belief.
Belief predict_next(const GenerativeModel& model, const Belief& belief, int action);

/// Conditions a prior belief on an observation: posterior ~ A(obs, .) * prior.
/// If the unnormalized mass underflows, returns the prior unchanged and
/// records a warning.
Belief bayes_update(const GenerativeModel& model, const Belief& prior, int obs,
                    WarningLog* warnings = nullptr);

/// Exact filtered posterior after taking `action` and observing `obs`:
/// bayes_update(predict_next(belief, action), obs). For a single categorical
/// factor this is the free-energy optimum, so no iterative descent is run.
Belief infer_state(const GenerativeModel& model, const Belief& prev_belief,
                   int action, int obs, WarningLog* warnings = nullptr);

}  // namespace sraif
