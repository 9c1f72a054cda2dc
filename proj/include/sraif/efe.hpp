#pragma once

#include <Eigen/Core>

#include "sraif/model.hpp"

namespace sraif {

/// Runtime trade-off between reward seeking and uncertainty seeking.
/// Nonnegative weights are the normal regime; a negative epistemic weight
/// turns the uncertainty bonus into an ambiguity penalty.
struct EfeWeights {
  double utility = 1.0;
  double epistemic = 1.0;
};

/// u[s] = sum_o A(o, s) * C(o): expected log-preference at state s.
Eigen::VectorXd utility_vector(const GenerativeModel& model);

/// e[s] = Shannon entropy of likelihood column s, in nats. Zero for a
/// deterministic column, ln(num_obs) for a uniform one.
Eigen::VectorXd epistemic_vector(const GenerativeModel& model);

/// Per-state gain g = w_utility * utility + w_epistemic * entropy (higher is
/// better). Cost-convention consumers negate at softmax time. Recomputable at
/// any time without touching a successor matrix.
Eigen::VectorXd efe_reward_vector(const GenerativeModel& model, const EfeWeights& weights);

}  // namespace sraif
