#include "sraif/model.hpp"

#include <cmath>
#include <string>

namespace sraif {
namespace {

void check_finite(const Eigen::MatrixXd& m, const std::string& what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, what + " contains NaN or infinity");
  }
}

void check_column_stochastic(const Eigen::MatrixXd& m, const std::string& what) {
  check_finite(m, what);
  if ((m.array() < 0.0).any() || (m.array() > 1.0 + kStochasticTol).any()) {
    throw Error(ErrorCode::NotStochastic, what + " has entries outside [0, 1]");
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double sum = m.col(c).sum();
    if (std::abs(sum - 1.0) > kStochasticTol) {
      throw Error(ErrorCode::NotStochastic, what + " column " + std::to_string(c) +
                                                " sums to " + std::to_string(sum));
    }
  }
}

}  // namespace

Belief Belief::uniform(int num_states) {
  if (num_states <= 0) {
    throw Error(ErrorCode::InvalidArgument, "Belief::uniform: num_states must be positive");
  }
  Belief b;
  b.probs = Eigen::VectorXd::Constant(num_states, 1.0 / num_states);
  return b;
}

Belief Belief::delta(int num_states, int state) {
  if (num_states <= 0) {
    throw Error(ErrorCode::InvalidArgument, "Belief::delta: num_states must be positive");
  }
  if (state < 0 || state >= num_states) {
    throw Error(ErrorCode::IndexOutOfRange, "Belief::delta: state " + std::to_string(state) +
                                                " out of range for " + std::to_string(num_states) +
                                                " states");
  }
  Belief b;
  b.probs = Eigen::VectorXd::Zero(num_states);
  b.probs[state] = 1.0;
  return b;
}

void Belief::validate() const {
  if (probs.size() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "Belief: empty probability vector");
  }
  if (!probs.allFinite()) {
    throw Error(ErrorCode::NonFinite, "Belief: probabilities contain NaN or infinity");
  }
  if ((probs.array() < 0.0).any()) {
    throw Error(ErrorCode::NotStochastic, "Belief: negative probability");
  }
  if (std::abs(probs.sum() - 1.0) > 1e-10) {
    throw Error(ErrorCode::NotStochastic,
                "Belief: probabilities sum to " + std::to_string(probs.sum()));
  }
}

void validate_model(const GenerativeModel& model) {
  if (model.num_states <= 0 || model.num_obs <= 0 || model.num_actions <= 0) {
    throw Error(ErrorCode::ShapeMismatch, "model: dimensions must be positive");
  }
  if (model.A.rows() != model.num_obs || model.A.cols() != model.num_states) {
    throw Error(ErrorCode::ShapeMismatch,
                "model: A is " + std::to_string(model.A.rows()) + "x" +
                    std::to_string(model.A.cols()) + ", expected " +
                    std::to_string(model.num_obs) + "x" + std::to_string(model.num_states));
  }
  if (static_cast<int>(model.B.size()) != model.num_actions) {
    throw Error(ErrorCode::ShapeMismatch,
                "model: B has " + std::to_string(model.B.size()) + " slices, expected " +
                    std::to_string(model.num_actions));
  }
  for (int u = 0; u < model.num_actions; ++u) {
    if (model.B[u].rows() != model.num_states || model.B[u].cols() != model.num_states) {
      throw Error(ErrorCode::ShapeMismatch,
                  "model: B[" + std::to_string(u) + "] is " + std::to_string(model.B[u].rows()) +
                      "x" + std::to_string(model.B[u].cols()) + ", expected " +
                      std::to_string(model.num_states) + "x" + std::to_string(model.num_states));
    }
  }
  if (model.C.size() != model.num_obs) {
    throw Error(ErrorCode::ShapeMismatch, "model: C has length " + std::to_string(model.C.size()) +
                                              ", expected " + std::to_string(model.num_obs));
  }
  check_column_stochastic(model.A, "model: A");
  for (int u = 0; u < model.num_actions; ++u) {
    check_column_stochastic(model.B[u], "model: B[" + std::to_string(u) + "]");
  }
  if (!model.C.allFinite()) {
    throw Error(ErrorCode::NonFinite, "model: C contains NaN or infinity");
  }
}

Eigen::VectorXd softmax_cost(const Eigen::VectorXd& costs, double beta) {
  if (costs.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "softmax_cost: empty cost vector");
  }
  if (!costs.allFinite() || !std::isfinite(beta)) {
    throw Error(ErrorCode::NonFinite, "softmax_cost: costs and beta must be finite");
  }
  if (beta <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "softmax_cost: beta must be positive");
  }
  // p_i ~ exp(-beta * c_i); subtract the min cost so the largest exponent is 0.
  const Eigen::ArrayXd shifted = -beta * (costs.array() - costs.minCoeff());
  const Eigen::ArrayXd weights = shifted.exp();
  return (weights / weights.sum()).matrix();
}

Belief predict_next(const GenerativeModel& model, const Belief& belief, int action) {
  if (action < 0 || action >= model.num_actions) {
    throw Error(ErrorCode::IndexOutOfRange,
                "predict_next: action " + std::to_string(action) + " out of range");
  }
  if (belief.probs.size() != model.num_states) {
    throw Error(ErrorCode::ShapeMismatch, "predict_next: belief length mismatch");
  }
  Belief next;
  next.probs = model.B[static_cast<std::size_t>(action)] * belief.probs;
  return next;
}

Belief bayes_update(const GenerativeModel& model, const Belief& prior, int obs,
                    WarningLog* warnings) {
  if (obs < 0 || obs >= model.num_obs) {
    throw Error(ErrorCode::IndexOutOfRange,
                "bayes_update: observation " + std::to_string(obs) + " out of range");
  }
  if (prior.probs.size() != model.num_states) {
    throw Error(ErrorCode::ShapeMismatch, "bayes_update: belief length mismatch");
  }
  Eigen::VectorXd unnormalized =
      model.A.row(obs).transpose().cwiseProduct(prior.probs);
  if (!unnormalized.allFinite()) {
    throw Error(ErrorCode::NonFinite, "bayes_update: non-finite posterior mass");
  }
  const double mass = unnormalized.sum();
  if (mass < kUnderflowFloor) {
    // The observation is (numerically) impossible under the predicted prior.
    // Keep the prior rather than dividing by ~zero mid-episode.
    if (warnings != nullptr) {
      warnings->add("bayes_update: observation " + std::to_string(obs) +
                    " has vanishing likelihood under the prior; kept the predicted prior");
    }
    return prior;
  }
  Belief posterior;
  posterior.probs = unnormalized / mass;
  return posterior;
}

Belief infer_state(const GenerativeModel& model, const Belief& prev_belief, int action, int obs,
                   WarningLog* warnings) {
  // Exact filtered posterior; for a single categorical factor this is the
  // free-energy optimum, so nothing iterative is needed.
  return bayes_update(model, predict_next(model, prev_belief, action), obs, warnings);
}

}  // namespace sraif
