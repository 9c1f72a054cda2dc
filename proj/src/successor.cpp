#include "sraif/successor.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

namespace sraif {
namespace {

/// Max-norm residual allowed on the linear solve before the matrix is
/// declared numerically singular.
constexpr double kResidualTol = 1e-8;

void check_square_stochastic(const Eigen::MatrixXd& b_tilde) {
  if (b_tilde.rows() == 0 || b_tilde.rows() != b_tilde.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "b_tilde must be square and nonempty");
  }
  if (!b_tilde.allFinite()) {
    throw Error(ErrorCode::NonFinite, "b_tilde contains NaN or infinity");
  }
  if ((b_tilde.array() < 0.0).any()) {
    throw Error(ErrorCode::NotStochastic, "b_tilde has negative entries");
  }
  for (Eigen::Index c = 0; c < b_tilde.cols(); ++c) {
    const double sum = b_tilde.col(c).sum();
    if (std::abs(sum - 1.0) > kStochasticTol) {
      throw Error(ErrorCode::NotStochastic, "b_tilde column " + std::to_string(c) +
                                                " sums to " + std::to_string(sum));
    }
  }
}

}  // namespace

DefaultPolicy DefaultPolicy::uniform(int num_actions) {
  if (num_actions <= 0) {
    throw Error(ErrorCode::InvalidArgument, "DefaultPolicy::uniform: num_actions must be positive");
  }
  DefaultPolicy policy;
  policy.weights = Eigen::VectorXd::Constant(num_actions, 1.0 / num_actions);
  return policy;
}

void DefaultPolicy::validate() const {
  if (weights.size() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "DefaultPolicy: empty weight vector");
  }
  if (!weights.allFinite()) {
    throw Error(ErrorCode::NonFinite, "DefaultPolicy: weights contain NaN or infinity");
  }
  if ((weights.array() < 0.0).any()) {
    throw Error(ErrorCode::NotStochastic, "DefaultPolicy: negative weight");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-10) {
    throw Error(ErrorCode::NotStochastic,
                "DefaultPolicy: weights sum to " + std::to_string(weights.sum()));
  }
}

Eigen::MatrixXd default_transition(const GenerativeModel& model, const DefaultPolicy& policy) {
  policy.validate();
  if (policy.weights.size() != model.num_actions) {
    throw Error(ErrorCode::ShapeMismatch, "default_transition: policy has " +
                                              std::to_string(policy.weights.size()) +
                                              " weights for " +
                                              std::to_string(model.num_actions) + " actions");
  }
  Eigen::MatrixXd b_tilde = Eigen::MatrixXd::Zero(model.num_states, model.num_states);
  for (int u = 0; u < model.num_actions; ++u) {
    b_tilde.noalias() += policy.weights[u] * model.B[static_cast<std::size_t>(u)];
  }
  return b_tilde;
}

SuccessorMatrix successor_matrix(const Eigen::MatrixXd& b_tilde, double gamma,
                                 WarningLog* warnings) {
  check_square_stochastic(b_tilde);
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "successor_matrix: gamma must be positive and finite");
  }
  if (gamma >= 1.0 && warnings != nullptr) {
    warnings->add("successor_matrix: gamma = " + std::to_string(gamma) +
                  " >= 1; the geometric-series reading does not apply and the "
                  "nonnegativity/row-sum invariants are suspended");
  }
  const Eigen::Index n = b_tilde.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd system = identity - gamma * b_tilde.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::MatrixXd m = lu.solve(identity);
  const bool finite = m.allFinite();
  const double residual =
      finite ? (system * m - identity).cwiseAbs().maxCoeff()
             : std::numeric_limits<double>::infinity();
  if (!finite || residual > kResidualTol) {
    throw Error(ErrorCode::NumericallySingular,
                "successor_matrix: solve residual " + std::to_string(residual) +
                    " exceeds " + std::to_string(kResidualTol) +
                    "; 1/gamma lies in or near the spectrum of b_tilde (adjust gamma)");
  }
  SuccessorMatrix sr;
  sr.M = std::move(m);
  sr.gamma = gamma;
  return sr;
}

Eigen::MatrixXd successor_matrix_truncated(const Eigen::MatrixXd& b_tilde, double gamma, int K) {
  check_square_stochastic(b_tilde);
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "successor_matrix_truncated: gamma must be positive and finite");
  }
  if (gamma >= 1.0) {
    throw Error(ErrorCode::DivergentSeries,
                "successor_matrix_truncated: series diverges for gamma >= 1");
  }
  if (K < 0) {
    throw Error(ErrorCode::InvalidArgument, "successor_matrix_truncated: K must be nonnegative");
  }
  const Eigen::Index n = b_tilde.rows();
  const Eigen::MatrixXd forward = b_tilde.transpose();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd acc = term;
  for (int k = 1; k <= K; ++k) {
    term = gamma * (term * forward);
    acc += term;
  }
  return acc;
}

Eigen::VectorXd state_value(const SuccessorMatrix& sr, const Eigen::VectorXd& g) {
  if (sr.M.cols() != g.size()) {
    throw Error(ErrorCode::ShapeMismatch, "state_value: reward vector has length " +
                                              std::to_string(g.size()) + ", expected " +
                                              std::to_string(sr.M.cols()));
  }
  return sr.M * g;
}

double observation_value(const Belief& belief, const SuccessorMatrix& sr,
                         const Eigen::VectorXd& g) {
  const Eigen::VectorXd v = state_value(sr, g);
  if (belief.probs.size() != v.size()) {
    throw Error(ErrorCode::ShapeMismatch, "observation_value: belief length mismatch");
  }
  return belief.probs.dot(v);
}

Eigen::VectorXd action_values(const GenerativeModel& model, const Belief& belief,
                              const SuccessorMatrix& sr, const Eigen::VectorXd& g) {
  if (belief.probs.size() != model.num_states || sr.M.rows() != model.num_states) {
    throw Error(ErrorCode::ShapeMismatch, "action_values: dimension mismatch");
  }
  const Eigen::VectorXd v = state_value(sr, g);
  Eigen::VectorXd q(model.num_actions);
  for (int u = 0; u < model.num_actions; ++u) {
    q[u] = v.dot(model.B[static_cast<std::size_t>(u)] * belief.probs);
  }
  return q;
}

int sample_action(const Eigen::VectorXd& q_values, double beta, Rng& rng) {
  if (q_values.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "sample_action: empty value vector");
  }
  if (!q_values.allFinite() || std::isnan(beta)) {
    throw Error(ErrorCode::NonFinite, "sample_action: values and beta must not be NaN/inf");
  }
  if (std::isinf(beta) && beta > 0.0) {
    // Greedy sentinel: argmax with lowest-index tie-breaking.
    int best = 0;
    for (Eigen::Index i = 1; i < q_values.size(); ++i) {
      if (q_values[i] > q_values[best]) {
        best = static_cast<int>(i);
      }
    }
    return best;
  }
  return rng.sample_categorical(softmax_cost(-q_values, beta));
}

}  // namespace sraif
