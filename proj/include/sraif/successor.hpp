#pragma once

#include <Eigen/Core>

#include "sraif/efe.hpp"
#include "sraif/model.hpp"
#include "sraif/rng.hpp"

namespace sraif {

/// Fixed action distribution under which the successor matrix is computed.
struct DefaultPolicy {
  Eigen::VectorXd weights;  // length num_actions, sums to 1

  static DefaultPolicy uniform(int num_actions);
  void validate() const;
};

/// Policy-averaged transition matrix: b_tilde = sum_u weights[u] * B[u].
/// Column-stochastic like its inputs.
Eigen::MatrixXd default_transition(const GenerativeModel& model, const DefaultPolicy& policy);

/// Discounted expected state occupancies. M(s, s') = sum_k gamma^k
/// p(x_k = s' | x_0 = s) under the default policy. Rows index start states;
/// b_tilde stores p(x'|x) column-wise, so the solve runs on its transpose.
struct SuccessorMatrix {
  Eigen::MatrixXd M;
  double gamma = 0.0;
};

/// Solves (I - gamma * b_tilde^T) M = I with a partial-pivot LU
/// factorization and enforces a max-norm residual of 1e-8 on the result.
/// Throws NumericallySingular when the factorization or the residual check
/// fails (1/gamma lies in or near the spectrum of b_tilde; adjust gamma).
/// gamma >= 1 is accepted as a configuration heuristic: the geometric-series
/// reading and the nonnegativity/row-sum guarantees no longer apply, so a
/// warning is recorded alongside the result.
SuccessorMatrix successor_matrix(const Eigen::MatrixXd& b_tilde, double gamma,
                                 WarningLog* warnings = nullptr);

/// Partial sum sum_{k=0..K} gamma^k (b_tilde^T)^k. Test oracle for the exact
/// solve; requires gamma < 1 (throws DivergentSeries otherwise).
Eigen::MatrixXd successor_matrix_truncated(const Eigen::MatrixXd& b_tilde, double gamma, int K);

/// v = M * g: discounted expected gain from each start state under the
/// default policy.
Eigen::VectorXd state_value(const SuccessorMatrix& sr, const Eigen::VectorXd& g);

/// Expected state value under a belief: belief^T (M g).
double observation_value(const Belief& belief, const SuccessorMatrix& sr,
                         const Eigen::VectorXd& g);

/// Q[u] = (M g)^T (B[u] * belief): value of the one-step successor belief.
/// The immediate term is already inside M via its identity component.
Eigen::VectorXd action_values(const GenerativeModel& model, const Belief& belief,
                              const SuccessorMatrix& sr, const Eigen::VectorXd& g);

/// Samples u with probability proportional to exp(beta * Q[u]). Passing
/// beta = +infinity selects the argmax deterministically, breaking ties
/// toward the lowest index.
int sample_action(const Eigen::VectorXd& q_values, double beta, Rng& rng);

}  // namespace sraif
