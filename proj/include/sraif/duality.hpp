#pragma once

#include <vector>

#include <Eigen/Core>

#include "sraif/error.hpp"
#include "sraif/rng.hpp"

namespace sraif {

/// Control problem in linearly-solvable form. Unlike the generative model,
/// dynamics here are row-stochastic (P(s, s') = p(x' = s' | x = s)) to match
/// the message-passing recursions, and costs are per-state nats.
struct LinearMdp {
  Eigen::MatrixXd P;           // num_states x num_states, row-stochastic
  Eigen::VectorXd state_cost;  // length num_states, finite and >= 0
  int horizon = 0;             // T >= 1 backward steps
};

/// Throws ShapeMismatch / NotStochastic / NonFinite / InvalidArgument when
/// an LinearMdp invariant is violated.
void validate_linear_mdp(const LinearMdp& mdp);

/// Desirability backup run backwards from z_T = exp(-cost):
///   z_t = exp(-cost) .* (gamma * P * z_{t+1})
/// Returns the T slices z_1, ..., z_T (index 0 holds z_1). Each z_t(s) is
/// the exact partial expectation E[exp(-sum of remaining costs) | x_t = s]
/// when gamma = 1. Entries below 1e-300 record an underflow warning.
std::vector<Eigen::VectorXd> desirability_recursion(const LinearMdp& mdp, double gamma,
                                                    WarningLog* warnings = nullptr);

/// Backward filtering pass for the HMM whose per-step evidence likelihood is
/// `likelihood`: m_T = likelihood .* terminal, m_t = likelihood .* (P * m_{t+1}).
/// Dispatches to the same kernel as desirability_recursion, so substituting
/// likelihood = exp(-cost), terminal = ones reproduces it bit-for-bit.
std::vector<Eigen::VectorXd> filtering_recursion(const Eigen::VectorXd& likelihood,
                                                 const Eigen::MatrixXd& P,
                                                 const Eigen::VectorXd& terminal, int horizon,
                                                 WarningLog* warnings = nullptr);

/// Jensen comparison at one state, undiscounted:
///   log_message  = log z_1(s), the exact log partial expectation;
///   expected_sum = E[-sum of costs | x_1 = s], the bound obtained by pushing
///                  the expectation outside the log at every backup.
/// Concavity of log gives expected_sum <= log_message, with equality exactly
/// when the path distribution from s is deterministic. The expectation side
/// is evaluated by the planner's policy rollout with reward = -cost, making
/// the shared recursive structure an executable fact rather than a comment.
struct JensenRecord {
  double log_message = 0.0;
  double expected_sum = 0.0;
  bool holds = false;  // expected_sum <= log_message + 1e-12
};

/// One record per state. Throws NonPositiveLikelihood if any exp(-cost)
/// underflows to zero (log of the message would be meaningless).
std::vector<JensenRecord> jensen_bound_check(const LinearMdp& mdp);

/// Max over states and time slices of |desirability - filtering| under the
/// substitution likelihood = exp(-cost), gamma = 1. Zero by the shared-kernel
/// contract; exposed so reports can print the measured value.
double recursion_agreement_error(const LinearMdp& mdp);

/// For each start state, propagates the one-hot distribution k = 0..T steps
/// through the forward operator of a column-stochastic b_tilde, accumulates
/// sum_k gamma^k p(x_k | x_0 = s), and returns the max-norm discrepancy
/// against the matching rows of successor_matrix_truncated. Contract: the
/// discrepancy stays below 1e-10.
double occupancy_interpretation_check(const Eigen::MatrixXd& b_tilde, double gamma, int T);

/// Random test instance for sweeps: S uniform in {1..max_states}, T uniform
/// in {2..max_horizon}, costs uniform in [0, 2], rows of P either normalized
/// positive draws or one-hot when `deterministic` is set.
LinearMdp sample_linear_mdp(int max_states, int max_horizon, bool deterministic, Rng& rng);

/// Aggregate outcome of a randomized duality sweep.
struct DualitySweepResult {
  int trials = 0;
  int deterministic_trials = 0;
  int agreement_failures = 0;  // |desirability - filtering| > 1e-12
  int jensen_failures = 0;     // bound violated at some state
  int equality_failures = 0;   // deterministic instance without tight bound
  int occupancy_failures = 0;  // occupancy discrepancy > 1e-10
  double max_agreement_error = 0.0;
  double max_jensen_violation = 0.0;  // max over states of expected_sum - log_message
  double max_equality_gap = 0.0;      // on deterministic instances only
  double max_occupancy_error = 0.0;

  bool passed() const {
    return agreement_failures == 0 && jensen_failures == 0 && equality_failures == 0 &&
           occupancy_failures == 0;
  }
};

/// Runs `trials` sampled instances (every fourth one deterministic), checks
/// desirability/filtering agreement, the Jensen bound (with tightness on the
/// deterministic instances), and the occupancy interpretation of the sampled
/// dynamics at gamma = 0.9, T = 30. Trial i draws from child_seed(seed, i).
DualitySweepResult run_duality_sweep(int max_states, int max_horizon, int trials,
                                     std::uint64_t seed);

}  // namespace sraif
