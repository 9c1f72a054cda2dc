#include "sraif/duality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sraif/model.hpp"
#include "sraif/planner.hpp"
#include "sraif/successor.hpp"

namespace sraif {
namespace {

constexpr double kRowSumTol = 1e-10;
constexpr double kJensenTol = 1e-12;

/// Shared backward kernel: m_T = weight .* terminal, then
/// m_t = weight .* (gamma * P * m_{t+1}). Slice index 0 holds m_1.
/// desirability_recursion and filtering_recursion are both thin wrappers, so
/// their advertised bit-for-bit agreement is a property of this one function.
std::vector<Eigen::VectorXd> backward_messages(const Eigen::VectorXd& weight,
                                               const Eigen::MatrixXd& P,
                                               const Eigen::VectorXd& terminal, int horizon,
                                               double gamma, WarningLog* warnings,
                                               const std::string& what) {
  if (horizon < 1) {
    throw Error(ErrorCode::InvalidArgument, what + ": horizon must be >= 1");
  }
  if (P.rows() == 0 || P.rows() != P.cols()) {
    throw Error(ErrorCode::ShapeMismatch, what + ": P must be square and nonempty");
  }
  if (weight.size() != P.rows() || terminal.size() != P.rows()) {
    throw Error(ErrorCode::ShapeMismatch, what + ": vector length mismatch");
  }
  if (!weight.allFinite() || (weight.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, what + ": weights must be finite and nonnegative");
  }
  std::vector<Eigen::VectorXd> slices(static_cast<std::size_t>(horizon));
  Eigen::VectorXd m = weight.cwiseProduct(terminal);
  slices[static_cast<std::size_t>(horizon) - 1] = m;
  for (int t = horizon - 1; t >= 1; --t) {
    m = weight.cwiseProduct((gamma * (P * m)).eval());
    slices[static_cast<std::size_t>(t) - 1] = m;
  }
  if (warnings != nullptr) {
    for (int t = 0; t < horizon; ++t) {
      if ((slices[static_cast<std::size_t>(t)].array() < kUnderflowFloor).any()) {
        warnings->add(what + ": message entries underflowed below 1e-300 at slice " +
                      std::to_string(t + 1));
        break;
      }
    }
  }
  return slices;
}

}  // namespace

void validate_linear_mdp(const LinearMdp& mdp) {
  if (mdp.P.rows() == 0 || mdp.P.rows() != mdp.P.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "LinearMdp: P must be square and nonempty");
  }
  if (!mdp.P.allFinite()) {
    throw Error(ErrorCode::NonFinite, "LinearMdp: P contains NaN or infinity");
  }
  if ((mdp.P.array() < 0.0).any()) {
    throw Error(ErrorCode::NotStochastic, "LinearMdp: P has negative entries");
  }
  for (Eigen::Index r = 0; r < mdp.P.rows(); ++r) {
    const double sum = mdp.P.row(r).sum();
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw Error(ErrorCode::NotStochastic,
                  "LinearMdp: P row " + std::to_string(r) + " sums to " + std::to_string(sum));
    }
  }
  if (mdp.state_cost.size() != mdp.P.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "LinearMdp: state_cost length mismatch");
  }
  if (!mdp.state_cost.allFinite()) {
    throw Error(ErrorCode::NonFinite, "LinearMdp: state_cost contains NaN or infinity");
  }
  if ((mdp.state_cost.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "LinearMdp: state_cost must be nonnegative");
  }
  if (mdp.horizon < 1) {
    throw Error(ErrorCode::InvalidArgument, "LinearMdp: horizon must be >= 1");
  }
}

std::vector<Eigen::VectorXd> desirability_recursion(const LinearMdp& mdp, double gamma,
                                                    WarningLog* warnings) {
  validate_linear_mdp(mdp);
  if (!std::isfinite(gamma) || gamma <= 0.0 || gamma > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "desirability_recursion: gamma must be in (0, 1]");
  }
  const Eigen::VectorXd weight = (-mdp.state_cost.array()).exp();
  const Eigen::VectorXd terminal = Eigen::VectorXd::Ones(mdp.P.rows());
  return backward_messages(weight, mdp.P, terminal, mdp.horizon, gamma, warnings,
                           "desirability_recursion");
}

std::vector<Eigen::VectorXd> filtering_recursion(const Eigen::VectorXd& likelihood,
                                                 const Eigen::MatrixXd& P,
                                                 const Eigen::VectorXd& terminal, int horizon,
                                                 WarningLog* warnings) {
  return backward_messages(likelihood, P, terminal, horizon, 1.0, warnings,
                           "filtering_recursion");
}

std::vector<JensenRecord> jensen_bound_check(const LinearMdp& mdp) {
  validate_linear_mdp(mdp);
  if (mdp.horizon < 2) {
    throw Error(ErrorCode::InvalidArgument, "jensen_bound_check: horizon must be >= 2");
  }
  const Eigen::VectorXd likelihood = (-mdp.state_cost.array()).exp();
  if ((likelihood.array() <= 0.0).any()) {
    throw Error(ErrorCode::NonPositiveLikelihood,
                "jensen_bound_check: exp(-cost) underflowed to zero");
  }
  const int n = static_cast<int>(mdp.P.rows());
  const std::vector<Eigen::VectorXd> z = desirability_recursion(mdp, 1.0);

  // Expectation side via the planner's rollout with reward = log-likelihood:
  // the bound is the same linear Bellman backup the exhaustive planner runs,
  // so we evaluate it with that code rather than a private reimplementation.
  GenerativeModel chain;
  chain.num_states = n;
  chain.num_obs = n;
  chain.num_actions = 1;
  chain.A = Eigen::MatrixXd::Identity(n, n);
  chain.B = {mdp.P.transpose()};  // row-stochastic -> column-conditioning storage
  chain.C = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd log_likelihood = -mdp.state_cost;
  const Policy hold(static_cast<std::size_t>(mdp.horizon) - 1, 0);

  std::vector<JensenRecord> records(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    JensenRecord& rec = records[static_cast<std::size_t>(s)];
    rec.log_message = std::log(z[0][s]);
    rec.expected_sum =
        log_likelihood[s] - policy_efe(chain, Belief::delta(n, s), log_likelihood, hold, 1.0);
    rec.holds = rec.expected_sum <= rec.log_message + kJensenTol;
  }
  return records;
}

double recursion_agreement_error(const LinearMdp& mdp) {
  validate_linear_mdp(mdp);
  const std::vector<Eigen::VectorXd> z = desirability_recursion(mdp, 1.0);
  const Eigen::VectorXd likelihood = (-mdp.state_cost.array()).exp();
  const std::vector<Eigen::VectorXd> messages = filtering_recursion(
      likelihood, mdp.P, Eigen::VectorXd::Ones(mdp.P.rows()), mdp.horizon);
  double worst = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    worst = std::max(worst, (z[t] - messages[t]).cwiseAbs().maxCoeff());
  }
  return worst;
}

double occupancy_interpretation_check(const Eigen::MatrixXd& b_tilde, double gamma, int T) {
  if (T < 0) {
    throw Error(ErrorCode::InvalidArgument, "occupancy_interpretation_check: T must be >= 0");
  }
  const Eigen::MatrixXd truncated = successor_matrix_truncated(b_tilde, gamma, T);
  const int n = static_cast<int>(b_tilde.rows());
  double worst = 0.0;
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd occupancy = Eigen::VectorXd::Unit(n, s);
    Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(n);
    double discount = 1.0;
    for (int k = 0; k <= T; ++k) {
      row_sum += discount * occupancy;
      occupancy = b_tilde * occupancy;  // forward propagation, column convention
      discount *= gamma;
    }
    worst = std::max(worst, (row_sum - truncated.row(s).transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

DualitySweepResult run_duality_sweep(int max_states, int max_horizon, int trials,
                                     std::uint64_t seed) {
  if (trials < 1) {
    throw Error(ErrorCode::InvalidArgument, "run_duality_sweep: trials must be >= 1");
  }
  constexpr double kAgreementTol = 1e-12;
  constexpr double kOccupancyTol = 1e-10;
  DualitySweepResult result;
  result.trials = trials;
  for (int i = 0; i < trials; ++i) {
    Rng rng(child_seed(seed, static_cast<std::uint64_t>(i)));
    const bool deterministic = i % 4 == 3;
    const LinearMdp mdp = sample_linear_mdp(max_states, max_horizon, deterministic, rng);
    if (deterministic) {
      ++result.deterministic_trials;
    }

    const double agreement = recursion_agreement_error(mdp);
    result.max_agreement_error = std::max(result.max_agreement_error, agreement);
    if (agreement > kAgreementTol) {
      ++result.agreement_failures;
    }

    bool jensen_ok = true;
    bool equality_ok = true;
    for (const JensenRecord& rec : jensen_bound_check(mdp)) {
      result.max_jensen_violation =
          std::max(result.max_jensen_violation, rec.expected_sum - rec.log_message);
      jensen_ok = jensen_ok && rec.holds;
      if (deterministic) {
        const double gap = std::abs(rec.log_message - rec.expected_sum);
        result.max_equality_gap = std::max(result.max_equality_gap, gap);
        equality_ok = equality_ok && gap <= kJensenTol;
      }
    }
    if (!jensen_ok) {
      ++result.jensen_failures;
    }
    if (deterministic && !equality_ok) {
      ++result.equality_failures;
    }

    // The sampled dynamics double as the occupancy-check subject: P rows are
    // distributions, so P^T is column-stochastic.
    const double occupancy = occupancy_interpretation_check(mdp.P.transpose(), 0.9, 30);
    result.max_occupancy_error = std::max(result.max_occupancy_error, occupancy);
    if (occupancy > kOccupancyTol) {
      ++result.occupancy_failures;
    }
  }
  return result;
}

LinearMdp sample_linear_mdp(int max_states, int max_horizon, bool deterministic, Rng& rng) {
  if (max_states < 1 || max_horizon < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "sample_linear_mdp: need max_states >= 1, max_horizon >= 2");
  }
  LinearMdp mdp;
  const int n = 1 + rng.next_int(max_states);
  mdp.horizon = 2 + rng.next_int(max_horizon - 1);
  mdp.P.resize(n, n);
  for (int r = 0; r < n; ++r) {
    if (deterministic) {
      mdp.P.row(r).setZero();
      mdp.P(r, rng.next_int(n)) = 1.0;
    } else {
      for (int c = 0; c < n; ++c) {
        // Exponential draws; normalized rows are flat-Dirichlet distributed.
        mdp.P(r, c) = -std::log(1.0 - rng.next_double());
      }
      mdp.P.row(r) /= mdp.P.row(r).sum();
    }
  }
  mdp.state_cost.resize(n);
  for (int s = 0; s < n; ++s) {
    mdp.state_cost[s] = 2.0 * rng.next_double();
  }
  return mdp;
}

}  // namespace sraif
