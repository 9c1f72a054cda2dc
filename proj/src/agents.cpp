#include "sraif/agents.hpp"

#include <chrono>
#include <cmath>
#include <utility>

namespace sraif {
namespace {

void check_beta(double beta) {
  if (std::isnan(beta) || beta <= 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "agent beta must be positive (or +infinity for greedy)");
  }
}

}  // namespace

SrAgent::SrAgent(std::shared_ptr<const GenerativeModel> model, double gamma,
                 const EfeWeights& weights, double beta)
    : model_(std::move(model)), beta_(beta) {
  check_beta(beta);
  validate_model(*model_);
  const auto start = std::chrono::steady_clock::now();
  const Eigen::MatrixXd b_tilde =
      default_transition(*model_, DefaultPolicy::uniform(model_->num_actions));
  sr_ = successor_matrix(b_tilde, gamma, &warnings_);
  g_ = efe_reward_vector(*model_, weights);
  value_ = sr_.M * g_;
  const auto end = std::chrono::steady_clock::now();
  setup_time_ms_ = std::chrono::duration<double, std::milli>(end - start).count();
}

int SrAgent::act(const Belief& belief, Rng& rng) {
  // Same arithmetic as action_values, but against the value vector cached at
  // setup so each decision is num_actions matrix-vector products.
  Eigen::VectorXd q(model_->num_actions);
  for (int u = 0; u < model_->num_actions; ++u) {
    q[u] = value_.dot(model_->B[static_cast<std::size_t>(u)] * belief.probs);
  }
  return sample_action(q, beta_, rng);
}

PlannerAgent::PlannerAgent(std::shared_ptr<const GenerativeModel> model,
                           const PlannerConfig& config, const EfeWeights& weights)
    : model_(std::move(model)), config_(config) {
  validate_model(*model_);
  g_ = efe_reward_vector(*model_, weights);
}

int PlannerAgent::act(const Belief& belief, Rng& rng) {
  return plan_action(*model_, belief, g_, config_, rng, &last_stats_);
}

}  // namespace sraif
