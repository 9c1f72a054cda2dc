#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sraif/efe.hpp"
#include "sraif/model.hpp"
#include "sraif/rng.hpp"

namespace sraif {

/// Open-loop action sequence evaluated by the exhaustive planner.
using Policy = std::vector<int>;

struct PlannerConfig {
  int horizon = 7;
  double beta = kDefaultBeta;  // +infinity means greedy argmin cost
  double gamma = 0.99;         // per-step discount on expected cost
  std::int64_t policy_cap = 10'000'000;
};

/// Lexicographic enumerator over all num_actions^horizon policies.
/// Throws ExplosionCap from the constructor when the count exceeds the cap.
class PolicyEnumerator {
 public:
  PolicyEnumerator(int num_actions, int horizon, std::int64_t policy_cap);

  std::int64_t count() const { return count_; }
  /// Fills `policy` with the next sequence in lexicographic order.
  /// Returns false once exhausted.
  bool next(Policy& policy);
  void reset();

 private:
  int num_actions_;
  int horizon_;
  std::int64_t count_ = 0;
  Policy current_;
  bool started_ = false;
  bool done_ = false;
};

/// Expected discounted cost of one open-loop policy from `belief`:
/// sum_{t=1..H} gamma^t * (-g)^T q_t with q_t the pushed-forward belief.
double policy_efe(const GenerativeModel& model, const Belief& belief,
                  const Eigen::VectorXd& g, const Policy& policy, double gamma);

/// Per-decision planner telemetry.
struct PlanStats {
  std::int64_t policies = 0;    // leaves of the policy tree
  std::int64_t nodes = 0;       // belief pushforwards actually evaluated
};

/// Marginal distribution over the first action: softmax over -beta * cost of
/// every policy, summed by root action. Shares policy prefixes via DFS so
/// each tree node costs one belief pushforward. beta = +infinity returns a
/// one-hot on the root action of the lexicographically first minimum-cost
/// policy.
Eigen::VectorXd plan_action_marginal(const GenerativeModel& model, const Belief& belief,
                                     const Eigen::VectorXd& g, const PlannerConfig& config,
                                     PlanStats* stats = nullptr);

/// Samples the first action from the marginal (or returns its argmax when
/// beta = +infinity, as the marginal is then one-hot).
int plan_action(const GenerativeModel& model, const Belief& belief, const Eigen::VectorXd& g,
                const PlannerConfig& config, Rng& rng, PlanStats* stats = nullptr);

}  // namespace sraif
