#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "sraif/gridworld.hpp"
#include "sraif/planner.hpp"
#include "support.hpp"

using namespace sraif;
using test_support::random_column_stochastic;
using test_support::thrown_code;

namespace {

/// Reference implementation: enumerate every policy, score it with
/// policy_efe, and aggregate softmax mass by root action. The DFS planner
/// must reproduce this to near machine precision.
Eigen::VectorXd brute_force_marginal(const GenerativeModel& model, const Belief& belief,
                                     const Eigen::VectorXd& g, const PlannerConfig& config) {
  PolicyEnumerator enumerator(model.num_actions, config.horizon, config.policy_cap);
  Policy policy;
  std::vector<std::pair<int, double>> scored;
  double min_cost = std::numeric_limits<double>::infinity();
  while (enumerator.next(policy)) {
    const double cost = policy_efe(model, belief, g, policy, config.gamma);
    scored.emplace_back(policy.front(), cost);
    min_cost = std::min(min_cost, cost);
  }
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(model.num_actions);
  for (const auto& [root, cost] : scored) {
    mass[root] += std::exp(-config.beta * (cost - min_cost));
  }
  return mass / mass.sum();
}

/// Root action of the lexicographically first minimum-cost policy.
int brute_force_greedy_root(const GenerativeModel& model, const Belief& belief,
                            const Eigen::VectorXd& g, const PlannerConfig& config) {
  PolicyEnumerator enumerator(model.num_actions, config.horizon, config.policy_cap);
  Policy policy;
  double best = std::numeric_limits<double>::infinity();
  int root = 0;
  while (enumerator.next(policy)) {
    const double cost = policy_efe(model, belief, g, policy, config.gamma);
    if (cost < best) {
      best = cost;
      root = policy.front();
    }
  }
  return root;
}

GenerativeModel random_model(int n, int num_actions, Rng& rng) {
  GenerativeModel model;
  model.num_states = n;
  model.num_obs = n;
  model.num_actions = num_actions;
  model.A = Eigen::MatrixXd::Identity(n, n);
  for (int u = 0; u < num_actions; ++u) {
    model.B.push_back(random_column_stochastic(n, rng));
  }
  model.C = Eigen::VectorXd::Zero(n);
  return model;
}

Eigen::VectorXd random_reward(int n, Rng& rng) {
  Eigen::VectorXd g(n);
  for (int s = 0; s < n; ++s) {
    g[s] = 2.0 * rng.next_double() - 1.0;
  }
  return g;
}

}  // namespace

TEST_CASE("policy enumerator walks lexicographic order and counts") {
  PolicyEnumerator enumerator(2, 3, 100);
  CHECK(enumerator.count() == 8);
  Policy policy;
  std::vector<Policy> seen;
  while (enumerator.next(policy)) {
    seen.push_back(policy);
  }
  REQUIRE(seen.size() == 8);
  CHECK(seen.front() == Policy{0, 0, 0});
  CHECK(seen[1] == Policy{0, 0, 1});
  CHECK(seen[2] == Policy{0, 1, 0});
  CHECK(seen.back() == Policy{1, 1, 1});
  CHECK_FALSE(enumerator.next(policy));  // stays exhausted

  enumerator.reset();
  CHECK(enumerator.next(policy));
  CHECK(policy == Policy{0, 0, 0});
}

TEST_CASE("the explosion cap fires before any overflow") {
  CHECK(thrown_code([] { PolicyEnumerator(10, 10, 10'000'000); }) == ErrorCode::ExplosionCap);
  CHECK(thrown_code([] { PolicyEnumerator(1000, 1000, 10'000'000); }) ==
        ErrorCode::ExplosionCap);
  CHECK_NOTHROW(PolicyEnumerator(5, 7, 10'000'000));  // 78125 policies fits
  CHECK(thrown_code([] { PolicyEnumerator(0, 3, 100); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { PolicyEnumerator(2, 3, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("policy_efe matches a hand-rolled rollout on a chain") {
  GenerativeModel model;
  model.num_states = 3;
  model.num_obs = 3;
  model.num_actions = 2;
  model.A = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(3, 3);
  shift(1, 0) = 1.0;  // 0 -> 1
  shift(2, 1) = 1.0;  // 1 -> 2
  shift(2, 2) = 1.0;  // 2 absorbs
  model.B = {shift, Eigen::MatrixXd::Identity(3, 3)};
  model.C = Eigen::VectorXd::Zero(3);

  Eigen::VectorXd g(3);
  g << 0.0, 0.0, 1.0;
  const Belief start = Belief::delta(3, 0);

  CHECK(policy_efe(model, start, g, {0, 0}, 0.5) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(policy_efe(model, start, g, {0, 1}, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(policy_efe(model, start, g, {0, 0, 1}, 0.5) ==
        doctest::Approx(-0.375).epsilon(1e-15));
  CHECK(policy_efe(model, start, g, {1, 1, 1}, 0.5) == doctest::Approx(0.0).epsilon(1e-15));

  CHECK(thrown_code([&] { policy_efe(model, start, g, {}, 0.5); }) ==
        ErrorCode::InvalidArgument);
  CHECK(thrown_code([&] { policy_efe(model, start, g, {0, 7}, 0.5); }) ==
        ErrorCode::IndexOutOfRange);
}

TEST_CASE("dfs marginal equals brute-force enumeration on stochastic models") {
  Rng rng(555);
  for (int trial = 0; trial < 5; ++trial) {
    const GenerativeModel model = random_model(4, 3, rng);
    const Eigen::VectorXd g = random_reward(4, rng);
    PlannerConfig config;
    config.horizon = 3 + trial % 2;
    config.beta = 2.0;
    config.gamma = 0.9;

    Belief belief;
    belief.probs = Eigen::VectorXd::Constant(4, 0.25);

    const Eigen::VectorXd expected = brute_force_marginal(model, belief, g, config);
    const Eigen::VectorXd actual = plan_action_marginal(model, belief, g, config);
    CHECK((expected - actual).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("the one-hot fast path agrees with dense evaluation") {
  GridSpec spec;  // 3x3 grid: every B slice is exactly one-hot
  const GenerativeModel model = build_model(spec);
  Eigen::VectorXd g(9);
  g.setZero();
  g[8] = 2.0;
  g[4] = 0.3;

  PlannerConfig config;
  config.horizon = 4;
  config.beta = 2.0;
  config.gamma = 0.9;

  Belief belief;
  belief.probs = Eigen::VectorXd::Constant(9, 1.0 / 8.0);
  belief.probs[8] = 0.0;

  const Eigen::VectorXd expected = brute_force_marginal(model, belief, g, config);
  const Eigen::VectorXd actual = plan_action_marginal(model, belief, g, config);
  CHECK((expected - actual).cwiseAbs().maxCoeff() <= 1e-12);

  config.beta = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd greedy = plan_action_marginal(model, belief, g, config);
  CHECK(greedy[brute_force_greedy_root(model, belief, g, config)] == 1.0);
  CHECK(greedy.sum() == 1.0);
}

TEST_CASE("greedy ties resolve to the lexicographically first root") {
  GenerativeModel model;
  model.num_states = 2;
  model.num_obs = 2;
  model.num_actions = 3;
  model.A = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  model.B = {swap, swap, swap};  // indistinguishable actions
  model.C = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd g(2);
  g << 0.3, -0.2;

  PlannerConfig config;
  config.horizon = 3;
  config.beta = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd greedy =
      plan_action_marginal(model, Belief::delta(2, 0), g, config);
  CHECK(greedy[0] == 1.0);

  config.beta = 4.0;
  const Eigen::VectorXd soft = plan_action_marginal(model, Belief::delta(2, 0), g, config);
  for (int u = 0; u < 3; ++u) {
    CHECK(soft[u] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("plan stats count leaves and interior pushforwards") {
  GenerativeModel model;
  model.num_states = 2;
  model.num_obs = 2;
  model.num_actions = 2;
  model.A = Eigen::MatrixXd::Identity(2, 2);
  model.B = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  model.C = Eigen::VectorXd::Zero(2);

  PlannerConfig config;
  config.horizon = 3;
  PlanStats stats;
  plan_action_marginal(model, Belief::uniform(2), Eigen::VectorXd::Zero(2), config, &stats);
  CHECK(stats.policies == 8);
  CHECK(stats.nodes == 14);  // 2 + 4 + 8 shared-prefix nodes
}

TEST_CASE("planner argument validation") {
  GenerativeModel model;
  model.num_states = 2;
  model.num_obs = 2;
  model.num_actions = 2;
  model.A = Eigen::MatrixXd::Identity(2, 2);
  model.B = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  model.C = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd g = Eigen::VectorXd::Zero(2);
  const Belief belief = Belief::uniform(2);

  PlannerConfig config;
  config.horizon = 0;
  CHECK(thrown_code([&] { plan_action_marginal(model, belief, g, config); }) ==
        ErrorCode::InvalidArgument);

  config.horizon = 3;
  config.beta = -1.0;
  CHECK(thrown_code([&] { plan_action_marginal(model, belief, g, config); }) ==
        ErrorCode::InvalidArgument);
  config.beta = std::nan("");
  CHECK(thrown_code([&] { plan_action_marginal(model, belief, g, config); }) ==
        ErrorCode::InvalidArgument);

  config.beta = 1.0;
  config.gamma = 0.0;
  CHECK(thrown_code([&] { plan_action_marginal(model, belief, g, config); }) ==
        ErrorCode::InvalidArgument);

  config.gamma = 0.9;
  CHECK(thrown_code([&] { plan_action_marginal(model, Belief::uniform(3), g, config); }) ==
        ErrorCode::ShapeMismatch);

  config.horizon = 12;  // 2^12 = 4096 policies; cap of 100 must fire
  config.policy_cap = 100;
  CHECK(thrown_code([&] { plan_action_marginal(model, belief, g, config); }) ==
        ErrorCode::ExplosionCap);
}

TEST_CASE("plan_action samples reproducibly and respects greedy") {
  GridSpec spec;
  const GenerativeModel model = build_model(spec);
  Eigen::VectorXd g(9);
  g.setZero();
  g[8] = 2.0;
  const Belief belief = Belief::delta(9, 4);

  PlannerConfig config;
  config.horizon = 3;
  config.beta = 4.0;

  Rng a(77);
  Rng b(77);
  for (int i = 0; i < 10; ++i) {
    CHECK(plan_action(model, belief, g, config, a) == plan_action(model, belief, g, config, b));
  }

  config.beta = std::numeric_limits<double>::infinity();
  Rng rng(5);
  const int greedy_action = plan_action(model, belief, g, config, rng);
  // From the center the only minimum-cost roots move toward the goal; the
  // lexicographically first of DOWN(1)/RIGHT(3) is DOWN.
  CHECK(greedy_action == kDown);
}
